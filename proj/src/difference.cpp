#include "dynreg/difference.hpp"

#include <stdexcept>

namespace dynreg {

DifferenceOperator::DifferenceOperator(std::size_t order) : order_(order) {
    if (order == 0) throw std::invalid_argument("DifferenceOperator: order must be positive");
}

void DifferenceOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != order_ || y.size() != order_)
        throw std::invalid_argument("DifferenceOperator::apply: size mismatch");
    for (std::size_t i = 0; i + 1 < order_; ++i) y[i] = x[i] - x[i + 1];
    y[order_ - 1] = x[order_ - 1];
}

void DifferenceOperator::apply_transpose(std::span<const double> x, std::span<double> y) const {
    if (x.size() != order_ || y.size() != order_)
        throw std::invalid_argument("DifferenceOperator::apply_transpose: size mismatch");
    for (std::size_t i = order_; i-- > 1;) y[i] = x[i] - x[i - 1];
    y[0] = x[0];
}

void DifferenceOperator::apply_inverse(std::span<const double> x, std::span<double> y) const {
    if (x.size() != order_ || y.size() != order_)
        throw std::invalid_argument("DifferenceOperator::apply_inverse: size mismatch");
    double acc = 0.0;  // suffix sums: the inverse is the upper triangle of ones
    for (std::size_t i = order_; i-- > 0;) {
        acc += x[i];
        y[i] = acc;
    }
}

void DifferenceOperator::apply_inverse_transpose(std::span<const double> x,
                                                 std::span<double> y) const {
    if (x.size() != order_ || y.size() != order_)
        throw std::invalid_argument("DifferenceOperator::apply_inverse_transpose: size mismatch");
    double acc = 0.0;  // prefix sums
    for (std::size_t i = 0; i < order_; ++i) {
        acc += x[i];
        y[i] = acc;
    }
}

DenseMatrix DifferenceOperator::dense() const {
    DenseMatrix m(order_, order_);
    for (std::size_t i = 0; i < order_; ++i) {
        m(i, i) = 1.0;
        if (i + 1 < order_) m(i, i + 1) = -1.0;
    }
    return m;
}

DenseMatrix DifferenceOperator::dense_inverse() const {
    DenseMatrix m(order_, order_);
    for (std::size_t i = 0; i < order_; ++i)
        for (std::size_t j = i; j < order_; ++j) m(i, j) = 1.0;
    return m;
}

double difference_M_inverse_entry(std::size_t i, std::size_t j, std::size_t T) {
    if (i >= T || j >= T)
        throw std::out_of_range("difference_M_inverse_entry: index out of range");
    return static_cast<double>(T - std::max(i, j));
}

double difference_trace_inverse(std::size_t T) {
    return 0.5 * static_cast<double>(T) * static_cast<double>(T + 1);
}

}  // namespace dynreg
