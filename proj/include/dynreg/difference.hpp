#pragma once

#include <cstddef>
#include <span>

#include "dynreg/dense.hpp"

namespace dynreg {

/// The finite-difference operator: unit diagonal, -1 on the first
/// superdiagonal. Never materialized in the hot path; every apply is O(T).
/// Its inverse is the upper-triangular matrix of ones, so inverse applies
/// reduce to prefix/suffix sums.
class DifferenceOperator {
public:
    explicit DifferenceOperator(std::size_t order);

    std::size_t order() const { return order_; }

    void apply(std::span<const double> x, std::span<double> y) const;            // Sigma x
    void apply_transpose(std::span<const double> x, std::span<double> y) const;  // Sigma^T x
    void apply_inverse(std::span<const double> x, std::span<double> y) const;    // suffix sums
    void apply_inverse_transpose(std::span<const double> x, std::span<double> y) const;  // prefix sums

    DenseMatrix dense() const;
    DenseMatrix dense_inverse() const;

private:
    std::size_t order_;
};

/// Entry (i, j) of (Sigma^T Sigma)^{-1}, 0-based: T - max(i, j).
/// Throws std::out_of_range outside the T x T grid.
double difference_M_inverse_entry(std::size_t i, std::size_t j, std::size_t T);

/// Trace of (Sigma^T Sigma)^{-1}: T (T + 1) / 2.
double difference_trace_inverse(std::size_t T);

}  // namespace dynreg
