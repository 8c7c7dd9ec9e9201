#include "dynreg/precond.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dynreg/difference.hpp"
#include "dynreg/haar.hpp"

namespace dynreg {

DenseMatrix Preconditioner::dense() const {
    const std::size_t T = order();
    DenseMatrix out(T, T);
    std::vector<double> e(T, 0.0), col(T);
    for (std::size_t j = 0; j < T; ++j) {
        e[j] = 1.0;
        apply(e, col);
        for (std::size_t i = 0; i < T; ++i) out(i, j) = col[i];
        e[j] = 0.0;
    }
    return out;
}

DenseMatrix Preconditioner::dense_inverse() const {
    const std::size_t T = order();
    DenseMatrix out(T, T);
    std::vector<double> col(T);
    for (std::size_t j = 0; j < T; ++j) {
        inverse_column(j, col);
        for (std::size_t i = 0; i < T; ++i) out(i, j) = col[i];
    }
    return out;
}

void IdentityPreconditioner::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != order_ || y.size() != order_)
        throw std::invalid_argument("IdentityPreconditioner: size mismatch");
    for (std::size_t i = 0; i < order_; ++i) y[i] = x[i];
}

void IdentityPreconditioner::apply_inverse(std::span<const double> x, std::span<double> y) const {
    apply(x, y);
}

void IdentityPreconditioner::inverse_column(std::size_t t, std::span<double> y) const {
    if (t >= order_ || y.size() != order_)
        throw std::invalid_argument("IdentityPreconditioner: bad column request");
    for (std::size_t i = 0; i < order_; ++i) y[i] = 0.0;
    y[t] = 1.0;
}

void DifferencePreconditioner::apply(std::span<const double> x, std::span<double> y) const {
    DifferenceOperator sigma(order_);
    std::vector<double> mid(order_);
    sigma.apply(x, mid);
    sigma.apply_transpose(mid, y);
}

void DifferencePreconditioner::apply_inverse(std::span<const double> x, std::span<double> y) const {
    DifferenceOperator sigma(order_);
    std::vector<double> mid(order_);
    sigma.apply_inverse_transpose(x, mid);
    sigma.apply_inverse(mid, y);
}

double DifferencePreconditioner::inverse_diagonal(std::size_t t) const {
    return difference_M_inverse_entry(t, t, order_);
}

void DifferencePreconditioner::inverse_column(std::size_t t, std::span<double> y) const {
    if (t >= order_ || y.size() != order_)
        throw std::invalid_argument("DifferencePreconditioner: bad column request");
    for (std::size_t i = 0; i < order_; ++i)
        y[i] = static_cast<double>(order_ - std::max(i, t));
}

HaarPreconditioner::HaarPreconditioner(std::size_t order_pow2)
    : size_(order_pow2), n_(log2_exact(order_pow2)) {}

void HaarPreconditioner::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != size_ || y.size() != size_)
        throw std::invalid_argument("HaarPreconditioner: size mismatch");
    // S x = H D^{-4} H^T x via the factorization H^{-1} = D^{-2} H^T
    std::vector<double> coeff(size_);
    haar_transpose_apply(x, coeff);
    for (std::size_t p = 0; p < size_; ++p) {
        const double s = haar_scale_sq(p, n_);
        coeff[p] /= s * s;
    }
    haar_apply(coeff, y);
}

void HaarPreconditioner::apply_inverse(std::span<const double> x, std::span<double> y) const {
    if (x.size() != size_ || y.size() != size_)
        throw std::invalid_argument("HaarPreconditioner: size mismatch");
    std::vector<double> coeff(size_);
    haar_transpose_apply(x, coeff);
    haar_apply(coeff, y);
}

void HaarPreconditioner::inverse_column(std::size_t t, std::span<double> y) const {
    if (t >= size_ || y.size() != size_)
        throw std::invalid_argument("HaarPreconditioner: bad column request");
    std::vector<double> h(size_, 0.0);
    for (const auto& [idx, val] : haar_row(t, n_)) h[idx] = val;
    haar_apply(h, y);
}

DensePreconditioner::DensePreconditioner(DenseSPD s, std::string label)
    : s_(s.matrix()), sinv_(gauss_jordan_inverse(s_)), label_(std::move(label)) {
    sinv_.symmetrize();
}

void DensePreconditioner::apply(std::span<const double> x, std::span<double> y) const {
    s_.multiply(x, y);
}

void DensePreconditioner::apply_inverse(std::span<const double> x, std::span<double> y) const {
    sinv_.multiply(x, y);
}

void DensePreconditioner::inverse_column(std::size_t t, std::span<double> y) const {
    if (t >= order() || y.size() != order())
        throw std::invalid_argument("DensePreconditioner: bad column request");
    for (std::size_t i = 0; i < order(); ++i) y[i] = sinv_(i, t);
}

namespace {

EmbeddedVector apply_blockwise(const Preconditioner& s, const EmbeddedVector& x, bool inverse) {
    if (x.rounds() != s.order())
        throw std::invalid_argument("pairing application: round count mismatch");
    const std::size_t T = x.rounds();
    const std::size_t d = x.dim();
    EmbeddedVector out(T, d);
    std::vector<double> series(T), image(T);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t t = 0; t < T; ++t) series[t] = x.block(t)[j];
        if (inverse)
            s.apply_inverse(series, image);
        else
            s.apply(series, image);
        for (std::size_t t = 0; t < T; ++t) out.block(t)[j] = image[t];
    }
    return out;
}

}  // namespace

EmbeddedVector apply_pairing(const Preconditioner& s, const EmbeddedVector& x) {
    return apply_blockwise(s, x, false);
}

EmbeddedVector apply_pairing_inverse(const Preconditioner& s, const EmbeddedVector& x) {
    return apply_blockwise(s, x, true);
}

double weighted_norm_sq(const EmbeddedVector& x, const Preconditioner& s) {
    return x.dot(apply_pairing(s, x));
}

double dual_weighted_norm_sq(const EmbeddedVector& x, const Preconditioner& s) {
    return x.dot(apply_pairing_inverse(s, x));
}

double lipschitz_bound(const Preconditioner& s, double G) {
    if (!(G > 0.0)) throw std::invalid_argument("lipschitz_bound: G must be positive");
    return G * s.max_abs_inverse_entry();
}

}  // namespace dynreg
