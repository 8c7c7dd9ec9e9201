#pragma once

// Test-only reference implementations. Everything here is deliberately
// brute-force and kept independent of the library's incremental update paths:
// dense Kronecker materialization, from-scratch norm recomputation per round,
// and a local matrix inverse.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "dynreg/dense.hpp"
#include "dynreg/embedded.hpp"

namespace oracle {

using dynreg::DenseMatrix;
using dynreg::EmbeddedVector;

// Plain Gauss elimination, local so the oracle does not share the library's
// inversion code path.
inline DenseMatrix invert(const DenseMatrix& a) {
    const std::size_t n = a.rows();
    DenseMatrix w = a;
    DenseMatrix inv = DenseMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(w(r, c)) > std::fabs(w(piv, c))) piv = r;
        if (std::fabs(w(piv, c)) == 0.0) throw std::runtime_error("oracle::invert: singular");
        if (piv != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w(c, j), w(piv, j));
                std::swap(inv(c, j), inv(piv, j));
            }
        const double p = w(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            w(c, j) /= p;
            inv(c, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = w(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                w(r, j) -= f * w(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

inline DenseMatrix kron_with_identity(const DenseMatrix& s, std::size_t d) {
    const std::size_t T = s.rows();
    DenseMatrix out(T * d, T * d);
    for (std::size_t i = 0; i < T; ++i)
        for (std::size_t j = 0; j < T; ++j)
            for (std::size_t k = 0; k < d; ++k) out(i * d + k, j * d + k) = s(i, j);
    return out;
}

inline double quad_form(const DenseMatrix& m, std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) row += m(i, j) * x[j];
        acc += x[i] * row;
    }
    return acc;
}

// From-scratch reducer over a dense pairing S. Every round rebuilds the
// gradient sum, applies the dense (S^{-1} (x) I_d) matrix, and recomputes the
// quadratic forms with no incremental bookkeeping.
class DenseReducer {
public:
    DenseReducer(const DenseMatrix& s, std::size_t d, double loss_bound, double eps)
        : T_(s.rows()),
          d_(d),
          sinv_(invert(s)),
          minv_(kron_with_identity(sinv_, d)),
          eps_(eps) {
        gbound_ = loss_bound * sinv_.max_abs();
        wealth_ = eps_ * gbound_;
    }

    double gbound() const { return gbound_; }
    double wealth() const { return wealth_; }
    double scale_sum() const { return v_sum_; }

    std::vector<double> play() {
        const std::vector<double> vt = direction();
        const double beta = bet();
        std::vector<double> w(d_);
        for (std::size_t j = 0; j < d_; ++j) w[j] = beta * vt[round_ * d_ + j];
        return w;
    }

    void observe(std::span<const double> g) {
        const std::vector<double> vt = direction();
        double c = 0.0;
        for (std::size_t j = 0; j < d_; ++j) c += vt[round_ * d_ + j] * g[j];
        const double lim = gbound_ * (1.0 + 1e-9);
        if (c > lim) c = lim;
        if (c < -lim) c = -lim;
        wealth_ -= c * bet();
        grad_sum_ -= c;
        ++count_;

        std::vector<double> gt(T_ * d_, 0.0);
        for (std::size_t j = 0; j < d_; ++j) gt[round_ * d_ + j] = g[j];
        v_sum_ += quad_form(minv_, gt);
        if (grad_.empty()) grad_.assign(T_ * d_, 0.0);
        for (std::size_t i = 0; i < T_ * d_; ++i) grad_[i] += gt[i];
        ++round_;
    }

    std::vector<double> full_iterate() {
        std::vector<double> vt = direction();
        const double beta = bet();
        for (double& x : vt) x *= beta;
        return vt;
    }

private:
    double bet() const {
        return grad_sum_ / (gbound_ * gbound_ * static_cast<double>(count_ + 1)) * wealth_;
    }

    std::vector<double> direction() {
        if (grad_.empty()) grad_.assign(T_ * d_, 0.0);
        std::vector<double> out(T_ * d_, 0.0);
        if (v_sum_ <= 0.0) return out;
        std::vector<double> img(T_ * d_);
        minv_.multiply(grad_, img);
        const double dual = quad_form(minv_, grad_);
        const double denom = std::max(std::sqrt(v_sum_), std::sqrt(std::max(0.0, dual)));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = -img[i] / denom;
        return out;
    }

    std::size_t T_;
    std::size_t d_;
    DenseMatrix sinv_;
    DenseMatrix minv_;
    double eps_;
    double gbound_ = 0.0;
    double wealth_ = 0.0;
    double grad_sum_ = 0.0;
    long count_ = 0;
    double v_sum_ = 0.0;
    std::vector<double> grad_;
    std::size_t round_ = 0;
};

}  // namespace oracle
