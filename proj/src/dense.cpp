#include "dynreg/dense.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "dynreg/csvio.hpp"

namespace dynreg {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("DenseMatrix: product shape mismatch");
    DenseMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("DenseMatrix: sum shape mismatch");
    DenseMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("DenseMatrix: difference shape mismatch");
    DenseMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

void DenseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != cols_ || y.size() != rows_)
        throw std::invalid_argument("DenseMatrix::multiply: shape mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        double acc = 0.0;
        const double* r = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
        y[i] = acc;
    }
}

double DenseMatrix::trace() const {
    const std::size_t n = std::min(rows_, cols_);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (*this)(i, i);
    return acc;
}

double DenseMatrix::frobenius_norm_sq() const {
    double acc = 0.0;
    for (double x : data_) acc += x * x;
    return acc;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::fabs(x));
    return m;
}

bool DenseMatrix::is_symmetric(double rel_tol) const {
    if (rows_ != cols_) return false;
    const double scale = std::max(1.0, max_abs());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
    return true;
}

void DenseMatrix::symmetrize() {
    if (rows_ != cols_) throw std::invalid_argument("DenseMatrix::symmetrize: not square");
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j) {
            const double m = 0.5 * ((*this)(i, j) + (*this)(j, i));
            (*this)(i, j) = m;
            (*this)(j, i) = m;
        }
}

void DenseMatrix::save(std::ostream& os) const {
    os << rows_ << ' ' << cols_ << '\n';
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << format_double((*this)(i, j));
        }
        os << '\n';
    }
}

DenseMatrix DenseMatrix::load(std::istream& is) {
    std::size_t r = 0, c = 0;
    if (!(is >> r >> c)) throw std::runtime_error("DenseMatrix::load: bad header");
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (!(is >> m(i, j))) throw std::runtime_error("DenseMatrix::load: truncated data");
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm_sq(std::span<const double> a) {
    double acc = 0.0;
    for (double x : a) acc += x * x;
    return acc;
}

DenseMatrix gauss_jordan_inverse(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("gauss_jordan_inverse: not square");
    const std::size_t n = a.rows();
    DenseMatrix work = a;
    DenseMatrix inv = DenseMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(work(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(work(r, col)) > best) {
                best = std::fabs(work(r, col));
                pivot = r;
            }
        }
        if (best < 1e-300) throw std::runtime_error("gauss_jordan_inverse: singular matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work(col, j), work(pivot, j));
                std::swap(inv(col, j), inv(pivot, j));
            }
        }
        const double p = work(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            work(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = work(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                work(r, j) -= f * work(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

std::vector<double> jacobi_eigenvalues(DenseMatrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("jacobi_eigenvalues: not square");
    const std::size_t n = a.rows();
    if (n == 0) return {};
    a.symmetrize();
    const double scale = std::sqrt(a.frobenius_norm_sq());
    const double stop = (scale > 0.0 ? scale : 1.0) * 1e-14;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
        if (std::sqrt(off) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= stop / (n * n)) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp - s * (akq + tau * akp);
                    a(p, k) = a(k, p);
                    a(k, q) = akq + s * (akp - tau * akq);
                    a(q, k) = a(k, q);
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

PowerIterationResult power_iteration(
    const std::function<void(std::span<const double>, std::span<double>)>& apply,
    std::size_t n, double tol, std::size_t max_iter) {
    if (n == 0) throw std::invalid_argument("power_iteration: empty operator");
    std::vector<double> v(n), av(n);
    // positive start with a mild ramp so it is not orthogonal to the
    // dominant eigenvector of an entrywise-positive operator
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i) / n;
    double nrm = std::sqrt(norm_sq(v));
    for (double& x : v) x /= nrm;

    double lambda = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        apply(v, av);
        const double next = dot(v, av);
        nrm = std::sqrt(norm_sq(av));
        if (nrm == 0.0) return {0.0, v, it};
        for (std::size_t i = 0; i < n; ++i) v[i] = av[i] / nrm;
        if (it > 1 && std::fabs(next - lambda) <= tol * std::fabs(next)) {
            return {next, v, it};
        }
        lambda = next;
    }
    throw std::runtime_error("power_iteration: no convergence within iteration budget");
}

DenseSPD::DenseSPD(DenseMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("DenseSPD: not square");
    if (!m_.is_symmetric(1e-12)) throw std::invalid_argument("DenseSPD: not symmetric");
    m_.symmetrize();
    const auto eig = jacobi_eigenvalues(m_);
    const double tol = 1e-10 * std::sqrt(m_.frobenius_norm_sq());
    if (eig.empty() || eig.front() <= tol)
        throw std::invalid_argument("DenseSPD: not positive definite");
}

}  // namespace dynreg
