#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace dynreg {

/// Row-major dense matrix for desk-scale oracle and verification work.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    DenseMatrix transpose() const;
    DenseMatrix operator*(const DenseMatrix& rhs) const;
    DenseMatrix operator+(const DenseMatrix& rhs) const;
    DenseMatrix operator-(const DenseMatrix& rhs) const;

    void multiply(std::span<const double> x, std::span<double> y) const;  // y = A x

    double trace() const;
    double frobenius_norm_sq() const;
    double max_abs() const;
    bool is_symmetric(double rel_tol = 1e-12) const;
    void symmetrize();  // A <- (A + A^T)/2, square only

    /// Text format: header "rows cols", then rows of entries.
    void save(std::ostream& os) const;
    static DenseMatrix load(std::istream& is);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(std::span<const double> a);

/// Inverse by Gauss-Jordan with partial pivoting. Throws std::runtime_error
/// on a numerically singular input.
DenseMatrix gauss_jordan_inverse(const DenseMatrix& a);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> jacobi_eigenvalues(DenseMatrix a);

struct PowerIterationResult {
    double lambda = 0.0;
    std::vector<double> vector;
    std::size_t iterations = 0;
};

/// Power iteration for the dominant eigenvalue of a symmetric positive
/// semidefinite operator given by its apply function. Starts from a
/// deterministic positive vector. Throws std::runtime_error if the relative
/// eigenvalue change has not fallen below tol after max_iter iterations.
PowerIterationResult power_iteration(
    const std::function<void(std::span<const double>, std::span<double>)>& apply,
    std::size_t n, double tol = 1e-10, std::size_t max_iter = 100000);

/// T x T symmetric positive definite matrix, validated at construction:
/// symmetry to 1e-12 relative and smallest eigenvalue above 1e-10 * ||S||_F.
/// Throws std::invalid_argument when the check fails.
class DenseSPD {
public:
    explicit DenseSPD(DenseMatrix m);

    const DenseMatrix& matrix() const { return m_; }
    std::size_t order() const { return m_.rows(); }

private:
    DenseMatrix m_;
};

}  // namespace dynreg
