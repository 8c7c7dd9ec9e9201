#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

#include "dynreg/dense.hpp"
#include "dynreg/embedded.hpp"

namespace dynreg {

/// SPD pairing S on the round axis. The induced norm pair on R^{dT} is
/// (||.||_M, ||.||_{M^{-1}}) with M = S (x) I_d; all block operations apply S
/// coordinate-wise so the dT x dT matrix never exists. Implementations are
/// immutable after construction and safe to share across threads.
class Preconditioner {
public:
    virtual ~Preconditioner() = default;

    virtual std::size_t order() const = 0;  // T

    virtual void apply(std::span<const double> x, std::span<double> y) const = 0;          // S x
    virtual void apply_inverse(std::span<const double> x, std::span<double> y) const = 0;  // S^{-1} x

    virtual double inverse_diagonal(std::size_t t) const = 0;                    // S^{-1}_tt
    virtual void inverse_column(std::size_t t, std::span<double> y) const = 0;   // S^{-1} e_t
    virtual double max_abs_inverse_entry() const = 0;

    virtual std::string label() const = 0;

    // Oracle/debug materializations; built column by column from apply().
    DenseMatrix dense() const;
    DenseMatrix dense_inverse() const;
};

class IdentityPreconditioner final : public Preconditioner {
public:
    explicit IdentityPreconditioner(std::size_t order) : order_(order) {}
    std::size_t order() const override { return order_; }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_inverse(std::span<const double> x, std::span<double> y) const override;
    double inverse_diagonal(std::size_t) const override { return 1.0; }
    void inverse_column(std::size_t t, std::span<double> y) const override;
    double max_abs_inverse_entry() const override { return 1.0; }
    std::string label() const override { return "identity"; }

private:
    std::size_t order_;
};

/// S = Sigma^T Sigma, the squared path-length form. All applies O(T).
class DifferencePreconditioner final : public Preconditioner {
public:
    explicit DifferencePreconditioner(std::size_t order) : order_(order) {}
    std::size_t order() const override { return order_; }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_inverse(std::span<const double> x, std::span<double> y) const override;
    double inverse_diagonal(std::size_t t) const override;
    void inverse_column(std::size_t t, std::span<double> y) const override;
    double max_abs_inverse_entry() const override { return static_cast<double>(order_); }
    std::string label() const override { return "difference"; }

private:
    std::size_t order_;
};

/// S = (H_n H_n^T)^{-1}, the Haar timescale form. Applies run through the
/// O(T) fast transforms; S^{-1} = H_n H_n^T.
class HaarPreconditioner final : public Preconditioner {
public:
    explicit HaarPreconditioner(std::size_t order_pow2);
    std::size_t order() const override { return size_; }
    std::size_t levels() const { return n_; }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_inverse(std::span<const double> x, std::span<double> y) const override;
    double inverse_diagonal(std::size_t) const override { return static_cast<double>(1 + n_); }
    void inverse_column(std::size_t t, std::span<double> y) const override;
    double max_abs_inverse_entry() const override { return static_cast<double>(1 + n_); }
    std::string label() const override { return "haar"; }

private:
    std::size_t size_;
    std::size_t n_;
};

/// Arbitrary dense SPD pairing; the inverse is materialized once at
/// construction. Desk scale only.
class DensePreconditioner final : public Preconditioner {
public:
    explicit DensePreconditioner(DenseSPD s, std::string label = "dense");
    std::size_t order() const override { return s_.rows(); }
    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_inverse(std::span<const double> x, std::span<double> y) const override;
    double inverse_diagonal(std::size_t t) const override { return sinv_(t, t); }
    void inverse_column(std::size_t t, std::span<double> y) const override;
    double max_abs_inverse_entry() const override { return sinv_.max_abs(); }
    std::string label() const override { return label_; }
    const DenseMatrix& inverse_matrix() const { return sinv_; }

private:
    DenseMatrix s_;
    DenseMatrix sinv_;
    std::string label_;
};

/// (S (x) I_d) x, applied blockwise.
EmbeddedVector apply_pairing(const Preconditioner& s, const EmbeddedVector& x);
/// (S^{-1} (x) I_d) x, applied blockwise.
EmbeddedVector apply_pairing_inverse(const Preconditioner& s, const EmbeddedVector& x);

/// ||x||^2_M = <x, (S (x) I_d) x>. Throws std::invalid_argument when the
/// vector's round count does not match the pairing order.
double weighted_norm_sq(const EmbeddedVector& x, const Preconditioner& s);
/// ||x||^2_{M^{-1}} = <x, (S^{-1} (x) I_d) x>.
double dual_weighted_norm_sq(const EmbeddedVector& x, const Preconditioner& s);

/// Dual-norm Lipschitz constant of embedded losses: G times the maximum
/// absolute entry of S^{-1}. Requires G > 0.
double lipschitz_bound(const Preconditioner& s, double G);

}  // namespace dynreg
