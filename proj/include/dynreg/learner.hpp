#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "dynreg/embedded.hpp"
#include "dynreg/precond.hpp"

namespace dynreg {

/// One-dimensional betting learner driven by the scalar dual losses
/// <v~_t, g~_t>. Swappable so other parameter-free schemes can be plugged
/// into the reducers.
class ScalarLearner {
public:
    virtual ~ScalarLearner() = default;
    virtual double bet() const = 0;
    virtual void update(double scalar_loss) = 0;
    virtual double wealth() const = 0;
    virtual double gbound() const = 0;
    virtual long clip_count() const = 0;
};

/// Default learner: Krichevsky-Trofimov coin betting with initial wealth
/// eps * gbound. The bet is a signed fraction of current wealth, so wealth
/// never goes negative on losses bounded by gbound.
class OneDLearner final : public ScalarLearner {
public:
    OneDLearner(double eps, double gbound);

    /// beta_t from the current state: (grad_sum / (gbound^2 (count+1))) * wealth.
    double bet() const override;

    /// Books the scalar loss: wealth -= c * bet(), grad_sum -= c, count += 1.
    /// Losses beyond gbound * (1 + 1e-9) are clipped and counted.
    void update(double scalar_loss) override;

    double wealth() const override { return wealth_; }
    double grad_sum() const { return grad_sum_; }
    long rounds_seen() const { return count_; }
    double eps() const { return eps_; }
    double gbound() const override { return gbound_; }
    long clip_count() const override { return clip_count_; }

private:
    double eps_;
    double gbound_;
    double wealth_;
    double grad_sum_ = 0.0;
    long count_ = 0;
    long clip_count_ = 0;
};

/// Scale-free FTRL direction learner constrained to the unit ||.||_M ball.
/// Maintains the gradient sum G~, its preconditioned image M^{-1} G~, the
/// scale V = sum ||g~_s||^2_{M^{-1}} and the dual norm ||G~||^2_{M^{-1}}
/// (updated incrementally). The emitted direction is
///   v~ = -M^{-1} G~ / max(sqrt(V), ||G~||_{M^{-1}}),
/// which keeps ||v~||_M <= 1; when V = 0 the direction is the zero vector.
class DirectionLearner {
public:
    DirectionLearner(std::shared_ptr<const Preconditioner> s, std::size_t dim);

    EmbeddedVector direction() const;
    void direction_block(std::size_t t, std::span<double> out) const;

    /// Feeds g~_t = e_t (x) g. Must be called with the round the loss arrived in.
    void observe(std::size_t t, std::span<const double> g);

    double scale_sum() const { return v_sum_; }
    double dual_norm_sq() const { return dual_sq_ < 0.0 ? 0.0 : dual_sq_; }
    const EmbeddedVector& grad_accum() const { return grad_accum_; }

private:
    double denominator() const;

    std::shared_ptr<const Preconditioner> s_;
    std::size_t dim_;
    EmbeddedVector grad_accum_;  // G~
    EmbeddedVector inv_grad_;    // M^{-1} G~
    double v_sum_ = 0.0;
    double dual_sq_ = 0.0;
    std::vector<double> col_scratch_;
};

/// Combined reducer protocol: play() returns w_t for the upcoming round
/// (without mutating state), observe() feeds the revealed loss and advances.
/// Single-owner mutable; distinct instances may run in parallel.
class Reducer {
public:
    virtual ~Reducer() = default;

    virtual std::size_t horizon() const = 0;
    virtual std::size_t dim() const = 0;
    virtual std::size_t round() const = 0;  // rounds completed so far

    virtual std::vector<double> play() const = 0;
    virtual void observe(std::span<const double> g) = 0;

    virtual double bet() const = 0;            // beta for the upcoming round
    virtual double scale_sum() const = 0;      // V after the last observe
    virtual double dual_norm_sq() const = 0;   // ||G~||^2_{M^{-1}}
    virtual double wealth() const = 0;
    virtual double gbound() const = 0;
    virtual double last_scalar_loss() const = 0;
    virtual long clip_count() const = 0;

    /// Full high-dimensional iterate beta_t * v~_t. Debug and oracle tests
    /// only; the per-round path materializes just the round block.
    virtual EmbeddedVector full_iterate() const = 0;
};

/// Reducer over an arbitrary pairing; the M^{-1} image of the gradient sum is
/// maintained through inverse columns of S. This is the dense-oracle path.
class GenericReducer final : public Reducer {
public:
    /// Default one-dimensional learner: KT betting with gbound set to the
    /// pairing's dual-norm Lipschitz constant for loss_bound-bounded losses.
    GenericReducer(std::shared_ptr<const Preconditioner> s, std::size_t dim,
                   double loss_bound, double eps);
    GenericReducer(std::shared_ptr<const Preconditioner> s, std::size_t dim,
                   std::unique_ptr<ScalarLearner> bettor);

    std::size_t horizon() const override { return s_->order(); }
    std::size_t dim() const override { return dim_; }
    std::size_t round() const override { return round_; }
    std::vector<double> play() const override;
    void observe(std::span<const double> g) override;
    double bet() const override { return oned_->bet(); }
    double scale_sum() const override { return direction_.scale_sum(); }
    double dual_norm_sq() const override { return direction_.dual_norm_sq(); }
    double wealth() const override { return oned_->wealth(); }
    double gbound() const override { return oned_->gbound(); }
    double last_scalar_loss() const override { return last_scalar_loss_; }
    long clip_count() const override { return oned_->clip_count(); }
    EmbeddedVector full_iterate() const override;

    const DirectionLearner& direction_learner() const { return direction_; }

private:
    std::shared_ptr<const Preconditioner> s_;
    std::size_t dim_;
    std::unique_ptr<ScalarLearner> oned_;
    DirectionLearner direction_;
    std::size_t round_ = 0;
    double last_scalar_loss_ = 0.0;
};

/// Reducer specialized to S = (H_n H_n^T)^{-1} touching O(d log T) memory per
/// round. Keeps the Haar-coefficient image theta^ = -(H^T (x) I) G~ and the
/// cross-term cache Lambda = sum_{i<t} g_i h_i^T; the round block of the
/// direction and the dual-norm increment both come from the 1+log2(T)
/// nonzeros of the Haar row h_t.
class FastHaarReducer final : public Reducer {
public:
    FastHaarReducer(std::size_t horizon_pow2, std::size_t dim,
                    double loss_bound, double eps);
    FastHaarReducer(std::size_t horizon_pow2, std::size_t dim,
                    std::unique_ptr<ScalarLearner> bettor);

    std::size_t horizon() const override { return horizon_; }
    std::size_t dim() const override { return dim_; }
    std::size_t round() const override { return round_; }
    std::vector<double> play() const override;
    void observe(std::span<const double> g) override;
    double bet() const override { return oned_->bet(); }
    double scale_sum() const override { return v_sum_; }
    double dual_norm_sq() const override { return dual_sq_ < 0.0 ? 0.0 : dual_sq_; }
    double wealth() const override { return oned_->wealth(); }
    double gbound() const override { return oned_->gbound(); }
    double last_scalar_loss() const override { return last_scalar_loss_; }
    long clip_count() const override { return oned_->clip_count(); }
    EmbeddedVector full_iterate() const override;

    std::size_t levels() const { return n_; }
    std::size_t last_touched_columns() const { return last_touched_; }

private:
    void direction_block(std::size_t t, std::span<double> out) const;

    std::size_t horizon_;
    std::size_t n_;
    std::size_t dim_;
    std::unique_ptr<ScalarLearner> oned_;
    std::vector<double> lambda_;      // d x T, column-major
    EmbeddedVector theta_hat_;        // Haar-coefficient space, T blocks of d
    double v_sum_ = 0.0;
    double dual_sq_ = 0.0;
    std::size_t round_ = 0;
    double last_scalar_loss_ = 0.0;
    std::size_t last_touched_ = 0;
};

}  // namespace dynreg
