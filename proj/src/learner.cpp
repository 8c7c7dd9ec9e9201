#include "dynreg/learner.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "dynreg/haar.hpp"

namespace dynreg {

OneDLearner::OneDLearner(double eps, double gbound) : eps_(eps), gbound_(gbound) {
    if (!(eps > 0.0)) throw std::invalid_argument("OneDLearner: eps must be positive");
    if (!(gbound > 0.0)) throw std::invalid_argument("OneDLearner: gbound must be positive");
    wealth_ = eps_ * gbound_;
}

double OneDLearner::bet() const {
    return grad_sum_ / (gbound_ * gbound_ * static_cast<double>(count_ + 1)) * wealth_;
}

void OneDLearner::update(double scalar_loss) {
    const double lim = gbound_ * (1.0 + 1e-9);
    if (scalar_loss > lim) {
        scalar_loss = lim;
        ++clip_count_;
    } else if (scalar_loss < -lim) {
        scalar_loss = -lim;
        ++clip_count_;
    }
    const double beta = bet();
    wealth_ -= scalar_loss * beta;
    grad_sum_ -= scalar_loss;
    ++count_;
}

DirectionLearner::DirectionLearner(std::shared_ptr<const Preconditioner> s, std::size_t dim)
    : s_(std::move(s)),
      dim_(dim),
      grad_accum_(s_->order(), dim),
      inv_grad_(s_->order(), dim),
      col_scratch_(s_->order()) {
    if (dim == 0) throw std::invalid_argument("DirectionLearner: dimension must be positive");
}

double DirectionLearner::denominator() const {
    return std::max(std::sqrt(v_sum_), std::sqrt(dual_norm_sq()));
}

EmbeddedVector DirectionLearner::direction() const {
    EmbeddedVector v(s_->order(), dim_);
    if (v_sum_ <= 0.0) return v;
    const double scale = -1.0 / denominator();
    v.add_scaled(inv_grad_, scale);
    return v;
}

void DirectionLearner::direction_block(std::size_t t, std::span<double> out) const {
    if (v_sum_ <= 0.0) {
        for (auto& x : out) x = 0.0;
        return;
    }
    const double scale = -1.0 / denominator();
    const auto blk = inv_grad_.block(t);
    for (std::size_t j = 0; j < dim_; ++j) out[j] = scale * blk[j];
}

void DirectionLearner::observe(std::size_t t, std::span<const double> g) {
    if (t >= s_->order()) throw std::out_of_range("DirectionLearner::observe: round overflow");
    if (g.size() != dim_) throw std::invalid_argument("DirectionLearner::observe: bad loss dim");

    const double g_sq = norm_sq(g);
    const double self = s_->inverse_diagonal(t) * g_sq;
    // <G~_prev, M^{-1} g~_t> = <(M^{-1} G~_prev) block t, g>
    const double cross = dot(inv_grad_.block(t), g);
    dual_sq_ += self + 2.0 * cross;
    v_sum_ += self;

    auto accum_blk = grad_accum_.block(t);
    for (std::size_t j = 0; j < dim_; ++j) accum_blk[j] += g[j];

    // M^{-1} g~_t = (S^{-1} e_t) (x) g
    s_->inverse_column(t, col_scratch_);
    for (std::size_t s = 0; s < s_->order(); ++s) {
        const double w = col_scratch_[s];
        if (w == 0.0) continue;
        auto blk = inv_grad_.block(s);
        for (std::size_t j = 0; j < dim_; ++j) blk[j] += w * g[j];
    }
}

GenericReducer::GenericReducer(std::shared_ptr<const Preconditioner> s, std::size_t dim,
                               double loss_bound, double eps)
    : s_(std::move(s)),
      dim_(dim),
      oned_(std::make_unique<OneDLearner>(eps, lipschitz_bound(*s_, loss_bound))),
      direction_(s_, dim) {}

GenericReducer::GenericReducer(std::shared_ptr<const Preconditioner> s, std::size_t dim,
                               std::unique_ptr<ScalarLearner> bettor)
    : s_(std::move(s)), dim_(dim), oned_(std::move(bettor)), direction_(s_, dim) {
    if (!oned_) throw std::invalid_argument("GenericReducer: null scalar learner");
}

std::vector<double> GenericReducer::play() const {
    std::vector<double> w(dim_, 0.0);
    direction_.direction_block(round_, w);
    const double beta = oned_->bet();
    for (double& x : w) x *= beta;
    return w;
}

void GenericReducer::observe(std::span<const double> g) {
    if (round_ >= horizon()) throw std::runtime_error("GenericReducer::observe: round overflow");
    if (g.size() != dim_) throw std::invalid_argument("GenericReducer::observe: bad loss dim");

    std::vector<double> v_blk(dim_);
    direction_.direction_block(round_, v_blk);
    last_scalar_loss_ = dot(v_blk, g);
    oned_->update(last_scalar_loss_);
    direction_.observe(round_, g);
    ++round_;
}

EmbeddedVector GenericReducer::full_iterate() const {
    EmbeddedVector v = direction_.direction();
    v.scale(oned_->bet());
    return v;
}

FastHaarReducer::FastHaarReducer(std::size_t horizon_pow2, std::size_t dim,
                                 double loss_bound, double eps)
    : FastHaarReducer(horizon_pow2, dim,
                      std::make_unique<OneDLearner>(
                          eps, loss_bound * static_cast<double>(1 + log2_exact(horizon_pow2)))) {}

FastHaarReducer::FastHaarReducer(std::size_t horizon_pow2, std::size_t dim,
                                 std::unique_ptr<ScalarLearner> bettor)
    : horizon_(horizon_pow2),
      n_(log2_exact(horizon_pow2)),
      dim_(dim),
      oned_(std::move(bettor)),
      lambda_(dim * horizon_pow2, 0.0),
      theta_hat_(horizon_pow2, dim) {
    if (dim == 0) throw std::invalid_argument("FastHaarReducer: dimension must be positive");
    if (!oned_) throw std::invalid_argument("FastHaarReducer: null scalar learner");
}

void FastHaarReducer::direction_block(std::size_t t, std::span<double> out) const {
    for (auto& x : out) x = 0.0;
    if (v_sum_ <= 0.0) return;
    // block t of (H (x) I_d) theta^ needs only the 1 + log2(T) nonzeros of row t
    for (const auto& [col, val] : haar_row(t, n_)) {
        const auto blk = theta_hat_.block(col);
        for (std::size_t j = 0; j < dim_; ++j) out[j] += val * blk[j];
    }
    const double denom = std::max(std::sqrt(v_sum_), std::sqrt(dual_norm_sq()));
    for (auto& x : out) x /= denom;
}

std::vector<double> FastHaarReducer::play() const {
    std::vector<double> w(dim_, 0.0);
    direction_block(round_, w);
    const double beta = oned_->bet();
    for (double& x : w) x *= beta;
    return w;
}

void FastHaarReducer::observe(std::span<const double> g) {
    if (round_ >= horizon_) throw std::runtime_error("FastHaarReducer::observe: round overflow");
    if (g.size() != dim_) throw std::invalid_argument("FastHaarReducer::observe: bad loss dim");
    const std::size_t t = round_;

    std::vector<double> v_blk(dim_);
    direction_block(t, v_blk);
    last_scalar_loss_ = dot(v_blk, g);
    oned_->update(last_scalar_loss_);

    const auto row = haar_row(t, n_);
    last_touched_ = row.size();

    // dual-norm recursion: ||G~_t||^2 = ||G~_{t-1}||^2 + self + 2 <g, Lambda_t h_t>
    const double self = static_cast<double>(1 + n_) * norm_sq(g);
    double cross = 0.0;
    for (const auto& [col, val] : row) {
        const double* lam_col = lambda_.data() + col * dim_;
        double acc = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) acc += lam_col[j] * g[j];
        cross += val * acc;
    }
    dual_sq_ += self + 2.0 * cross;
    v_sum_ += self;

    // theta^ -= h_t (x) g ; Lambda += g h_t^T. Only row-support columns move.
    for (const auto& [col, val] : row) {
        auto blk = theta_hat_.block(col);
        double* lam_col = lambda_.data() + col * dim_;
        for (std::size_t j = 0; j < dim_; ++j) {
            blk[j] -= val * g[j];
            lam_col[j] += val * g[j];
        }
    }
    ++round_;
}

EmbeddedVector FastHaarReducer::full_iterate() const {
    EmbeddedVector out(horizon_, dim_);
    if (v_sum_ <= 0.0) return out;
    const double denom = std::max(std::sqrt(v_sum_), std::sqrt(dual_norm_sq()));
    const double beta = oned_->bet();
    std::vector<double> series(horizon_), image(horizon_);
    for (std::size_t j = 0; j < dim_; ++j) {
        for (std::size_t p = 0; p < horizon_; ++p) series[p] = theta_hat_.block(p)[j];
        haar_apply(series, image);
        for (std::size_t t = 0; t < horizon_; ++t) out.block(t)[j] = beta * image[t] / denom;
    }
    return out;
}

}  // namespace dynreg
