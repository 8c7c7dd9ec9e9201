#include "dynreg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dynreg/difference.hpp"
#include "dynreg/rng.hpp"

namespace dynreg {

nlohmann::json SpectralReport::to_json() const {
    return {
        {"label", label},
        {"order", order},
        {"trace_inverse", trace_inverse},
        {"lambda_max_inverse", lambda_max_inverse},
        {"wolkowicz_bound", wolkowicz_bound},
        {"frobenius_offdiag_sq", frobenius_offdiag_sq},
        {"frobenius_full_sq", frobenius_full_sq},
        {"eigen_bound_ok", eigen_bound_ok},
        {"wolkowicz_ok", wolkowicz_ok},
        {"frobenius_ok", frobenius_ok},
        {"power_iterations", power_iterations},
    };
}

double wolkowicz_upper_bound(const DenseMatrix& a) {
    if (a.rows() != a.cols() || !a.is_symmetric(1e-10))
        throw std::invalid_argument("wolkowicz_upper_bound: symmetric input required");
    const double n = static_cast<double>(a.rows());
    const double mean = a.trace() / n;
    const double second = a.frobenius_norm_sq() / n;  // Tr(A^T A)/n for symmetric A
    const double variance = std::max(0.0, second - mean * mean);
    return mean + std::sqrt((n - 1.0) * variance);
}

SpectralReport verify_difference_eigen_bound(std::size_t T) {
    if (T < 2) throw std::invalid_argument("verify_difference_eigen_bound: T >= 2 required");
    DifferenceOperator sigma(T);
    std::vector<double> mid(T);
    auto apply_minv = [&](std::span<const double> x, std::span<double> y) {
        sigma.apply_inverse_transpose(x, mid);
        sigma.apply_inverse(mid, y);
    };
    const auto pw = power_iteration(apply_minv, T, 1e-10, 100000);

    SpectralReport rep;
    rep.label = "difference";
    rep.order = T;
    rep.trace_inverse = difference_trace_inverse(T);
    rep.lambda_max_inverse = pw.lambda;
    rep.power_iterations = pw.iterations;

    // closed forms over the entries T - max(i,j) + 1 (1-based)
    double full_sq = 0.0, diag_sq = 0.0, row0_off_sq = 0.0;
    for (std::size_t m = 1; m <= T; ++m) {
        const double v = static_cast<double>(T - m + 1);
        full_sq += static_cast<double>(2 * m - 1) * v * v;
    }
    for (std::size_t t = 1; t <= T; ++t) {
        const double v = static_cast<double>(T - t + 1);
        diag_sq += v * v;
        if (t >= 2) row0_off_sq += v * v;
    }
    rep.frobenius_full_sq = full_sq;
    rep.frobenius_offdiag_sq = full_sq - diag_sq;

    rep.eigen_bound_ok = rep.lambda_max_inverse <= 0.9 * rep.trace_inverse;
    const double mean = rep.trace_inverse / static_cast<double>(T);
    const double variance = std::max(0.0, full_sq / static_cast<double>(T) - mean * mean);
    rep.wolkowicz_bound = mean + std::sqrt(static_cast<double>(T - 1) * variance);
    rep.wolkowicz_ok = rep.lambda_max_inverse <= rep.wolkowicz_bound * (1.0 + 1e-8);
    rep.frobenius_ok =
        rep.frobenius_offdiag_sq >= 0.5 * static_cast<double>(T) * row0_off_sq;
    return rep;
}

bool verify_perturbation_bound(const DenseMatrix& b, std::span<const double> v) {
    if (b.rows() != b.cols() || !b.is_symmetric(1e-10))
        throw std::invalid_argument("verify_perturbation_bound: symmetric input required");
    const std::size_t T = b.rows();
    if (v.size() != T) throw std::invalid_argument("verify_perturbation_bound: size mismatch");
    if (norm_sq(v) == 0.0)
        throw std::invalid_argument("verify_perturbation_bound: v must be nonzero");

    const auto lam_b = jacobi_eigenvalues(b);
    const double scale = std::max(1.0, std::fabs(lam_b.back()));
    if (!(lam_b.size() >= 2) || std::fabs(lam_b[0]) > 1e-10 * scale || lam_b[1] <= 1e-10 * scale)
        throw std::invalid_argument(
            "verify_perturbation_bound: exactly one near-zero eigenvalue required");

    DenseMatrix a = b;
    for (std::size_t i = 0; i < T; ++i)
        for (std::size_t j = 0; j < T; ++j) a(i, j) += v[i] * v[j];
    const auto lam_a = jacobi_eigenvalues(a);
    if (lam_a[0] <= 1e-12 * std::fabs(lam_a.back()))
        throw std::runtime_error("verify_perturbation_bound: B + v v^T numerically singular");

    double lhs = 0.0;
    for (double l : lam_a) lhs += 1.0 / l;
    double rhs = norm_sq(v);
    for (std::size_t t = 1; t < T; ++t) rhs += 1.0 / lam_b[t];
    return lhs >= rhs * (1.0 - 1e-8);
}

bool frobenius_condition(const DenseMatrix& ainv) {
    if (ainv.rows() != ainv.cols() || !ainv.is_symmetric(1e-10))
        throw std::invalid_argument("frobenius_condition: symmetric input required");
    const std::size_t T = ainv.rows();
    double total = 0.0, max_row = 0.0;
    for (std::size_t i = 0; i < T; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < T; ++j) {
            if (i == j) continue;
            row += ainv(i, j) * ainv(i, j);
        }
        total += row;
        max_row = std::max(max_row, row);
    }
    return total >= 0.5 * static_cast<double>(T) * max_row * (1.0 - 1e-12);
}

nlohmann::json AdversaryOutcome::to_json() const {
    return {
        {"signs", signs},
        {"comparator", comparator},
        {"achieved_quadratic", achieved_quadratic},
        {"threshold", threshold},
        {"regret_lower_value", regret_lower_value},
        {"found", found},
        {"success_fraction", success_fraction},
        {"patterns_tried", patterns_tried},
    };
}

namespace {

double quadratic_form(const DenseMatrix& a, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) acc += y[i] * dot(a.row(i), y);
    return acc;
}

double offdiag_frobenius(const DenseMatrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

}  // namespace

AdversaryOutcome adversary_search(const DenseMatrix& a, double G, double P, double q,
                                  SearchMode mode, std::size_t samples, std::uint64_t seed) {
    if (a.rows() != a.cols() || !a.is_symmetric(1e-10))
        throw std::invalid_argument("adversary_search: symmetric input required");
    if (!(q >= 1.0)) throw std::invalid_argument("adversary_search: q >= 1 required");
    const std::size_t T = a.rows();
    if (mode == SearchMode::exhaustive && T > 20)
        throw std::invalid_argument("adversary_search: exhaustive mode requires T <= 20");

    AdversaryOutcome out;
    out.threshold = G * G * (a.trace() + q * offdiag_frobenius(a));

    std::vector<double> y(T, 1.0), s(T);
    double best_quad = -1.0;
    std::vector<double> best_y;
    std::size_t hits = 0, tried = 0;

    auto consider = [&](const std::vector<double>& cand, double quad_y) {
        ++tried;
        const double quad = G * G * quad_y;
        if (quad >= out.threshold) ++hits;
        if (quad > best_quad) {
            best_quad = quad;
            best_y = cand;
        }
    };

    if (mode == SearchMode::exhaustive) {
        // Gray-code walk: one sign flip per step keeps s = A y and <y, A y>
        // updated in O(T).
        a.multiply(y, s);
        double quad_y = dot(y, s);
        consider(y, quad_y);
        const std::uint64_t total = std::uint64_t{1} << T;
        for (std::uint64_t i = 1; i < total; ++i) {
            std::size_t k = 0;
            while (((i >> k) & 1) == 0) ++k;  // bit flipped by the Gray code at step i
            const double prev = y[k];
            quad_y += -4.0 * prev * s[k] + 4.0 * a(k, k);
            y[k] = -prev;
            for (std::size_t r = 0; r < T; ++r) s[r] += 2.0 * y[k] * a(r, k);
            consider(y, quad_y);
        }
    } else {
        Rng rng(split_seed(seed, 0xadf));
        for (std::size_t i = 0; i < samples; ++i) {
            for (std::size_t t = 0; t < T; ++t) y[t] = rademacher(rng);
            consider(y, quadratic_form(a, y));
        }
    }

    out.patterns_tried = tried;
    out.found = best_quad >= out.threshold;
    out.success_fraction = tried ? static_cast<double>(hits) / static_cast<double>(tried) : 0.0;
    out.signs = best_y;
    out.achieved_quadratic = best_quad;

    // witness comparator u~ = -sqrt(P) A G~ / ||G~||_A for G~ = G * Y
    std::vector<double> gt(T);
    for (std::size_t t = 0; t < T; ++t) gt[t] = G * best_y[t];
    a.multiply(gt, s);
    const double gnorm_a = std::sqrt(best_quad);
    out.comparator.resize(T);
    for (std::size_t t = 0; t < T; ++t) out.comparator[t] = -std::sqrt(P) * s[t] / gnorm_a;
    out.regret_lower_value = std::sqrt(P * best_quad);
    return out;
}

nlohmann::json TailSummary::to_json() const {
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& [level, value] : quantiles) qs.push_back({{"level", level}, {"value", value}});
    return {
        {"mean", mean},
        {"stddev", stddev},
        {"std_error", std_error},
        {"expected_mean", expected_mean},
        {"quantiles", qs},
        {"exceed_fraction_q1", exceed_fraction[0]},
        {"exceed_fraction_q2", exceed_fraction[1]},
        {"exceed_fraction_q3", exceed_fraction[2]},
        {"trials", trials},
        {"mean_within_3se", mean_within_3se},
    };
}

TailSummary empirical_quadratic_tail(const DenseMatrix& a, double G, std::size_t trials,
                                     std::uint64_t seed) {
    if (a.rows() != a.cols() || !a.is_symmetric(1e-10))
        throw std::invalid_argument("empirical_quadratic_tail: symmetric input required");
    if (trials == 0) throw std::invalid_argument("empirical_quadratic_tail: trials >= 1 required");
    const std::size_t T = a.rows();
    const double offF = offdiag_frobenius(a);

    Rng rng(split_seed(seed, 0x7a11));
    std::vector<double> y(T), values(trials);
    double sum = 0.0;
    std::size_t exceed[3] = {0, 0, 0};
    for (std::size_t i = 0; i < trials; ++i) {
        for (std::size_t t = 0; t < T; ++t) y[t] = rademacher(rng);
        const double v = G * G * quadratic_form(a, y);
        values[i] = v;
        sum += v;
        for (int qi = 0; qi < 3; ++qi)
            if (v >= G * G * (a.trace() + static_cast<double>(qi + 1) * offF)) ++exceed[qi];
    }

    TailSummary out;
    out.trials = trials;
    out.expected_mean = G * G * a.trace();
    out.mean = sum / static_cast<double>(trials);
    double var = 0.0;
    for (double v : values) var += (v - out.mean) * (v - out.mean);
    var /= std::max<std::size_t>(1, trials - 1);
    out.stddev = std::sqrt(var);
    out.std_error = out.stddev / std::sqrt(static_cast<double>(trials));
    for (int qi = 0; qi < 3; ++qi)
        out.exceed_fraction[qi] = static_cast<double>(exceed[qi]) / static_cast<double>(trials);

    std::sort(values.begin(), values.end());
    for (double level : {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}) {
        const auto idx = static_cast<std::size_t>(level * static_cast<double>(trials - 1));
        out.quantiles.emplace_back(level, values[idx]);
    }
    out.mean_within_3se = std::fabs(out.mean - out.expected_mean) <= 3.0 * out.std_error;
    return out;
}

}  // namespace dynreg
