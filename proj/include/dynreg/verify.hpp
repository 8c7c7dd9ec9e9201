#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynreg/dense.hpp"

namespace dynreg {

/// Spectral facts about a pairing inverse, with the checked inequalities.
struct SpectralReport {
    std::string label;
    std::size_t order = 0;
    double trace_inverse = 0.0;
    double lambda_max_inverse = 0.0;
    double wolkowicz_bound = 0.0;
    double frobenius_offdiag_sq = 0.0;  // ||A - Diag A||_F^2
    double frobenius_full_sq = 0.0;     // Tr(A^T A)
    bool eigen_bound_ok = false;        // lambda_max <= 0.9 * trace
    bool wolkowicz_ok = false;          // lambda_max <= wolkowicz * (1 + 1e-8)
    bool frobenius_ok = false;          // off-diagonal row-sum condition
    std::size_t power_iterations = 0;

    nlohmann::json to_json() const;
};

/// Trace-based eigenvalue upper bound for a symmetric matrix:
/// Tr(A)/n + sqrt((n-1) max(0, Tr(A^T A)/n - (Tr(A)/n)^2)).
/// Throws std::invalid_argument on a non-symmetric input.
double wolkowicz_upper_bound(const DenseMatrix& a);

/// Computes lambda_max((Sigma^T Sigma)^{-1}) by power iteration on the
/// structured operator and checks it against 0.9 * T(T+1)/2. Requires T >= 2.
SpectralReport verify_difference_eigen_bound(std::size_t T);

/// Evaluates Tr((B + v v^T)^{-1}) >= ||v||^2 + sum_{t>=2} 1/lambda_t(B) by
/// dense eigendecomposition, returning whether it holds to a 1e-8 relative
/// slack. B must be symmetric PSD with exactly one near-zero eigenvalue;
/// throws std::invalid_argument otherwise and std::runtime_error when
/// B + v v^T is numerically singular. The right-hand side is evaluated as
/// displayed; violations are reported, not asserted.
bool verify_perturbation_bound(const DenseMatrix& b, std::span<const double> v);

/// With B~ = Ainv - Diag(Ainv): checks ||B~||_F^2 >= (T/2) max_i sum_j B~_ij^2.
bool frobenius_condition(const DenseMatrix& ainv);

enum class SearchMode { exhaustive, sampled };

struct AdversaryOutcome {
    std::vector<double> signs;        // chosen Y in {-1,+1}^T
    std::vector<double> comparator;   // u~ = -sqrt(P) A G~ / ||G~||_A
    double achieved_quadratic = 0.0;  // ||sum g~||^2_A for the chosen signs
    double threshold = 0.0;           // G^2 (Tr(A) + q ||A - Diag A||_F)
    double regret_lower_value = 0.0;  // sqrt(P ||G~||^2_A), zero-play baseline
    bool found = false;
    double success_fraction = 0.0;    // sampled mode only
    std::size_t patterns_tried = 0;

    nlohmann::json to_json() const;
};

/// Searches sign patterns for one whose A-quadratic beats the trace-plus-
/// Frobenius threshold, then builds the witness comparator. Exhaustive mode
/// enumerates all 2^T patterns via a Gray code and requires T <= 20; sampled
/// mode draws `samples` i.i.d. sign vectors. Requires q >= 1.
AdversaryOutcome adversary_search(const DenseMatrix& a, double G, double P, double q,
                                  SearchMode mode, std::size_t samples = 10000,
                                  std::uint64_t seed = 0);

struct TailSummary {
    double mean = 0.0;
    double stddev = 0.0;
    double std_error = 0.0;
    double expected_mean = 0.0;  // G^2 Tr(A)
    std::vector<std::pair<double, double>> quantiles;  // (level, value)
    double exceed_fraction[3] = {0.0, 0.0, 0.0};       // thresholds q = 1, 2, 3
    std::size_t trials = 0;
    bool mean_within_3se = false;

    nlohmann::json to_json() const;
};

/// Monte Carlo summary of ||G Y||^2_A over i.i.d. Rademacher sign vectors Y.
TailSummary empirical_quadratic_tail(const DenseMatrix& a, double G, std::size_t trials,
                                     std::uint64_t seed = 0);

}  // namespace dynreg
