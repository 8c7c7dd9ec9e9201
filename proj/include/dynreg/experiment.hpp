#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynreg/scenario.hpp"

namespace dynreg {

struct TrialResult {
    std::uint64_t trial = 0;
    double regret_zero = 0.0;       // vs the zero comparator
    double regret_model = 0.0;      // vs the generated comparator
    double regret_hindsight = 0.0;  // piecewise hindsight (when enabled)
    bool has_hindsight = false;
    double comparator_norm = 0.0;   // ||u~||_M of the model comparator
    double hindsight_norm = 0.0;
    double scale_sum = 0.0;         // V_T
    double dual_norm = 0.0;
    double wealth = 0.0;
    double path_len = 0.0;
    double sq_path_len = 0.0;
    double avg_gap_max = 0.0;       // D bar
    std::vector<double> timescale_pls;  // tau = 1, 2, 4, ..., T
    double bound_value = 0.0;       // bound-form diagnostic denominator
    double bound_c = 0.0;           // regret / bound_value
    double seconds_per_round = 0.0;
    double duality_gap_model = 0.0;

    // retained for recomputation checks, not serialized
    ComparatorSeq model_comparator;
    ComparatorSeq hindsight_comparator;
};

struct ExperimentReport {
    ScenarioConfig config;
    std::size_t padded_T = 0;  // horizon after power-of-two padding
    bool padded = false;
    std::vector<TrialResult> trials;
    bool oracle_checked = false;
    bool oracle_ok = true;
    double mean_regret_model = 0.0;
    double mean_regret_hindsight = 0.0;
    double mean_bound_c = 0.0;

    nlohmann::json to_json() const;
};

struct ExperimentOptions {
    bool per_round_records = false;
    std::string records_dir;     // where per-trial CSV files go
    bool force_oracle = false;   // dense equivalence check (padded T <= 64)
};

/// Runs the configured reducer over all trials, collecting regret and bound
/// diagnostics. For the haar pairing with padded T <= 64 the generic
/// preconditioner path is replayed as an oracle and trajectories compared.
ExperimentReport run_experiment(const ScenarioConfig& cfg, const ExperimentOptions& opts = {});

/// log+(x) = log(max(x, 1)); keeps bound diagnostics total at small scales.
double log_plus(double x);

/// The bound-form diagnostic:
/// gbound*eps + ||u~||_M (sqrt(V (1 + log+(r))) + gbound log+(r)),
/// with r = ||u~||_M sqrt(V) / (gbound eps).
double bound_form(double gbound, double eps, double comparator_norm, double scale_sum);

struct LadderPoint {
    std::size_t T = 0;
    double mean_regret = 0.0;
    double mean_bound_c = 0.0;
};

struct LadderReport {
    std::vector<LadderPoint> points;
    double growth_exponent = 0.0;  // least-squares slope of log R vs log T
    double c_ratio = 0.0;          // max/min of mean bound constants

    nlohmann::json to_json() const;
};

/// Repeats the experiment over a horizon ladder and fits the regret growth
/// exponent. Regret per rung is the hindsight regret when enabled, otherwise
/// the model-comparator regret.
LadderReport run_ladder(ScenarioConfig base, const std::vector<std::size_t>& horizons);

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace dynreg
