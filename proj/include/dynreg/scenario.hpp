#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dynreg/config.hpp"
#include "dynreg/embedded.hpp"
#include "dynreg/reduction.hpp"

namespace dynreg {

enum class PrecondKind { identity, difference, haar };
enum class LossModel { rademacher, tracking, file };
enum class ComparatorModel { zero, constant, piecewise, drift, sinusoid, file };

std::string to_string(PrecondKind k);
std::string to_string(LossModel m);
std::string to_string(ComparatorModel m);

struct ScenarioConfig {
    std::size_t T = 0;
    std::size_t d = 1;
    PrecondKind precond = PrecondKind::haar;

    LossModel loss_model = LossModel::rademacher;
    double G = 1.0;
    std::string loss_file;

    ComparatorModel comparator_model = ComparatorModel::zero;
    std::vector<double> comparator_value;  // constant model, d entries
    std::size_t segments = 2;              // piecewise model
    double magnitude = 1.0;
    double drift_step = 0.1;
    double period = 16.0;
    double amplitude = 1.0;
    std::string comparator_file;
    bool hindsight = false;  // also report best-in-hindsight piecewise regret

    std::uint64_t seed = 0;
    double epsilon = 1.0;
    std::size_t trials = 1;

    /// Validates and loads from flat keys (scenario.*, loss.*, comparator.*,
    /// run.*). Throws ConfigError naming the offending field.
    static ScenarioConfig from_config(const KeyValueConfig& cfg);
};

/// A generated instance: either a precomputed loss sequence or an online
/// callback (tracking losses depend on the play), plus the comparator.
struct Scenario {
    LossSeq losses;
    LossCallback loss_fn;  // set when online
    bool online = false;
    ComparatorSeq comparator;
};

/// Deterministic given (config, trial_seed). Tracking losses are generated
/// online as G * sign(w_t - target_t) per coordinate against the comparator
/// sequence as the target.
Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t trial_seed);

/// Best-in-hindsight piecewise-constant comparator with `segments` segments:
/// on each segment the magnitude-ball minimizer -m * s / ||s|| of the
/// comparator loss, where s is the segment's loss sum.
ComparatorSeq hindsight_piecewise_comparator(const LossSeq& losses, std::size_t segments,
                                             double magnitude);

double path_length(const ComparatorSeq& seq);
double squared_path_length(const ComparatorSeq& seq);
/// Largest gap between consecutive interval averages over power-of-two
/// timescales (requires a power-of-two length).
double max_interval_average_gap(const ComparatorSeq& seq);

}  // namespace dynreg
