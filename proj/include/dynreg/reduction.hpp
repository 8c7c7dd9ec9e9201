#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dynreg/embedded.hpp"
#include "dynreg/learner.hpp"

namespace dynreg {

/// Per-round log entry. Cumulative fields are running prefix sums of the
/// instantaneous ones. Wealth_t = -sum_{s<=t} <g_s, w_s>.
struct RegretRecord {
    std::size_t t = 0;  // 1-based round number in reports
    std::vector<double> play;
    std::vector<double> loss;
    std::vector<double> inst_regret;  // one entry per registered comparator
    std::vector<double> cum_regret;
    double wealth = 0.0;
    double scale_sum = 0.0;   // V after the round
    double dual_norm = 0.0;   // ||G~_t||_{M^{-1}} after the round
    double bet = 0.0;         // beta_t used in the round
    double scalar_loss = 0.0; // <v~_t, g~_t>
};

struct Trajectory {
    LossSeq plays;
    LossSeq losses;
    std::vector<ComparatorSeq> comparators;  // registered at run time
    std::vector<RegretRecord> records;

    std::size_t rounds() const { return plays.size(); }
    double final_wealth() const;
};

/// Drives a reducer over a fixed loss sequence. The loss count must match the
/// reducer horizon; registered comparators must have the same length.
Trajectory run_reduction(Reducer& reducer, const LossSeq& losses,
                         const std::vector<ComparatorSeq>& comparators = {});

using LossCallback =
    std::function<std::vector<double>(std::size_t round, std::span<const double> play)>;

/// Online variant: the loss for round t is produced after seeing the play.
Trajectory run_reduction(Reducer& reducer, const LossCallback& loss_fn, std::size_t rounds,
                         const std::vector<ComparatorSeq>& comparators = {});

/// sum_t <g_t, w_t - u_t>; throws std::invalid_argument on length mismatch.
double dynamic_regret(const Trajectory& traj, const ComparatorSeq& seq);

/// R_T(seq) + Wealth_T + <G~_T, u~>, identically zero up to rounding.
double duality_gap(const Trajectory& traj, const ComparatorSeq& seq);

/// Assembles a trajectory from existing plays and losses (no learner run).
Trajectory make_trajectory(LossSeq plays, LossSeq losses);

}  // namespace dynreg
