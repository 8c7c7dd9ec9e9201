#include "dynreg/reduction.hpp"

#include <cmath>
#include <stdexcept>

#include "dynreg/dense.hpp"

namespace dynreg {

double Trajectory::final_wealth() const {
    return records.empty() ? 0.0 : records.back().wealth;
}

namespace {

Trajectory drive(Reducer& reducer, const LossSeq* fixed, const LossCallback* online,
                 std::size_t rounds, const std::vector<ComparatorSeq>& comparators) {
    if (rounds != reducer.horizon())
        throw std::invalid_argument("run_reduction: horizon mismatch");
    for (const auto& seq : comparators)
        if (seq.size() != rounds)
            throw std::invalid_argument("run_reduction: comparator length mismatch");

    Trajectory traj;
    traj.comparators = comparators;
    traj.plays.reserve(rounds);
    traj.losses.reserve(rounds);
    traj.records.reserve(rounds);

    double wealth = 0.0;
    std::vector<double> cum(comparators.size(), 0.0);

    for (std::size_t t = 0; t < rounds; ++t) {
        RegretRecord rec;
        rec.t = t + 1;
        rec.bet = reducer.bet();
        rec.play = reducer.play();
        rec.loss = fixed ? (*fixed)[t] : (*online)(t, rec.play);
        reducer.observe(rec.loss);

        const double play_loss = dot(rec.play, rec.loss);
        wealth -= play_loss;
        rec.wealth = wealth;
        rec.scale_sum = reducer.scale_sum();
        rec.dual_norm = std::sqrt(reducer.dual_norm_sq());
        rec.scalar_loss = reducer.last_scalar_loss();

        rec.inst_regret.resize(comparators.size());
        rec.cum_regret.resize(comparators.size());
        for (std::size_t k = 0; k < comparators.size(); ++k) {
            rec.inst_regret[k] = play_loss - dot(rec.loss, comparators[k][t]);
            cum[k] += rec.inst_regret[k];
            rec.cum_regret[k] = cum[k];
        }

        traj.plays.push_back(rec.play);
        traj.losses.push_back(rec.loss);
        traj.records.push_back(std::move(rec));
    }
    return traj;
}

}  // namespace

Trajectory run_reduction(Reducer& reducer, const LossSeq& losses,
                         const std::vector<ComparatorSeq>& comparators) {
    return drive(reducer, &losses, nullptr, losses.size(), comparators);
}

Trajectory run_reduction(Reducer& reducer, const LossCallback& loss_fn, std::size_t rounds,
                         const std::vector<ComparatorSeq>& comparators) {
    return drive(reducer, nullptr, &loss_fn, rounds, comparators);
}

double dynamic_regret(const Trajectory& traj, const ComparatorSeq& seq) {
    if (seq.size() != traj.rounds())
        throw std::invalid_argument("dynamic_regret: length mismatch");
    double acc = 0.0;
    for (std::size_t t = 0; t < traj.rounds(); ++t) {
        acc += dot(traj.losses[t], traj.plays[t]) - dot(traj.losses[t], seq[t]);
    }
    return acc;
}

double duality_gap(const Trajectory& traj, const ComparatorSeq& seq) {
    if (seq.size() != traj.rounds())
        throw std::invalid_argument("duality_gap: length mismatch");
    double wealth = 0.0;
    double comparator_loss = 0.0;
    for (std::size_t t = 0; t < traj.rounds(); ++t) {
        wealth -= dot(traj.losses[t], traj.plays[t]);
        comparator_loss += dot(traj.losses[t], seq[t]);
    }
    return dynamic_regret(traj, seq) + wealth + comparator_loss;
}

Trajectory make_trajectory(LossSeq plays, LossSeq losses) {
    if (plays.size() != losses.size())
        throw std::invalid_argument("make_trajectory: length mismatch");
    Trajectory traj;
    traj.plays = std::move(plays);
    traj.losses = std::move(losses);
    double wealth = 0.0;
    for (std::size_t t = 0; t < traj.plays.size(); ++t) {
        RegretRecord rec;
        rec.t = t + 1;
        rec.play = traj.plays[t];
        rec.loss = traj.losses[t];
        wealth -= dot(rec.play, rec.loss);
        rec.wealth = wealth;
        traj.records.push_back(std::move(rec));
    }
    return traj;
}

}  // namespace dynreg
