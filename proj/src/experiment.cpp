#include "dynreg/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "dynreg/csvio.hpp"
#include "dynreg/haar.hpp"
#include "dynreg/precond.hpp"
#include "dynreg/rng.hpp"

namespace dynreg {

double log_plus(double x) {
    return std::log(std::max(x, 1.0));
}

double bound_form(double gbound, double eps, double comparator_norm, double scale_sum) {
    const double ratio = comparator_norm * std::sqrt(scale_sum) / (gbound * eps);
    const double lp = log_plus(ratio);
    return gbound * eps + comparator_norm * (std::sqrt(scale_sum * (1.0 + lp)) + gbound * lp);
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("fit_loglog_slope: need two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("fit_loglog_slope: positive samples required");
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(points.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

std::shared_ptr<const Preconditioner> make_precond(PrecondKind kind, std::size_t T) {
    switch (kind) {
        case PrecondKind::identity: return std::make_shared<IdentityPreconditioner>(T);
        case PrecondKind::difference: return std::make_shared<DifferencePreconditioner>(T);
        case PrecondKind::haar: return std::make_shared<HaarPreconditioner>(T);
    }
    throw std::invalid_argument("make_precond: unknown kind");
}

std::unique_ptr<Reducer> make_reducer(const ScenarioConfig& cfg, std::size_t padded_T) {
    if (cfg.precond == PrecondKind::haar)
        return std::make_unique<FastHaarReducer>(padded_T, cfg.d, cfg.G, cfg.epsilon);
    return std::make_unique<GenericReducer>(make_precond(cfg.precond, padded_T), cfg.d, cfg.G,
                                            cfg.epsilon);
}

ComparatorSeq pad_sequence(const ComparatorSeq& seq, std::size_t padded_T, std::size_t d) {
    ComparatorSeq out = seq;
    out.resize(padded_T, std::vector<double>(d, 0.0));
    return out;
}

double comparator_pairing_norm_sq(const ScenarioConfig& cfg, const ComparatorSeq& padded_seq) {
    if (cfg.precond == PrecondKind::haar) return haar_comparator_norm_sq(padded_seq);
    const auto s = make_precond(cfg.precond, padded_seq.size());
    return weighted_norm_sq(embed_comparator(padded_seq), *s);
}

bool trajectories_match(const Trajectory& a, const Trajectory& b, double rel_tol) {
    if (a.rounds() != b.rounds()) return false;
    for (std::size_t t = 0; t < a.rounds(); ++t) {
        for (std::size_t j = 0; j < a.plays[t].size(); ++j) {
            const double x = a.plays[t][j], y = b.plays[t][j];
            if (std::fabs(x - y) > rel_tol * (1.0 + std::max(std::fabs(x), std::fabs(y))))
                return false;
        }
    }
    return true;
}

}  // namespace

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json trials_json = nlohmann::json::array();
    for (const auto& tr : trials) {
        nlohmann::json j = {
            {"trial", tr.trial},
            {"regret_zero", tr.regret_zero},
            {"regret_model", tr.regret_model},
            {"comparator_norm", tr.comparator_norm},
            {"V_T", tr.scale_sum},
            {"dual_norm", tr.dual_norm},
            {"wealth", tr.wealth},
            {"path_length", tr.path_len},
            {"squared_path_length", tr.sq_path_len},
            {"max_avg_gap", tr.avg_gap_max},
            {"timescale_path_lengths", tr.timescale_pls},
            {"bound_value", tr.bound_value},
            {"bound_c", tr.bound_c},
            {"seconds_per_round", tr.seconds_per_round},
            {"duality_gap", tr.duality_gap_model},
        };
        if (tr.has_hindsight) {
            j["regret_hindsight"] = tr.regret_hindsight;
            j["hindsight_norm"] = tr.hindsight_norm;
        }
        trials_json.push_back(std::move(j));
    }
    return {
        {"T", config.T},
        {"padded_T", padded_T},
        {"padded", padded},
        {"d", config.d},
        {"preconditioner", to_string(config.precond)},
        {"loss_model", to_string(config.loss_model)},
        {"comparator_model", to_string(config.comparator_model)},
        {"G", config.G},
        {"epsilon", config.epsilon},
        {"seed", config.seed},
        {"trials", trials_json},
        {"oracle_checked", oracle_checked},
        {"oracle_ok", oracle_ok},
        {"mean_regret_model", mean_regret_model},
        {"mean_regret_hindsight", mean_regret_hindsight},
        {"mean_bound_c", mean_bound_c},
    };
}

ExperimentReport run_experiment(const ScenarioConfig& cfg, const ExperimentOptions& opts) {
    ExperimentReport report;
    report.config = cfg;
    report.padded_T = (cfg.precond == PrecondKind::haar) ? next_pow2(cfg.T) : cfg.T;
    report.padded = report.padded_T != cfg.T;

    const ComparatorSeq zero_seq(report.padded_T, std::vector<double>(cfg.d, 0.0));

    double sum_model = 0.0, sum_hind = 0.0, sum_c = 0.0;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t trial_seed = split_seed(cfg.seed, trial);
        Scenario scen = generate_scenario(cfg, trial_seed);

        const ComparatorSeq padded_model = pad_sequence(scen.comparator, report.padded_T, cfg.d);
        auto reducer = make_reducer(cfg, report.padded_T);

        Trajectory traj;
        const auto t0 = std::chrono::steady_clock::now();
        if (scen.online) {
            // padded rounds beyond T contribute zero losses
            const auto wrapped = [&](std::size_t t, std::span<const double> play) {
                if (t < cfg.T) return scen.loss_fn(t, play);
                return std::vector<double>(cfg.d, 0.0);
            };
            traj = run_reduction(*reducer, wrapped, report.padded_T, {padded_model});
        } else {
            LossSeq losses = scen.losses;
            losses.resize(report.padded_T, std::vector<double>(cfg.d, 0.0));
            traj = run_reduction(*reducer, losses, {padded_model});
        }
        const auto t1 = std::chrono::steady_clock::now();

        TrialResult tr;
        tr.trial = trial;
        tr.model_comparator = padded_model;
        tr.seconds_per_round =
            std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(report.padded_T);
        tr.regret_zero = dynamic_regret(traj, zero_seq);
        tr.regret_model = dynamic_regret(traj, padded_model);
        tr.duality_gap_model = duality_gap(traj, padded_model);
        tr.comparator_norm = std::sqrt(comparator_pairing_norm_sq(cfg, padded_model));
        tr.scale_sum = reducer->scale_sum();
        tr.dual_norm = std::sqrt(reducer->dual_norm_sq());
        tr.wealth = traj.final_wealth();
        tr.path_len = path_length(scen.comparator);
        tr.sq_path_len = squared_path_length(scen.comparator);
        // timescale diagnostics need a power-of-two horizon
        if ((report.padded_T & (report.padded_T - 1)) == 0) {
            tr.avg_gap_max = max_interval_average_gap(padded_model);
            for (std::size_t tau = 1; tau <= report.padded_T; tau *= 2)
                tr.timescale_pls.push_back(timescale_path_length(padded_model, tau));
        }

        double regret_for_bound = tr.regret_model;
        double norm_for_bound = tr.comparator_norm;
        if (cfg.hindsight) {
            const ComparatorSeq hind =
                hindsight_piecewise_comparator(traj.losses, cfg.segments, cfg.magnitude);
            tr.hindsight_comparator = hind;
            tr.has_hindsight = true;
            tr.regret_hindsight = dynamic_regret(traj, hind);
            tr.hindsight_norm = std::sqrt(comparator_pairing_norm_sq(cfg, hind));
            regret_for_bound = tr.regret_hindsight;
            norm_for_bound = tr.hindsight_norm;
            sum_hind += tr.regret_hindsight;
        }
        tr.bound_value = bound_form(reducer->gbound(), cfg.epsilon, norm_for_bound, tr.scale_sum);
        tr.bound_c = regret_for_bound / tr.bound_value;

        if (opts.per_round_records && !opts.records_dir.empty()) {
            emit_records_csv(opts.records_dir + "/records_trial" + std::to_string(trial) + ".csv",
                             traj.records);
        }

        // dense-path replay for the fast haar pairing at oracle scale
        const bool want_oracle =
            cfg.precond == PrecondKind::haar && (opts.force_oracle || report.padded_T <= 64);
        if (want_oracle && report.padded_T <= 64) {
            report.oracle_checked = true;
            GenericReducer oracle(std::make_shared<HaarPreconditioner>(report.padded_T), cfg.d,
                                  cfg.G, cfg.epsilon);
            Trajectory otraj = run_reduction(oracle, traj.losses, {padded_model});
            if (!trajectories_match(traj, otraj, 1e-9)) report.oracle_ok = false;
        }

        sum_model += tr.regret_model;
        sum_c += tr.bound_c;
        report.trials.push_back(std::move(tr));
    }

    const double n = static_cast<double>(cfg.trials);
    report.mean_regret_model = sum_model / n;
    report.mean_regret_hindsight = cfg.hindsight ? sum_hind / n : 0.0;
    report.mean_bound_c = sum_c / n;
    return report;
}

nlohmann::json LadderReport::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points)
        pts.push_back({{"T", p.T}, {"mean_regret", p.mean_regret}, {"mean_bound_c", p.mean_bound_c}});
    return {{"points", pts}, {"growth_exponent", growth_exponent}, {"c_ratio", c_ratio}};
}

LadderReport run_ladder(ScenarioConfig base, const std::vector<std::size_t>& horizons) {
    if (horizons.size() < 2) throw std::invalid_argument("run_ladder: need at least two rungs");
    LadderReport out;
    std::vector<std::pair<double, double>> curve;
    double c_min = 0.0, c_max = 0.0;
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        base.T = horizons[i];
        const ExperimentReport rep = run_experiment(base);
        LadderPoint pt;
        pt.T = horizons[i];
        pt.mean_regret = base.hindsight ? rep.mean_regret_hindsight : rep.mean_regret_model;
        pt.mean_bound_c = rep.mean_bound_c;
        out.points.push_back(pt);
        curve.emplace_back(static_cast<double>(pt.T), pt.mean_regret);
        if (i == 0) {
            c_min = c_max = pt.mean_bound_c;
        } else {
            c_min = std::min(c_min, pt.mean_bound_c);
            c_max = std::max(c_max, pt.mean_bound_c);
        }
    }
    out.growth_exponent = fit_loglog_slope(curve);
    out.c_ratio = c_min > 0.0 ? c_max / c_min : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace dynreg
