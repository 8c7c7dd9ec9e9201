// Command-line harness: simulate experiments, verify the matrix analysis
// suites, search lower-bound witnesses, and run the structured identity
// checks. Exit codes: 0 all checks pass, 1 an assertion failed, 2 bad config.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynreg/config.hpp"
#include "dynreg/csvio.hpp"
#include "dynreg/difference.hpp"
#include "dynreg/experiment.hpp"
#include "dynreg/haar.hpp"
#include "dynreg/learner.hpp"
#include "dynreg/precond.hpp"
#include "dynreg/rng.hpp"
#include "dynreg/scenario.hpp"
#include "dynreg/verify.hpp"

using namespace dynreg;

namespace {

struct CheckTable {
    int failures = 0;
    void row(const std::string& name, bool ok, const std::string& detail = "") {
        std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                    detail.empty() ? "" : ": ", detail.c_str());
        if (!ok) ++failures;
    }
};

ScenarioConfig load_scenario(const std::string& config_path, std::uint64_t* seed_override,
                             std::int64_t trials_override, std::int64_t T_override) {
    KeyValueConfig cfg = config_path.empty() ? KeyValueConfig()
                                             : KeyValueConfig::parse_file(config_path);
    if (seed_override) cfg.set("run.seed", std::to_string(*seed_override));
    if (trials_override > 0) cfg.set("run.trials", std::to_string(trials_override));
    if (T_override > 0) cfg.set("scenario.T", std::to_string(T_override));
    return ScenarioConfig::from_config(cfg);
}

void write_json(const std::string& out_dir, const std::string& name, const nlohmann::json& j) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

DenseMatrix difference_inverse_dense(std::size_t T) {
    DenseMatrix m(T, T);
    for (std::size_t i = 0; i < T; ++i)
        for (std::size_t j = 0; j < T; ++j) m(i, j) = difference_M_inverse_entry(i, j, T);
    return m;
}

int cmd_simulate(const std::string& config_path, std::uint64_t* seed, std::int64_t trials,
                 std::int64_t T, const std::string& out_dir, bool per_round, bool oracle_check,
                 const std::string& ladder_spec) {
    ScenarioConfig cfg = load_scenario(config_path, seed, trials, T);

    if (!ladder_spec.empty()) {
        std::vector<std::size_t> horizons;
        std::size_t b = 0;
        while (b < ladder_spec.size()) {
            const auto e = ladder_spec.find(',', b);
            horizons.push_back(std::stoul(ladder_spec.substr(b, e - b)));
            if (e == std::string::npos) break;
            b = e + 1;
        }
        const auto rep = run_ladder(cfg, horizons);
        std::printf("ladder: exponent %.4f, bound-constant ratio %.3f\n", rep.growth_exponent,
                    rep.c_ratio);
        for (const auto& p : rep.points)
            std::printf("  T=%6zu  mean_regret=%12.4f  mean_c=%.4f\n", p.T, p.mean_regret,
                        p.mean_bound_c);
        write_json(out_dir, "ladder.json", rep.to_json());
        return 0;
    }

    ExperimentOptions opts;
    opts.per_round_records = per_round;
    opts.force_oracle = oracle_check;
    if (per_round && !out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        opts.records_dir = out_dir;
    }
    const auto rep = run_experiment(cfg, opts);
    std::printf("simulate: T=%zu (padded %zu), d=%zu, pairing=%s, trials=%zu\n", cfg.T,
                rep.padded_T, cfg.d, to_string(cfg.precond).c_str(), cfg.trials);
    std::printf("  mean regret vs model comparator: %.6f\n", rep.mean_regret_model);
    if (cfg.hindsight)
        std::printf("  mean regret vs hindsight comparator: %.6f\n", rep.mean_regret_hindsight);
    std::printf("  mean bound constant: %.6f\n", rep.mean_bound_c);
    if (rep.oracle_checked)
        std::printf("  dense-path oracle check: %s\n", rep.oracle_ok ? "ok" : "MISMATCH");
    write_json(out_dir, "report.json", rep.to_json());
    return rep.oracle_checked && !rep.oracle_ok ? 1 : 0;
}

int cmd_verify(const std::string& out_dir, std::uint64_t seed) {
    CheckTable table;
    nlohmann::json reports = nlohmann::json::array();

    bool small_ok = true;
    for (std::size_t T = 2; T <= 64; ++T) {
        const auto rep = verify_difference_eigen_bound(T);
        if (!rep.eigen_bound_ok || !rep.wolkowicz_ok) small_ok = false;
    }
    table.row("difference eigen bound T=2..64", small_ok);
    for (std::size_t T : {128, 256, 512, 1024}) {
        const auto rep = verify_difference_eigen_bound(T);
        reports.push_back(rep.to_json());
        char detail[96];
        std::snprintf(detail, sizeof(detail), "lambda_max %.4f <= 0.9 trace %.1f",
                      rep.lambda_max_inverse, rep.trace_inverse);
        table.row("difference eigen bound T=" + std::to_string(T), rep.eigen_bound_ok, detail);
    }

    Rng rng(split_seed(seed, 0xC0));
    bool wolk_ok = true;
    for (std::size_t n : {4, 16, 64}) {
        for (int rep = 0; rep < 100; ++rep) {
            DenseMatrix a(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) {
                    a(i, j) = normal(rng);
                    a(j, i) = a(i, j);
                }
            if (wolkowicz_upper_bound(a) < jacobi_eigenvalues(a).back() * (1.0 - 1e-10))
                wolk_ok = false;
        }
    }
    table.row("wolkowicz bound dominates on 300 random symmetric matrices", wolk_ok);

    bool pert_ok = true;
    for (std::size_t T : {8, 16}) {
        DenseMatrix delta(T - 1, T);
        for (std::size_t i = 0; i + 1 < T; ++i) {
            delta(i, i) = 1.0;
            delta(i, i + 1) = -1.0;
        }
        const auto gram = delta.transpose() * delta;
        for (int rep = 0; rep < 25; ++rep) {
            std::vector<double> v(T);
            double nrm = 0.0;
            for (auto& x : v) {
                x = normal(rng);
                nrm += x * x;
            }
            for (auto& x : v) x /= std::sqrt(nrm);
            if (!verify_perturbation_bound(gram, v)) pert_ok = false;
        }
    }
    table.row("perturbation trace bound on unit vectors", pert_ok);

    bool frob_ok = true;
    for (std::size_t T = 4; T <= 128; ++T)
        if (!frobenius_condition(difference_inverse_dense(T))) frob_ok = false;
    table.row("frobenius off-diagonal condition T=4..128", frob_ok);

    write_json(out_dir, "verify.json", reports);
    std::printf("%d verification check(s) failed\n", table.failures);
    return table.failures == 0 ? 0 : 1;
}

int cmd_lowerbound(std::size_t T, double G, double P, double q, const std::string& mode,
                   std::size_t samples, std::size_t tail_trials, std::uint64_t seed,
                   const std::string& out_dir) {
    const auto a = difference_inverse_dense(T);
    const SearchMode m = mode == "exhaustive" ? SearchMode::exhaustive : SearchMode::sampled;
    const auto outcome = adversary_search(a, G, P, q, m, samples, seed);
    std::printf("lowerbound: T=%zu, mode=%s, tried %zu patterns\n", T, mode.c_str(),
                outcome.patterns_tried);
    std::printf("  achieved quadratic %.4f vs threshold %.4f -> %s\n", outcome.achieved_quadratic,
                outcome.threshold, outcome.found ? "witness found" : "no witness");
    std::printf("  zero-play regret lower value: %.4f\n", outcome.regret_lower_value);
    if (m == SearchMode::sampled)
        std::printf("  success fraction: %.4f\n", outcome.success_fraction);

    nlohmann::json j = outcome.to_json();
    if (tail_trials > 0) {
        const auto tail = empirical_quadratic_tail(a, G, tail_trials, seed);
        std::printf("  tail: mean %.4f (expected %.4f), within 3 SE: %s\n", tail.mean,
                    tail.expected_mean, tail.mean_within_3se ? "yes" : "no");
        j = nlohmann::json{{"search", std::move(j)}, {"tail", tail.to_json()}};
        if (!tail.mean_within_3se) {
            write_json(out_dir, "lowerbound.json", j);
            return 1;
        }
    }
    write_json(out_dir, "lowerbound.json", j);
    return outcome.found ? 0 : 1;
}

int cmd_matrices(const std::string& out_dir) {
    CheckTable table;

    bool trace_ok = true;
    for (std::size_t T = 1; T <= 512; ++T) {
        double diag = 0.0;
        for (std::size_t t = 0; t < T; ++t) diag += difference_M_inverse_entry(t, t, T);
        if (diag != difference_trace_inverse(T)) trace_ok = false;
    }
    table.row("difference trace closed form T=1..512", trace_ok);

    bool entries_ok = true;
    for (std::size_t T = 1; T <= 64; ++T) {
        DifferenceOperator sigma(T);
        const auto m = sigma.dense().transpose() * sigma.dense();
        const auto prod = m * difference_inverse_dense(T);
        for (std::size_t i = 0; i < T; ++i)
            for (std::size_t j = 0; j < T; ++j)
                if (prod(i, j) != (i == j ? 1.0 : 0.0)) entries_ok = false;
    }
    table.row("difference inverse entries exact T<=64", entries_ok);

    bool sigma_ok = true;
    for (std::size_t T = 1; T <= 64; ++T) {
        DifferenceOperator sigma(T);
        const auto left = sigma.dense() * sigma.dense_inverse();
        const auto right = sigma.dense_inverse() * sigma.dense();
        for (std::size_t i = 0; i < T; ++i)
            for (std::size_t j = 0; j < T; ++j) {
                if (left(i, j) != (i == j ? 1.0 : 0.0)) sigma_ok = false;
                if (right(i, j) != (i == j ? 1.0 : 0.0)) sigma_ok = false;
            }
    }
    table.row("sigma times its triangular inverse is the identity T<=64", sigma_ok);

    bool haar_ok = true;
    for (std::size_t n = 0; n <= 10; ++n) {
        const std::size_t T = std::size_t{1} << n;
        for (std::size_t t = 0; t < T; ++t)
            if (haar_row(t, n).size() != 1 + n) haar_ok = false;
    }
    table.row("haar row support is 1 + log2(T) for n<=10", haar_ok);

    bool decomp_ok = true;
    Rng rng(17);
    for (std::size_t T : {4, 16, 64, 256}) {
        for (int rep = 0; rep < 10; ++rep) {
            ComparatorSeq seq(T, std::vector<double>(2));
            for (auto& u : seq)
                for (auto& x : u) x = normal(rng);
            double sum = timescale_path_length(seq, T);
            for (std::size_t tau = 1; tau < T; tau *= 2)
                sum += 0.25 * timescale_path_length(seq, tau);
            const double got = haar_comparator_norm_sq(seq);
            if (std::fabs(got - sum) > 1e-10 * std::max(1.0, got)) decomp_ok = false;
        }
    }
    table.row("haar norm equals the timescale decomposition", decomp_ok);

    nlohmann::json j = {{"failures", table.failures}};
    write_json(out_dir, "matrices.json", j);
    std::printf("%d matrix identity check(s) failed\n", table.failures);
    return table.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic-regret reduction harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir, ladder_spec, mode = "exhaustive";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::int64_t trials = 0, horizon = 0;
    bool per_round = false, oracle_check = false;
    std::size_t lb_T = 8, samples = 10000, tail_trials = 0;
    double G = 1.0, P = 1.0, q = 1.0;

    auto* sim = app.add_subcommand("simulate", "run a configured experiment");
    sim->add_option("--config", config_path, "key-value config file")->required();
    sim->add_option("--seed", seed, "override run.seed")->each([&](const std::string&) {
        seed_set = true;
    });
    sim->add_option("--trials", trials, "override run.trials");
    sim->add_option("--T", horizon, "override scenario.T");
    sim->add_option("--out", out_dir, "output directory for report.json");
    sim->add_flag("--per-round", per_round, "emit per-round records as CSV");
    sim->add_flag("--oracle-check", oracle_check, "force dense equivalence when T <= 64");
    sim->add_option("--ladder", ladder_spec, "comma-separated horizon ladder");

    auto* ver = app.add_subcommand("verify", "run the spectral verification suites");
    ver->add_option("--out", out_dir, "output directory for verify.json");
    ver->add_option("--seed", seed, "seed for randomized checks");

    auto* lb = app.add_subcommand("lowerbound", "adversarial witness search");
    lb->add_option("--T", lb_T, "horizon (pairing order)");
    lb->add_option("--G", G, "loss magnitude");
    lb->add_option("--P", P, "comparator norm budget, ||u~||_M = sqrt(P)");
    lb->add_option("--q", q, "frobenius multiplier, q >= 1");
    lb->add_option("--mode", mode, "exhaustive or sampled")
        ->check(CLI::IsMember({"exhaustive", "sampled"}));
    lb->add_option("--samples", samples, "sample count for sampled mode");
    lb->add_option("--tail-trials", tail_trials, "also run the quadratic tail summary");
    lb->add_option("--seed", seed, "seed for sampled mode");
    lb->add_option("--out", out_dir, "output directory for lowerbound.json");

    auto* mat = app.add_subcommand("matrices", "structured identity suites");
    mat->add_option("--out", out_dir, "output directory for matrices.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, seed_set ? &seed : nullptr, trials, horizon, out_dir,
                                per_round, oracle_check, ladder_spec);
        if (ver->parsed()) return cmd_verify(out_dir, seed);
        if (lb->parsed())
            return cmd_lowerbound(lb_T, G, P, q, mode, samples, tail_trials, seed, out_dir);
        if (mat->parsed()) return cmd_matrices(out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
