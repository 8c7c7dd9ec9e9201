#include "dynreg/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dynreg/dense.hpp"
#include "dynreg/haar.hpp"
#include "dynreg/rng.hpp"

namespace dynreg {

std::string to_string(PrecondKind k) {
    switch (k) {
        case PrecondKind::identity: return "identity";
        case PrecondKind::difference: return "difference";
        case PrecondKind::haar: return "haar";
    }
    return "?";
}

std::string to_string(LossModel m) {
    switch (m) {
        case LossModel::rademacher: return "rademacher";
        case LossModel::tracking: return "tracking";
        case LossModel::file: return "file";
    }
    return "?";
}

std::string to_string(ComparatorModel m) {
    switch (m) {
        case ComparatorModel::zero: return "zero";
        case ComparatorModel::constant: return "static";
        case ComparatorModel::piecewise: return "piecewise-constant";
        case ComparatorModel::drift: return "drift";
        case ComparatorModel::sinusoid: return "sinusoid";
        case ComparatorModel::file: return "file";
    }
    return "?";
}

namespace {

std::vector<double> parse_vector_field(const std::string& text, const std::string& field) {
    std::vector<double> out;
    std::size_t b = 0;
    while (b <= text.size() && !text.empty()) {
        const auto e = text.find(';', b);
        const std::string tok = text.substr(b, e == std::string::npos ? e : e - b);
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ConfigError("config: field " + field + ": bad number: " + tok);
        }
        if (e == std::string::npos) break;
        b = e + 1;
    }
    return out;
}

ComparatorSeq load_sequence_file(const std::string& path, std::size_t T, std::size_t d,
                                 const std::string& field) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: field " + field + ": cannot open " + path);
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols))
        throw ConfigError("config: field " + field + ": bad header in " + path);
    if (rows != T || cols != d)
        throw ConfigError("config: field " + field + ": expected " + std::to_string(T) + " x " +
                          std::to_string(d) + " sequence in " + path);
    ComparatorSeq seq(rows, std::vector<double>(cols));
    for (auto& row : seq)
        for (auto& x : row)
            if (!(in >> x)) throw ConfigError("config: field " + field + ": truncated " + path);
    return seq;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_config(const KeyValueConfig& cfg) {
    ScenarioConfig sc;
    const auto T = cfg.get_int("scenario.T", 0);
    if (T <= 0) throw ConfigError("config: field scenario.T: positive horizon required");
    sc.T = static_cast<std::size_t>(T);
    const auto d = cfg.get_int("scenario.d", 1);
    if (d <= 0) throw ConfigError("config: field scenario.d: positive dimension required");
    sc.d = static_cast<std::size_t>(d);

    const std::string pk = cfg.get_string("scenario.preconditioner", "haar");
    if (pk == "identity") sc.precond = PrecondKind::identity;
    else if (pk == "difference") sc.precond = PrecondKind::difference;
    else if (pk == "haar") sc.precond = PrecondKind::haar;
    else throw ConfigError("config: field scenario.preconditioner: unknown kind: " + pk);

    const std::string lm = cfg.get_string("loss.model", "rademacher");
    if (lm == "rademacher") sc.loss_model = LossModel::rademacher;
    else if (lm == "tracking") sc.loss_model = LossModel::tracking;
    else if (lm == "file" || lm == "adversarial-file") sc.loss_model = LossModel::file;
    else throw ConfigError("config: field loss.model: unknown model: " + lm);
    sc.G = cfg.get_double("loss.G", 1.0);
    if (!(sc.G > 0.0)) throw ConfigError("config: field loss.G: positive bound required");
    sc.loss_file = cfg.get_string("loss.file", "");
    if (sc.loss_model == LossModel::file && sc.loss_file.empty())
        throw ConfigError("config: field loss.file: required for the file loss model");

    const std::string cm = cfg.get_string("comparator.model", "zero");
    if (cm == "zero") sc.comparator_model = ComparatorModel::zero;
    else if (cm == "static") sc.comparator_model = ComparatorModel::constant;
    else if (cm == "piecewise-constant") sc.comparator_model = ComparatorModel::piecewise;
    else if (cm == "drift") sc.comparator_model = ComparatorModel::drift;
    else if (cm == "sinusoid") sc.comparator_model = ComparatorModel::sinusoid;
    else if (cm == "file") sc.comparator_model = ComparatorModel::file;
    else throw ConfigError("config: field comparator.model: unknown model: " + cm);

    if (cfg.has("comparator.value"))
        sc.comparator_value = parse_vector_field(cfg.get_string("comparator.value", ""),
                                                 "comparator.value");
    if (sc.comparator_model == ComparatorModel::constant) {
        if (sc.comparator_value.empty()) sc.comparator_value.assign(sc.d, 1.0);
        if (sc.comparator_value.size() != sc.d)
            throw ConfigError("config: field comparator.value: expected " + std::to_string(sc.d) +
                              " entries");
    }
    const auto segs = cfg.get_int("comparator.segments", 2);
    if (segs <= 0) throw ConfigError("config: field comparator.segments: positive count required");
    sc.segments = static_cast<std::size_t>(segs);
    if (sc.segments > sc.T)
        throw ConfigError("config: field comparator.segments: more segments than rounds");
    sc.magnitude = cfg.get_double("comparator.magnitude", 1.0);
    sc.drift_step = cfg.get_double("comparator.step", 0.1);
    sc.period = cfg.get_double("comparator.period", 16.0);
    if (!(sc.period > 0.0)) throw ConfigError("config: field comparator.period: must be positive");
    sc.amplitude = cfg.get_double("comparator.amplitude", 1.0);
    sc.comparator_file = cfg.get_string("comparator.file", "");
    if (sc.comparator_model == ComparatorModel::file && sc.comparator_file.empty())
        throw ConfigError("config: field comparator.file: required for the file model");
    sc.hindsight = cfg.get_bool("comparator.hindsight", false);

    sc.seed = static_cast<std::uint64_t>(cfg.get_int("run.seed", 0));
    sc.epsilon = cfg.get_double("run.epsilon", 1.0);
    if (!(sc.epsilon > 0.0)) throw ConfigError("config: field run.epsilon: must be positive");
    const auto trials = cfg.get_int("run.trials", 1);
    if (trials <= 0) throw ConfigError("config: field run.trials: positive count required");
    sc.trials = static_cast<std::size_t>(trials);
    return sc;
}

namespace {

ComparatorSeq make_comparator(const ScenarioConfig& cfg, Rng& rng) {
    ComparatorSeq seq(cfg.T, std::vector<double>(cfg.d, 0.0));
    switch (cfg.comparator_model) {
        case ComparatorModel::zero:
            break;
        case ComparatorModel::constant:
            for (auto& u : seq) u = cfg.comparator_value;
            break;
        case ComparatorModel::piecewise: {
            std::vector<double> value(cfg.d);
            for (std::size_t k = 0; k < cfg.segments; ++k) {
                for (auto& x : value) x = uniform(rng, -cfg.magnitude, cfg.magnitude);
                const std::size_t b = k * cfg.T / cfg.segments;
                const std::size_t e = (k + 1) * cfg.T / cfg.segments;
                for (std::size_t t = b; t < e; ++t) seq[t] = value;
            }
            break;
        }
        case ComparatorModel::drift: {
            std::vector<double> pos(cfg.d, 0.0), dir(cfg.d);
            for (std::size_t t = 0; t < cfg.T; ++t) {
                double nrm = 0.0;
                for (auto& x : dir) {
                    x = normal(rng);
                    nrm += x * x;
                }
                nrm = std::sqrt(nrm);
                if (nrm > 0.0)
                    for (std::size_t j = 0; j < cfg.d; ++j)
                        pos[j] += cfg.drift_step * dir[j] / nrm;
                seq[t] = pos;
            }
            break;
        }
        case ComparatorModel::sinusoid:
            for (std::size_t t = 0; t < cfg.T; ++t)
                for (std::size_t j = 0; j < cfg.d; ++j)
                    seq[t][j] = cfg.amplitude *
                                std::sin(2.0 * M_PI * (static_cast<double>(t + 1) / cfg.period) +
                                         M_PI * static_cast<double>(j) / static_cast<double>(cfg.d));
            break;
        case ComparatorModel::file:
            seq = load_sequence_file(cfg.comparator_file, cfg.T, cfg.d, "comparator.file");
            break;
    }
    return seq;
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t trial_seed) {
    Scenario out;
    Rng loss_rng(split_seed(trial_seed, 1));
    Rng comp_rng(split_seed(trial_seed, 2));

    out.comparator = make_comparator(cfg, comp_rng);

    switch (cfg.loss_model) {
        case LossModel::rademacher: {
            out.losses.assign(cfg.T, std::vector<double>(cfg.d));
            for (auto& g : out.losses)
                for (auto& x : g) x = cfg.G * rademacher(loss_rng);
            break;
        }
        case LossModel::file:
            out.losses = load_sequence_file(cfg.loss_file, cfg.T, cfg.d, "loss.file");
            break;
        case LossModel::tracking: {
            out.online = true;
            const ComparatorSeq target = out.comparator;
            const double G = cfg.G;
            out.loss_fn = [target, G](std::size_t t, std::span<const double> play) {
                std::vector<double> g(play.size(), 0.0);
                if (t < target.size()) {
                    for (std::size_t j = 0; j < play.size(); ++j) {
                        const double delta = play[j] - target[t][j];
                        g[j] = delta > 0.0 ? G : (delta < 0.0 ? -G : 0.0);
                    }
                }
                return g;
            };
            break;
        }
    }
    return out;
}

ComparatorSeq hindsight_piecewise_comparator(const LossSeq& losses, std::size_t segments,
                                             double magnitude) {
    if (losses.empty()) throw std::invalid_argument("hindsight comparator: empty losses");
    const std::size_t T = losses.size();
    const std::size_t d = losses.front().size();
    if (segments == 0 || segments > T)
        throw std::invalid_argument("hindsight comparator: bad segment count");
    ComparatorSeq seq(T, std::vector<double>(d, 0.0));
    for (std::size_t k = 0; k < segments; ++k) {
        const std::size_t b = k * T / segments;
        const std::size_t e = (k + 1) * T / segments;
        std::vector<double> s(d, 0.0);
        for (std::size_t t = b; t < e; ++t)
            for (std::size_t j = 0; j < d; ++j) s[j] += losses[t][j];
        const double nrm = std::sqrt(norm_sq(s));
        if (nrm > 0.0)
            for (auto& x : s) x *= -magnitude / nrm;
        for (std::size_t t = b; t < e; ++t) seq[t] = s;
    }
    return seq;
}

double path_length(const ComparatorSeq& seq) {
    double acc = 0.0;
    for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
        double step = 0.0;
        for (std::size_t j = 0; j < seq[t].size(); ++j) {
            const double diff = seq[t][j] - seq[t + 1][j];
            step += diff * diff;
        }
        acc += std::sqrt(step);
    }
    return acc;
}

double squared_path_length(const ComparatorSeq& seq) {
    double acc = 0.0;
    for (std::size_t t = 0; t + 1 < seq.size(); ++t)
        for (std::size_t j = 0; j < seq[t].size(); ++j) {
            const double diff = seq[t][j] - seq[t + 1][j];
            acc += diff * diff;
        }
    return acc;
}

double max_interval_average_gap(const ComparatorSeq& seq) {
    const std::size_t T = seq.size();
    log2_exact(T);
    const std::size_t d = seq.front().size();
    double best = 0.0;
    for (std::size_t tau = 1; tau < T; tau *= 2) {
        const std::size_t cells = T / tau;
        std::vector<std::vector<double>> avg(cells, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < cells; ++i) {
            for (std::size_t t = i * tau; t < (i + 1) * tau; ++t)
                for (std::size_t j = 0; j < d; ++j) avg[i][j] += seq[t][j];
            for (auto& x : avg[i]) x /= static_cast<double>(tau);
        }
        for (std::size_t i = 0; i + 1 < cells; ++i) {
            double gap = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = avg[i][j] - avg[i + 1][j];
                gap += diff * diff;
            }
            best = std::max(best, std::sqrt(gap));
        }
    }
    return best;
}

}  // namespace dynreg
