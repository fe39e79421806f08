#pragma once

// Experiment configuration: which model, which update rule, how long to
// run, what to record, where to write.  Parsed from flat key=value text
// (same keys as the CLI flags) with named presets for the built-in
// demonstration experiments.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "overrelax/diagnostics.hpp"
#include "overrelax/io.hpp"
#include "overrelax/sampler.hpp"

namespace overrelax {

constexpr std::uint64_t kDefaultSeed = 12345;

struct ExperimentConfig {
    enum class Model { bivariate_gaussian, multiquadratic, pump };

    std::string label = "run";
    std::string preset;  // name of the preset this config came from, if any

    Model model = Model::bivariate_gaussian;
    double rho = 0.998;

    // pump model parameters; dataset_path empty means generate synthetically
    std::size_t p = 100;
    double gamma_shape = 20.0;
    double hyper_gamma = 0.1;
    double hyper_delta = 1.0;
    double beta_true = 0.2;
    std::string dataset_path;

    SamplerSpec sampler;
    std::size_t n_iter = 2000;
    std::optional<std::size_t> burn_in;  // default depends on the model
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::string> monitors;   // empty: model default
    std::string out_dir = "out";
    TruncationRule truncation = TruncationRule::geyer_pairs;

    const char* model_name() const {
        switch (model) {
            case Model::bivariate_gaussian: return "bivariate_gaussian";
            case Model::multiquadratic: return "multiquadratic";
            default: return "pump";
        }
    }

    /// Burn-in actually used: 50 sweeps for the pump runs, 100 otherwise,
    /// unless set explicitly.
    std::size_t effective_burn_in() const {
        if (burn_in) return *burn_in;
        return model == Model::pump ? 50 : 100;
    }

    std::vector<std::string> effective_monitors() const {
        if (!monitors.empty()) return monitors;
        if (model == Model::pump) return {"tau"};
        return {"x1", "x1sq"};
    }

    void validate() const {
        if (!(std::fabs(rho) < 1.0))
            throw std::invalid_argument("config error: rho=" + std::to_string(rho) +
                                        " invalid; requires -1 < rho < 1");
        if (model == Model::pump) {
            if (p < 1)
                throw std::invalid_argument("config error: p must be >= 1");
            if (!(gamma_shape > 0.0))
                throw std::invalid_argument("config error: gamma_shape must be > 0");
            if (!(hyper_gamma > 0.0))
                throw std::invalid_argument("config error: hyper_gamma must be > 0");
            if (!(hyper_delta > 0.0))
                throw std::invalid_argument("config error: hyper_delta must be > 0");
            if (!(beta_true > 0.0))
                throw std::invalid_argument("config error: beta_true must be > 0");
        }
        if (sampler.method == SamplerSpec::Method::adler &&
            !(sampler.adler_alpha >= -1.0 && sampler.adler_alpha <= 1.0))
            throw std::invalid_argument(
                "config error: adler_alpha=" + std::to_string(sampler.adler_alpha) +
                " invalid; Adler updates require -1 <= alpha <= +1");
        if ((sampler.method == SamplerSpec::Method::ordered_over ||
             sampler.method == SamplerSpec::Method::ordered_under) &&
            sampler.k < 1)
            throw std::invalid_argument("config error: k must be >= 1");
        if (n_iter == 0)
            throw std::invalid_argument("config error: iters must be >= 1");
        if (effective_burn_in() >= n_iter)
            throw std::invalid_argument("config error: burn_in must be < iters");
        if (label.empty())
            throw std::invalid_argument("config error: label must be nonempty");
        for (const std::string& m : effective_monitors()) {
            if (m == "tau") continue;
            if (m.size() >= 2 && m.front() == 'x') continue;
            throw std::invalid_argument("config error: unknown monitor '" + m +
                                        "' (expected xN, xNsq or tau)");
        }
        if (!dataset_path.empty() && model != Model::pump)
            throw std::invalid_argument(
                "config error: dataset applies to the pump model only");
    }

    /// The fully-resolved configuration, for embedding into every output.
    KeyValueList resolved() const {
        KeyValueList kv;
        kv.emplace_back("label", label);
        if (!preset.empty()) kv.emplace_back("preset", preset);
        kv.emplace_back("model", model_name());
        if (model == Model::pump) {
            kv.emplace_back("p", std::to_string(p));
            kv.emplace_back("gamma_shape", format_double(gamma_shape));
            kv.emplace_back("hyper_gamma", format_double(hyper_gamma));
            kv.emplace_back("hyper_delta", format_double(hyper_delta));
            if (dataset_path.empty())
                kv.emplace_back("beta_true", format_double(beta_true));
            else
                kv.emplace_back("dataset", dataset_path);
        } else {
            kv.emplace_back("rho", format_double(rho));
        }
        kv.emplace_back("method", sampler.describe());
        kv.emplace_back("iters", std::to_string(n_iter));
        kv.emplace_back("burn_in", std::to_string(effective_burn_in()));
        kv.emplace_back("master_seed", std::to_string(seed));
        std::string ms;
        for (const std::string& m : effective_monitors()) {
            if (!ms.empty()) ms += ",";
            ms += m;
        }
        kv.emplace_back("monitors", ms);
        kv.emplace_back("truncation_rule", truncation_rule_name(truncation));
        return kv;
    }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config error: " + key + "=" + value +
                                    " is not a number");
    }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config error: " + key + "=" + value +
                                    " is not a nonnegative integer");
    }
}

}  // namespace detail

/// Apply one of the named single-run presets.
inline void apply_preset(ExperimentConfig& cfg, const std::string& name) {
    auto gaussian_base = [&cfg, &name]() {
        cfg.model = ExperimentConfig::Model::bivariate_gaussian;
        cfg.rho = 0.998;
        cfg.n_iter = 2000;
        cfg.burn_in = 100;
        cfg.monitors = {"x1", "x1sq"};
        cfg.label = name;
        cfg.preset = name;
    };
    auto pump_base = [&cfg, &name]() {
        cfg.model = ExperimentConfig::Model::pump;
        cfg.p = 100;
        cfg.gamma_shape = 20.0;
        cfg.hyper_gamma = 0.1;
        cfg.hyper_delta = 1.0;
        cfg.beta_true = 0.2;
        cfg.n_iter = 600;
        cfg.burn_in = 50;
        cfg.monitors = {"tau"};
        cfg.label = name;
        cfg.preset = name;
    };
    auto oo = [](int k) {
        SamplerSpec s;
        s.method = SamplerSpec::Method::ordered_over;
        s.k = k;
        s.impl = SamplerSpec::OverImpl::cdf;
        return s;
    };

    if (name == "fig2-gibbs") {
        gaussian_base();
        cfg.sampler = SamplerSpec{};
    } else if (name == "fig2-adler") {
        gaussian_base();
        cfg.sampler.method = SamplerSpec::Method::adler;
        cfg.sampler.adler_alpha = -0.89;
    } else if (name == "fig4-k32") {
        gaussian_base();
        cfg.sampler = oo(32);
    } else if (name == "fig5-gibbs") {
        pump_base();
        cfg.sampler = SamplerSpec{};
    } else if (name == "fig5-k5") {
        pump_base();
        cfg.sampler = oo(5);
    } else if (name == "fig5-k11") {
        pump_base();
        cfg.sampler = oo(11);
    } else if (name == "fig5-k21") {
        pump_base();
        cfg.sampler = oo(21);
    } else {
        throw std::invalid_argument("config error: unknown preset '" + name + "'");
    }
}

/// Apply a single key=value setting.  Returns false if the key is unknown.
inline bool apply_config_key(ExperimentConfig& cfg, const std::string& key,
                             const std::string& value) {
    if (key == "preset") {
        apply_preset(cfg, value);
    } else if (key == "label") {
        cfg.label = value;
    } else if (key == "model") {
        if (value == "bivariate_gaussian")
            cfg.model = ExperimentConfig::Model::bivariate_gaussian;
        else if (value == "multiquadratic")
            cfg.model = ExperimentConfig::Model::multiquadratic;
        else if (value == "pump")
            cfg.model = ExperimentConfig::Model::pump;
        else
            throw std::invalid_argument(
                "config error: model=" + value +
                " invalid; expected bivariate_gaussian, multiquadratic or pump");
    } else if (key == "rho") {
        cfg.rho = detail::parse_double(key, value);
    } else if (key == "p") {
        cfg.p = detail::parse_u64(key, value);
    } else if (key == "gamma_shape") {
        cfg.gamma_shape = detail::parse_double(key, value);
    } else if (key == "hyper_gamma") {
        cfg.hyper_gamma = detail::parse_double(key, value);
    } else if (key == "hyper_delta") {
        cfg.hyper_delta = detail::parse_double(key, value);
    } else if (key == "beta_true") {
        cfg.beta_true = detail::parse_double(key, value);
    } else if (key == "dataset") {
        cfg.dataset_path = value;
    } else if (key == "method") {
        if (value == "gibbs") cfg.sampler.method = SamplerSpec::Method::gibbs;
        else if (value == "adler") cfg.sampler.method = SamplerSpec::Method::adler;
        else if (value == "ordered_over")
            cfg.sampler.method = SamplerSpec::Method::ordered_over;
        else if (value == "ordered_under")
            cfg.sampler.method = SamplerSpec::Method::ordered_under;
        else
            throw std::invalid_argument(
                "config error: method=" + value +
                " invalid; expected gibbs, adler, ordered_over or ordered_under");
    } else if (key == "adler_alpha" || key == "alpha") {
        cfg.sampler.adler_alpha = detail::parse_double(key, value);
    } else if (key == "k") {
        const double d = detail::parse_double(key, value);
        cfg.sampler.k = static_cast<int>(d);
        if (static_cast<double>(cfg.sampler.k) != d)
            throw std::invalid_argument("config error: k=" + value +
                                        " must be an integer");
    } else if (key == "impl") {
        if (value == "direct") cfg.sampler.impl = SamplerSpec::OverImpl::direct;
        else if (value == "cdf") cfg.sampler.impl = SamplerSpec::OverImpl::cdf;
        else
            throw std::invalid_argument("config error: impl=" + value +
                                        " invalid; expected direct or cdf");
    } else if (key == "iters") {
        cfg.n_iter = detail::parse_u64(key, value);
    } else if (key == "burn_in") {
        cfg.burn_in = detail::parse_u64(key, value);
    } else if (key == "seed") {
        cfg.seed = detail::parse_u64(key, value);
    } else if (key == "monitors") {
        cfg.monitors = detail::split_list(value);
    } else if (key == "out_dir") {
        cfg.out_dir = value;
    } else if (key == "truncation_rule") {
        cfg.truncation = parse_truncation_rule(value);
    } else {
        return false;
    }
    return true;
}

/// Parse a key=value config file into a validated ExperimentConfig.
inline ExperimentConfig parse_config(const std::filesystem::path& path) {
    ExperimentConfig cfg;
    for (const auto& [key, value] : read_key_value_file(path)) {
        if (!apply_config_key(cfg, key, value))
            throw std::invalid_argument("config error: unknown key '" + key +
                                        "' in " + path.string());
    }
    cfg.validate();
    return cfg;
}

}  // namespace overrelax
