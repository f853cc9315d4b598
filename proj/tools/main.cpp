#include "hybridpf/config.hpp"
#include "hybridpf/errors.hpp"
#include "hybridpf/parallel.hpp"
#include "hybridpf/trace.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using hybridpf::ExperimentConfig;
using hybridpf::ModelKind;
using nlohmann::json;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model;
    std::optional<int> passes;
    std::optional<std::string> out;
};

void apply_overrides(ExperimentConfig& cfg, const Overrides& ov) {
    if (ov.seed) {
        cfg.filter.seed = *ov.seed;
    }
    if (ov.model) {
        cfg.model = hybridpf::parse_model_kind(*ov.model);
    }
    if (ov.passes) {
        cfg.passes = *ov.passes;
        if (cfg.passes < 1) {
            throw hybridpf::ConfigError("passes must be at least 1");
        }
    }
    if (ov.out) {
        cfg.output = *ov.out;
    }
    cfg.filter.threads = std::min(cfg.filter.threads, hybridpf::env_thread_cap());
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Deterministic per-model seed shift so comparison runs stay reproducible
/// while each model still draws distinct randomness.
std::uint64_t bench_seed_offset(ModelKind kind) {
    switch (kind) {
        case ModelKind::Naive:
            return 0;
        case ModelKind::SxOnly:
            return 1;
        case ModelKind::RnnOnly:
            return 2;
        case ModelKind::Hybrid:
            return 3;
    }
    return 0;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
    ExperimentConfig cfg = hybridpf::load_config(config_path);
    apply_overrides(cfg, ov);
    auto [first, second] = hybridpf::load_experiment_data(cfg);

    hybridpf::TraceWriter writer(cfg.output);
    const auto t0 = std::chrono::steady_clock::now();
    json summary;
    auto sink = [&writer](const hybridpf::RunRecord& rec) { writer.write_record(rec); };

    if (cfg.protocol == hybridpf::ProtocolMode::Online) {
        const auto records = hybridpf::run_online(first, cfg.pipeline_config(), sink);
        summary["final_cum_mse"] = records.back().cum_mse;
        summary["steps"] = records.size();
    } else {
        const auto result = hybridpf::run_offline(first, *second, cfg.pipeline_config(), sink);
        summary["mape"] = result.mape;
        summary["final_cum_mse"] = result.records.back().cum_mse;
        summary["steps"] = result.records.size();
    }
    const auto t1 = std::chrono::steady_clock::now();
    summary["runtime_seconds"] = std::chrono::duration<double>(t1 - t0).count();
    summary["seed"] = cfg.filter.seed;
    summary["config"] = hybridpf::config_echo(cfg);
    writer.write_summary(summary);
    return 0;
}

struct SynthArgs {
    std::string kind;
    std::string out;
    int T = 2000;
    std::uint64_t seed = 0;
    double sigma = 0.1;
    int period = 1;
    int d = 0;
    int D = 0;
    std::vector<double> phi;
    std::vector<double> theta;
    std::vector<double> seasonal_phi;
    std::vector<double> seasonal_theta;
    std::vector<double> beta;
};

void write_series_csv(const std::string& path, const hybridpf::Dataset& data,
                      const std::vector<double>* cond_mean) {
    std::ofstream out(path, std::ios::out | std::ios::trunc);
    if (!out) {
        throw hybridpf::DataError("cannot open output file: " + path);
    }
    out << "y";
    for (int j = 0; j < data.n_exog(); ++j) {
        out << ",x" << (j + 1);
    }
    if (cond_mean != nullptr) {
        out << ",cond_mean";
    }
    out << "\n";
    for (int t = 0; t < data.size(); ++t) {
        out << fmt_double(data.target[static_cast<std::size_t>(t)]);
        for (int j = 0; j < data.n_exog(); ++j) {
            out << ',' << fmt_double(data.exog(t, j));
        }
        if (cond_mean != nullptr) {
            out << ',' << fmt_double((*cond_mean)[static_cast<std::size_t>(t)]);
        }
        out << "\n";
    }
}

void write_list(std::ofstream& meta, const char* key, const std::vector<double>& v) {
    if (v.empty()) {
        return;
    }
    meta << key << '=';
    for (std::size_t i = 0; i < v.size(); ++i) {
        meta << (i ? " " : "") << fmt_double(v[i]);
    }
    meta << '\n';
}

int cmd_synth(const SynthArgs& args) {
    if (args.kind == "sarimax") {
        hybridpf::SarimaxSpec spec;
        spec.p = static_cast<int>(args.phi.size());
        spec.q = static_cast<int>(args.theta.size());
        spec.P = static_cast<int>(args.seasonal_phi.size());
        spec.Q = static_cast<int>(args.seasonal_theta.size());
        spec.n_exog = static_cast<int>(args.beta.size());
        spec.d = args.d;
        spec.D = args.D;
        spec.period = args.period;
        hybridpf::SynthCoeffs coeffs{args.phi, args.theta, args.seasonal_phi,
                                     args.seasonal_theta, args.beta};
        const auto result = hybridpf::synth_sarimax(spec, coeffs, args.sigma, args.T, args.seed);
        write_series_csv(args.out, result.data, &result.conditional_mean);

        std::ofstream meta(args.out + ".meta", std::ios::out | std::ios::trunc);
        meta << "kind=sarimax\n"
             << "T=" << args.T << "\nseed=" << args.seed << "\nnoise_sigma="
             << fmt_double(args.sigma) << "\nd=" << args.d << "\nD=" << args.D
             << "\nperiod=" << args.period << '\n';
        write_list(meta, "phi", args.phi);
        write_list(meta, "theta", args.theta);
        write_list(meta, "seasonal_phi", args.seasonal_phi);
        write_list(meta, "seasonal_theta", args.seasonal_theta);
        write_list(meta, "beta", args.beta);
        meta << "columns=y"
             << (spec.n_exog > 0 ? ",x1.." : "")
             << ",cond_mean\n"
             << "note=cond_mean holds the generator's one-step conditional means\n";
        return 0;
    }
    if (args.kind == "hybrid") {
        const auto data = hybridpf::synth_hybrid(args.T, args.period, args.seed, args.sigma);
        write_series_csv(args.out, data, nullptr);
        std::ofstream meta(args.out + ".meta", std::ios::out | std::ios::trunc);
        meta << "kind=hybrid\nT=" << args.T << "\nseed=" << args.seed
             << "\nnoise_sigma=" << fmt_double(args.sigma) << "\nperiod=" << args.period << '\n'
             << "columns=y,x1,x2\n"
             << "formula=lin_t = 0.5*lin_(t-1) + 0.3*lin_(t-m) + x1_t; "
                "y_t = lin_t + 0.8*tanh(2*x1_(t-1)*x2_(t-1)) + 0.4*x2_(t-1)^2 + "
                "noise_sigma*xi_t\n"
             << "drivers=x1_t = sin(2*pi*t/m + a); x2_t = sin(2*pi*t/(3.17*m) + b); "
                "phases a, b drawn from the seed\n";
        return 0;
    }
    throw hybridpf::ConfigError("unknown generator kind '" + args.kind +
                                "' (expected sarimax or hybrid)");
}

int cmd_bench(const std::string& config_path, const Overrides& ov) {
    ExperimentConfig cfg = hybridpf::load_config(config_path);
    apply_overrides(cfg, ov);
    if (cfg.bench_models.empty()) {
        throw hybridpf::ConfigError("bench config needs a non-empty models list");
    }
    auto [first, second] = hybridpf::load_experiment_data(cfg);
    const std::uint64_t base_seed = cfg.filter.seed;

    const bool online = cfg.protocol == hybridpf::ProtocolMode::Online;
    std::ostringstream table;
    table << "model\t" << (online ? "final_cum_mse" : "mape") << '\n';
    for (ModelKind kind : cfg.bench_models) {
        ExperimentConfig run_cfg = cfg;
        run_cfg.model = kind;
        run_cfg.filter.seed = base_seed + bench_seed_offset(kind);
        double metric = 0.0;
        if (online) {
            const auto records = hybridpf::run_online(first, run_cfg.pipeline_config());
            metric = records.back().cum_mse;
        } else {
            metric = hybridpf::run_offline(first, *second, run_cfg.pipeline_config()).mape;
        }
        table << hybridpf::model_kind_name(kind) << '\t' << fmt_double(metric) << '\n';
    }
    std::cout << table.str();
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output, std::ios::out | std::ios::trunc);
        if (!out) {
            throw hybridpf::DataError("cannot open output file: " + cfg.output);
        }
        out << table.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint recurrent/linear state-space prediction engine"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;

    CLI::App* run = app.add_subcommand("run", "Run one experiment from a config file");
    run->add_option("--config", config_path, "Config file (JSON)")->required();
    run->add_option("--seed", ov.seed, "Override the config seed");
    run->add_option("--model", ov.model, "Override the model kind");
    run->add_option("--passes", ov.passes, "Override offline training passes");
    run->add_option("--out", ov.out, "Override the trace output path");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic series as CSV");
    synth->add_option("--kind", synth_args.kind, "Generator: sarimax or hybrid")->required();
    synth->add_option("--out", synth_args.out, "Output CSV path")->required();
    synth->add_option("--T", synth_args.T, "Series length");
    synth->add_option("--seed", synth_args.seed, "Generator seed (default 0)");
    synth->add_option("--sigma", synth_args.sigma, "Noise standard deviation");
    synth->add_option("--m,--period", synth_args.period, "Seasonal period");
    synth->add_option("--d", synth_args.d, "Ordinary differencing order");
    synth->add_option("--D", synth_args.D, "Seasonal differencing order");
    synth->add_option("--phi", synth_args.phi, "AR coefficients");
    synth->add_option("--theta", synth_args.theta, "MA coefficients");
    synth->add_option("--seasonal-phi", synth_args.seasonal_phi, "Seasonal AR coefficients");
    synth->add_option("--seasonal-theta", synth_args.seasonal_theta, "Seasonal MA coefficients");
    synth->add_option("--beta", synth_args.beta, "Exogenous coefficients");

    CLI::App* bench = app.add_subcommand("bench", "Compare model kinds on one dataset");
    bench->add_option("--config", config_path, "Config file (JSON) with a models list")
        ->required();
    bench->add_option("--seed", ov.seed, "Override the config seed");
    bench->add_option("--out", ov.out, "Also write the table to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            return cmd_run(config_path, ov);
        }
        if (synth->parsed()) {
            return cmd_synth(synth_args);
        }
        return cmd_bench(config_path, ov);
    } catch (const hybridpf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const hybridpf::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const hybridpf::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
