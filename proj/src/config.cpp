#include "hybridpf/config.hpp"

#include "hybridpf/errors.hpp"

#include <fstream>
#include <set>

namespace hybridpf {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& ctx, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        throw ConfigError(ctx + ": expected an object");
    }
    for (const auto& item : obj.items()) {
        if (allowed.count(item.key()) == 0) {
            throw ConfigError(ctx + ": unknown key '" + item.key() + "'");
        }
    }
}

template <typename T>
T field_or(const json& obj, const std::string& ctx, const std::string& key, T fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(ctx + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T field(const json& obj, const std::string& ctx, const std::string& key) {
    if (!obj.contains(key)) {
        throw ConfigError(ctx + ": missing required field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(ctx + ": field '" + key + "' has the wrong type");
    }
}

CellKind parse_cell_kind(const std::string& name) {
    if (name == "lstm") {
        return CellKind::Lstm;
    }
    if (name == "gru") {
        return CellKind::Gru;
    }
    throw ConfigError("unknown cell kind '" + name + "' (expected lstm or gru)");
}

PredictMode parse_predict_mode(const std::string& name) {
    if (name == "per_particle") {
        return PredictMode::PerParticle;
    }
    if (name == "mean_state") {
        return PredictMode::MeanState;
    }
    throw ConfigError("unknown predict mode '" + name +
                      "' (expected per_particle or mean_state)");
}

} // namespace

ModelKind parse_model_kind(const std::string& name) {
    if (name == "naive") {
        return ModelKind::Naive;
    }
    if (name == "sx_only") {
        return ModelKind::SxOnly;
    }
    if (name == "rnn_only") {
        return ModelKind::RnnOnly;
    }
    if (name == "hybrid") {
        return ModelKind::Hybrid;
    }
    throw ConfigError("unknown model kind '" + name +
                      "' (expected naive, sx_only, rnn_only or hybrid)");
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Naive:
            return "naive";
        case ModelKind::SxOnly:
            return "sx_only";
        case ModelKind::RnnOnly:
            return "rnn_only";
        case ModelKind::Hybrid:
            return "hybrid";
    }
    throw ConfigError("invalid model kind");
}

PipelineConfig ExperimentConfig::pipeline_config() const {
    PipelineConfig p;
    p.model = model;
    p.rnn = rnn;
    p.sx = sx;
    p.noise = noise;
    p.filter = filter;
    p.init = init;
    p.lag_window = lag_window;
    p.passes = passes;
    return p;
}

ExperimentConfig parse_config_json(const json& j) {
    check_keys(j, "config",
               {"model", "cell", "sarimax", "noise", "filter", "init", "lag_window", "seed",
                "protocol", "data", "output", "models"});
    ExperimentConfig cfg;
    cfg.model = parse_model_kind(field_or<std::string>(j, "config", "model", "hybrid"));

    if (j.contains("cell")) {
        const json& c = j.at("cell");
        check_keys(c, "cell", {"kind", "hidden_size"});
        RnnSpec rnn;
        rnn.cell_kind = parse_cell_kind(field_or<std::string>(c, "cell", "kind", "lstm"));
        rnn.hidden_size = field_or<int>(c, "cell", "hidden_size", 1);
        cfg.rnn = rnn;
    }

    if (j.contains("sarimax")) {
        const json& s = j.at("sarimax");
        check_keys(s, "sarimax", {"p", "d", "q", "P", "D", "Q", "period"});
        cfg.sx.p = field_or<int>(s, "sarimax", "p", 0);
        cfg.sx.d = field_or<int>(s, "sarimax", "d", 0);
        cfg.sx.q = field_or<int>(s, "sarimax", "q", 0);
        cfg.sx.P = field_or<int>(s, "sarimax", "P", 0);
        cfg.sx.D = field_or<int>(s, "sarimax", "D", 0);
        cfg.sx.Q = field_or<int>(s, "sarimax", "Q", 0);
        cfg.sx.period = field_or<int>(s, "sarimax", "period", 1);
    }

    if (j.contains("noise")) {
        const json& n = j.at("noise");
        check_keys(n, "noise", {"sigma_c", "sigma_h", "sigma_theta", "sigma_sx", "sigma_y"});
        cfg.noise.sigma_c = field_or<double>(n, "noise", "sigma_c", cfg.noise.sigma_c);
        cfg.noise.sigma_h = field_or<double>(n, "noise", "sigma_h", cfg.noise.sigma_h);
        cfg.noise.sigma_theta = field_or<double>(n, "noise", "sigma_theta", cfg.noise.sigma_theta);
        cfg.noise.sigma_sx = field_or<double>(n, "noise", "sigma_sx", cfg.noise.sigma_sx);
        cfg.noise.sigma_y = field_or<double>(n, "noise", "sigma_y", cfg.noise.sigma_y);
    }

    if (j.contains("filter")) {
        const json& f = j.at("filter");
        check_keys(f, "filter",
                   {"particles", "resample_fraction", "resample_threshold", "threads",
                    "predict_mode"});
        cfg.filter.particle_count = field_or<int>(f, "filter", "particles", 500);
        if (f.contains("resample_fraction") && f.contains("resample_threshold")) {
            throw ConfigError(
                "filter: give either resample_fraction or resample_threshold, not both");
        }
        if (f.contains("resample_threshold")) {
            const int nt = field<int>(f, "filter", "resample_threshold");
            if (cfg.filter.particle_count < 1) {
                throw ConfigError("filter: particles must be positive");
            }
            cfg.filter.resample_fraction =
                static_cast<double>(nt) / static_cast<double>(cfg.filter.particle_count);
        } else {
            cfg.filter.resample_fraction =
                field_or<double>(f, "filter", "resample_fraction", 0.5);
        }
        cfg.filter.threads = field_or<int>(f, "filter", "threads", 1);
        cfg.filter.predict_mode = parse_predict_mode(
            field_or<std::string>(f, "filter", "predict_mode", "per_particle"));
    }

    if (j.contains("init")) {
        const json& i = j.at("init");
        check_keys(i, "init", {"weight_scale", "readout_scale", "sx_coeff_std"});
        cfg.init.weight_scale = field_or<double>(i, "init", "weight_scale", cfg.init.weight_scale);
        cfg.init.readout_scale =
            field_or<double>(i, "init", "readout_scale", cfg.init.readout_scale);
        cfg.init.sx_coeff_std = field_or<double>(i, "init", "sx_coeff_std", cfg.init.sx_coeff_std);
    }

    cfg.lag_window = field_or<int>(j, "config", "lag_window", 5);
    cfg.filter.seed = field_or<std::uint64_t>(j, "config", "seed", 0);

    if (j.contains("protocol")) {
        const json& p = j.at("protocol");
        check_keys(p, "protocol", {"mode", "passes", "horizon"});
        const std::string mode = field_or<std::string>(p, "protocol", "mode", "online");
        if (mode == "online") {
            cfg.protocol = ProtocolMode::Online;
        } else if (mode == "offline") {
            cfg.protocol = ProtocolMode::Offline;
        } else {
            throw ConfigError("protocol: unknown mode '" + mode + "'");
        }
        cfg.passes = field_or<int>(p, "protocol", "passes", 1);
        if (p.contains("horizon")) {
            cfg.horizon = field<int>(p, "protocol", "horizon");
        }
    }

    if (j.contains("data")) {
        const json& d = j.at("data");
        check_keys(d, "data",
                   {"path", "target_column", "exog_columns", "m4_train", "m4_test", "series_id"});
        const bool has_csv = d.contains("path");
        const bool has_m4 = d.contains("m4_train") || d.contains("m4_test");
        if (has_csv && has_m4) {
            throw ConfigError("data: give either a CSV source or an M4 pair, not both");
        }
        if (has_csv) {
            CsvSource src;
            src.path = field<std::string>(d, "data", "path");
            src.target_column = field_or<std::string>(d, "data", "target_column", "y");
            src.exog_columns =
                field_or<std::vector<std::string>>(d, "data", "exog_columns", {});
            cfg.csv = src;
        } else if (has_m4) {
            M4Source src;
            src.train_path = field<std::string>(d, "data", "m4_train");
            src.test_path = field<std::string>(d, "data", "m4_test");
            src.series_id = field<std::string>(d, "data", "series_id");
            cfg.m4 = src;
        } else {
            throw ConfigError("data: no source given");
        }
    }

    cfg.output = field_or<std::string>(j, "config", "output", "");

    if (j.contains("models")) {
        const auto names = field<std::vector<std::string>>(j, "config", "models");
        if (names.empty()) {
            throw ConfigError("models: list is empty");
        }
        for (const auto& name : names) {
            const ModelKind kind = parse_model_kind(name);
            for (ModelKind seen : cfg.bench_models) {
                if (seen == kind) {
                    throw ConfigError("models: duplicate entry '" + name + "'");
                }
            }
            cfg.bench_models.push_back(kind);
        }
    }

    // surface bad numbers before a run starts
    cfg.sx.validate();
    cfg.noise.validate();
    cfg.filter.validate();
    cfg.init.validate();
    if (cfg.rnn) {
        RnnSpec probe = *cfg.rnn;
        probe.input_size = 1; // real input width is data-derived
        probe.validate();
    }
    if (cfg.lag_window < 0) {
        throw ConfigError("lag_window must be non-negative");
    }
    if (cfg.passes < 1) {
        throw ConfigError("protocol: passes must be at least 1");
    }
    if (cfg.horizon && *cfg.horizon < 1) {
        throw ConfigError("protocol: horizon must be at least 1");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config_json(j);
}

json config_echo(const ExperimentConfig& cfg) {
    json j;
    j["model"] = model_kind_name(cfg.model);
    if (cfg.rnn) {
        j["cell"] = {{"kind", cfg.rnn->cell_kind == CellKind::Lstm ? "lstm" : "gru"},
                     {"hidden_size", cfg.rnn->hidden_size}};
    }
    j["sarimax"] = {{"p", cfg.sx.p}, {"d", cfg.sx.d}, {"q", cfg.sx.q},     {"P", cfg.sx.P},
                    {"D", cfg.sx.D}, {"Q", cfg.sx.Q}, {"period", cfg.sx.period}};
    j["noise"] = {{"sigma_c", cfg.noise.sigma_c},
                  {"sigma_h", cfg.noise.sigma_h},
                  {"sigma_theta", cfg.noise.sigma_theta},
                  {"sigma_sx", cfg.noise.sigma_sx},
                  {"sigma_y", cfg.noise.sigma_y}};
    j["filter"] = {{"particles", cfg.filter.particle_count},
                   {"resample_fraction", cfg.filter.resample_fraction},
                   {"threads", cfg.filter.threads},
                   {"predict_mode", cfg.filter.predict_mode == PredictMode::PerParticle
                                        ? "per_particle"
                                        : "mean_state"}};
    j["init"] = {{"weight_scale", cfg.init.weight_scale},
                 {"readout_scale", cfg.init.readout_scale},
                 {"sx_coeff_std", cfg.init.sx_coeff_std}};
    j["lag_window"] = cfg.lag_window;
    j["seed"] = cfg.filter.seed;
    json protocol = {{"mode", cfg.protocol == ProtocolMode::Online ? "online" : "offline"},
                     {"passes", cfg.passes}};
    if (cfg.horizon) {
        protocol["horizon"] = *cfg.horizon;
    }
    j["protocol"] = protocol;
    if (cfg.csv) {
        j["data"] = {{"path", cfg.csv->path},
                     {"target_column", cfg.csv->target_column},
                     {"exog_columns", cfg.csv->exog_columns}};
    } else if (cfg.m4) {
        j["data"] = {{"m4_train", cfg.m4->train_path},
                     {"m4_test", cfg.m4->test_path},
                     {"series_id", cfg.m4->series_id}};
    }
    if (!cfg.output.empty()) {
        j["output"] = cfg.output;
    }
    if (!cfg.bench_models.empty()) {
        json names = json::array();
        for (ModelKind kind : cfg.bench_models) {
            names.push_back(model_kind_name(kind));
        }
        j["models"] = names;
    }
    return j;
}

std::pair<Dataset, std::optional<Dataset>> load_experiment_data(const ExperimentConfig& cfg) {
    if (cfg.m4) {
        if (cfg.protocol != ProtocolMode::Offline) {
            throw ConfigError("M4 file pairs run with the offline protocol");
        }
        auto pair = load_m4_pair(cfg.m4->train_path, cfg.m4->test_path, cfg.m4->series_id);
        return {std::move(pair.first), std::move(pair.second)};
    }
    if (!cfg.csv) {
        throw ConfigError("config has no data source");
    }
    Dataset full = load_csv(cfg.csv->path, cfg.csv->target_column, cfg.csv->exog_columns);
    if (cfg.protocol == ProtocolMode::Online) {
        return {std::move(full), std::nullopt};
    }
    if (!cfg.horizon) {
        throw ConfigError("offline protocol on a CSV source needs a horizon");
    }
    const int H = *cfg.horizon;
    if (H >= full.size()) {
        throw ConfigError("horizon " + std::to_string(H) +
                          " leaves no training data (series length " +
                          std::to_string(full.size()) + ")");
    }
    const int T = full.size() - H;
    Dataset train;
    train.name = full.name + "_train";
    train.period_hint = full.period_hint;
    train.target.assign(full.target.begin(), full.target.begin() + T);
    train.exog = full.exog.topRows(T);
    Dataset test;
    test.name = full.name + "_test";
    test.period_hint = full.period_hint;
    test.target.assign(full.target.begin() + T, full.target.end());
    test.exog = full.exog.bottomRows(H);
    return {std::move(train), std::move(test)};
}

} // namespace hybridpf
