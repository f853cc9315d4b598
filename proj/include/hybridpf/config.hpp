#pragma once

#include "hybridpf/dataset.hpp"
#include "hybridpf/pipeline.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hybridpf {

enum class ProtocolMode { Online, Offline };

struct CsvSource {
    std::string path;
    std::string target_column;
    std::vector<std::string> exog_columns;
};

struct M4Source {
    std::string train_path;
    std::string test_path;
    std::string series_id;
};

/// Full experiment description as read from a config file. Every field is
/// validated before a run starts; unknown keys are rejected where they
/// appear so typos fail loudly.
struct ExperimentConfig {
    ModelKind model = ModelKind::Hybrid;
    std::optional<RnnSpec> rnn; // cell kind and hidden size; input width is data-derived
    SarimaxSpec sx;
    NoiseSpec noise;
    FilterConfig filter;
    InitSpec init;
    int lag_window = 5;

    ProtocolMode protocol = ProtocolMode::Online;
    int passes = 1;
    std::optional<int> horizon; // offline split of a single CSV series

    std::optional<CsvSource> csv;
    std::optional<M4Source> m4;
    std::string output; // trace path; empty writes to stdout

    /// Model list for comparison runs; empty outside bench configs.
    std::vector<ModelKind> bench_models;

    PipelineConfig pipeline_config() const;
};

ModelKind parse_model_kind(const std::string& name);
std::string model_kind_name(ModelKind kind);

ExperimentConfig parse_config_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Round-trips the configuration into the trace summary so a run can be
/// reproduced from its output alone.
nlohmann::json config_echo(const ExperimentConfig& cfg);

/// Loads the dataset(s) the config points at: online yields one series,
/// offline yields a train/test pair (from an M4 file pair or by splitting
/// the last `horizon` values off a CSV series).
std::pair<Dataset, std::optional<Dataset>> load_experiment_data(const ExperimentConfig& cfg);

} // namespace hybridpf
