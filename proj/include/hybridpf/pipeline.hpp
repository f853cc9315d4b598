#pragma once

#include "hybridpf/dataset.hpp"
#include "hybridpf/particle_filter.hpp"
#include "hybridpf/sarimax.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace hybridpf {

/// Streaming mean/std tracker (Welford). Matches batch statistics of the
/// values seen so far to 1e-10; population std, floored at 1e-8 so
/// standardizing a constant series stays finite.
class OnlineStandardizer {
public:
    void update(double v);
    double standardize(double v) const { return (v - mean_) / stddev(); }
    double invert(double z) const { return z * stddev() + mean_; }

    double mean() const { return mean_; }
    double stddev() const;
    long count() const { return n_; }

    /// Pins the statistics (used when a training split provides them).
    void set(double mean, double std);

private:
    long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    std::optional<double> pinned_std_;
};

struct RunRecord {
    int t = 0;          // position of the observed value in its stream
    double y = 0.0;     // raw-scale truth
    double y_hat = 0.0; // raw-scale prediction made one step earlier
    double cum_mse = 0.0;
};

enum class ModelKind { Naive, SxOnly, RnnOnly, Hybrid };

struct PipelineConfig {
    ModelKind model = ModelKind::Hybrid;
    /// Cell shape for RnnOnly/Hybrid. input_size is derived from the data
    /// (exogenous width plus lag window), so only cell_kind and hidden_size
    /// are read from here.
    std::optional<RnnSpec> rnn;
    SarimaxSpec sx;
    NoiseSpec noise;
    FilterConfig filter;
    InitSpec init;
    /// Number of lagged standardized targets appended to the cell input.
    int lag_window = 5;
    /// Training passes over the series in the offline protocol.
    int passes = 1;
};

/// One model instance bound to one stream. Call order per step: observe the
/// next target value, then (optionally) ask for a prediction of the step
/// after, handing in that step's exogenous row. Predictions are returned on
/// the raw scale; internally the stream is differenced and standardized
/// cumulatively, and every prediction is inverted back.
class Pipeline {
public:
    Pipeline(const PipelineConfig& config, int n_exog);

    /// Ingests the next target value. Runs one filter step against the
    /// inputs stashed by the previous predict_next call, records the
    /// residual, and refreshes lag state.
    void observe(double y_raw);

    /// One-step-ahead raw-scale prediction, given the next step's exogenous
    /// row. Must be preceded by at least one observation.
    double predict_next(const Vector& exog_next);

    /// Stops parameter updates: subsequent observations only advance the
    /// recurrent state deterministically and refresh buffers.
    void freeze();

    /// Rewinds the stream position (buffers, differencing history, lag
    /// windows) without touching the ensemble, for repeated-stream passes.
    void reset_stream();

    /// Pins standardization to externally computed statistics and stops
    /// cumulative updates (offline protocol).
    void pin_statistics(double y_mean, double y_std, const std::vector<double>& x_mean,
                        const std::vector<double>& x_std);

    const ParticleFilter* filter() const { return filter_ ? &*filter_ : nullptr; }
    ParticleFilter* filter() { return filter_ ? &*filter_ : nullptr; }
    const StateLayout& layout() const { return layout_; }
    int steps_observed() const { return t_; }

private:
    bool model_ready() const;
    Vector build_cell_input(const Vector& exog_std) const;

    PipelineConfig config_;
    SarimaxSpec sx_;                   // effective orders for this model kind
    StateLayout layout_;
    std::optional<ParticleFilter> filter_;

    OnlineStandardizer y_std_;
    std::vector<OnlineStandardizer> x_std_;
    bool stats_pinned_ = false;
    bool frozen_ = false;

    std::vector<double> raw_history_;
    HistoryBuffer hist_;
    ResidualBuffer res_;
    LagBuffer target_lags_;

    bool has_pending_ = false;
    bool pending_from_model_ = false;
    Vector pend_x_;
    Vector pend_r_;
    double pend_zhat_ = 0.0;

    int t_ = 0;
};

/// Called with each record as it is produced, so traces can stream.
using RecordSink = std::function<void(const RunRecord&)>;

/// Streams the whole series through one model: observe, then predict the
/// next value. Returns one record per predicted step (series length - 1).
std::vector<RunRecord> run_online(const Dataset& data, const PipelineConfig& config,
                                  const RecordSink& sink = {});

struct OfflineResult {
    double mape = 0.0;
    std::vector<RunRecord> records;
};

/// Offline protocol: pin standardization to training statistics, stream the
/// training series `passes` times, freeze, then predict each test value
/// one step ahead with true past test values revealed as the horizon
/// advances.
OfflineResult run_offline(const Dataset& train, const Dataset& test,
                          const PipelineConfig& config, const RecordSink& sink = {});

/// Element t is the mean of the squared errors over steps 0..t.
std::vector<double> cum_mse(const std::vector<double>& y, const std::vector<double>& y_hat);

/// Mean absolute percentage error; any zero ground-truth element is an error.
double mape(const std::vector<double>& y, const std::vector<double>& y_hat);

/// Last observed value.
double naive_predict(const std::vector<double>& history);

} // namespace hybridpf
