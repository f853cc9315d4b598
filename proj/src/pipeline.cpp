#include "hybridpf/pipeline.hpp"

#include "hybridpf/errors.hpp"

#include <cmath>
#include <string>

namespace hybridpf {

namespace {

Vector exog_row(const Dataset& d, int t) { return d.exog.row(t).transpose(); }

} // namespace

void OnlineStandardizer::update(double v) {
    if (pinned_std_) {
        return;
    }
    ++n_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (v - mean_);
}

double OnlineStandardizer::stddev() const {
    if (pinned_std_) {
        return *pinned_std_;
    }
    if (n_ == 0) {
        return 1e-8;
    }
    return std::max(std::sqrt(m2_ / static_cast<double>(n_)), 1e-8);
}

void OnlineStandardizer::set(double mean, double std) {
    mean_ = mean;
    pinned_std_ = std::max(std, 1e-8);
}

Pipeline::Pipeline(const PipelineConfig& config, int n_exog) : config_(config) {
    if (config.lag_window < 0) {
        throw ConfigError("lag window must be non-negative");
    }
    if (config.passes < 1) {
        throw ConfigError("pass count must be at least 1");
    }
    if (n_exog < 0) {
        throw ConfigError("exogenous width must be non-negative");
    }

    sx_ = config.sx;
    switch (config.model) {
        case ModelKind::Naive:
            sx_ = SarimaxSpec{};
            break;
        case ModelKind::SxOnly:
            sx_.n_exog = n_exog;
            break;
        case ModelKind::RnnOnly:
            // keep the differencing choice, drop every coefficient block
            sx_.p = sx_.q = sx_.P = sx_.Q = 0;
            sx_.n_exog = 0;
            break;
        case ModelKind::Hybrid:
            sx_.n_exog = n_exog;
            break;
    }
    sx_.validate();

    std::optional<RnnSpec> rnn_eff;
    if (config.model == ModelKind::RnnOnly || config.model == ModelKind::Hybrid) {
        if (!config.rnn) {
            throw ConfigError("this model kind needs a recurrent cell spec");
        }
        rnn_eff = *config.rnn;
        rnn_eff->input_size = n_exog + config.lag_window;
        rnn_eff->validate();
    }
    if (config.model != ModelKind::Naive) {
        layout_ = build_layout(rnn_eff, sx_);
        if (layout_.total_dim == 0) {
            throw ConfigError("model has no state to estimate; configure cell or linear orders");
        }
        filter_.emplace(layout_, config.filter, config.noise, config.init);
    }

    hist_ = HistoryBuffer(sx_.max_ar_lag());
    res_ = ResidualBuffer(sx_.max_ma_lag());
    target_lags_ = LagBuffer(config.lag_window);
    x_std_.resize(static_cast<std::size_t>(n_exog));
}

bool Pipeline::model_ready() const {
    const int need = sx_.d + sx_.D * sx_.period;
    return static_cast<int>(raw_history_.size()) >= need + 1;
}

Vector Pipeline::build_cell_input(const Vector& exog_std) const {
    Vector x(exog_std.size() + config_.lag_window);
    x.head(exog_std.size()) = exog_std;
    for (int i = 1; i <= config_.lag_window; ++i) {
        x(exog_std.size() + i - 1) = target_lags_.lag(i);
    }
    return x;
}

void Pipeline::observe(double y_raw) {
    if (!std::isfinite(y_raw)) {
        throw DataError("non-finite observation at step " + std::to_string(t_));
    }
    raw_history_.push_back(y_raw);

    if (config_.model != ModelKind::Naive && model_ready()) {
        const int n = static_cast<int>(raw_history_.size());
        const int m = sx_.period;
        double w = y_raw;
        if (sx_.d == 1) {
            w -= raw_history_[static_cast<std::size_t>(n - 2)];
        }
        if (sx_.D == 1) {
            w -= raw_history_[static_cast<std::size_t>(n - 1 - m)];
            if (sx_.d == 1) {
                w += raw_history_[static_cast<std::size_t>(n - 2 - m)];
            }
        }
        y_std_.update(w);
        const double z = y_std_.standardize(w);

        if (has_pending_ && pending_from_model_) {
            if (frozen_) {
                filter_->advance_frozen(pend_x_);
            } else {
                filter_->step(pend_x_, pend_r_, z);
            }
            record_step(res_, hist_, z, pend_zhat_);
        } else {
            // no prediction was formed for this step; keep lag alignment
            hist_.push(z);
            res_.push(0.0);
        }
        target_lags_.push(z);
    }

    has_pending_ = false;
    ++t_;
}

double Pipeline::predict_next(const Vector& exog_next) {
    if (raw_history_.empty()) {
        throw DataError("prediction requested before any observation");
    }
    if (has_pending_) {
        throw ConfigError("predict_next called twice without an intervening observation");
    }
    if (exog_next.size() != static_cast<Eigen::Index>(x_std_.size())) {
        throw ConfigError("expected " + std::to_string(x_std_.size()) +
                          " exogenous values, got " + std::to_string(exog_next.size()));
    }
    if (!exog_next.allFinite()) {
        throw DataError("non-finite exogenous input at step " + std::to_string(t_));
    }

    if (config_.model == ModelKind::Naive || !model_ready()) {
        has_pending_ = true;
        pending_from_model_ = false;
        return raw_history_.back();
    }

    Vector xz(exog_next.size());
    for (Eigen::Index j = 0; j < exog_next.size(); ++j) {
        x_std_[static_cast<std::size_t>(j)].update(exog_next(j));
        xz(j) = x_std_[static_cast<std::size_t>(j)].standardize(exog_next(j));
    }

    // the coefficient block sees only as many drivers as it carries betas
    // for (none for a cell-only model); the cell input always gets them all
    pend_r_ = build_regressor(hist_, res_, xz.head(sx_.n_exog), sx_);
    pend_x_ = build_cell_input(xz);
    pend_zhat_ = filter_->predict(pend_x_, pend_r_);
    has_pending_ = true;
    pending_from_model_ = true;

    const double w_hat = y_std_.invert(pend_zhat_);
    return undifference(w_hat, raw_history_, sx_.d, sx_.D, sx_.period);
}

void Pipeline::freeze() { frozen_ = true; }

void Pipeline::reset_stream() {
    raw_history_.clear();
    hist_ = HistoryBuffer(sx_.max_ar_lag());
    res_ = ResidualBuffer(sx_.max_ma_lag());
    target_lags_ = LagBuffer(config_.lag_window);
    has_pending_ = false;
    t_ = 0;
}

void Pipeline::pin_statistics(double y_mean, double y_std, const std::vector<double>& x_mean,
                              const std::vector<double>& x_std) {
    if (x_mean.size() != x_std_.size() || x_std.size() != x_std_.size()) {
        throw ConfigError("pinned statistics must cover every exogenous feature");
    }
    y_std_.set(y_mean, y_std);
    for (std::size_t j = 0; j < x_std_.size(); ++j) {
        x_std_[j].set(x_mean[j], x_std[j]);
    }
    stats_pinned_ = true;
}

std::vector<RunRecord> run_online(const Dataset& data, const PipelineConfig& config,
                                  const RecordSink& sink) {
    if (data.size() < 2) {
        throw DataError("online run needs a series of at least 2 values");
    }
    if (data.n_exog() > 0 && data.exog.rows() != data.size()) {
        throw DataError("exogenous rows do not align with the target length");
    }
    Pipeline pipe(config, data.n_exog());
    std::vector<RunRecord> records;
    records.reserve(static_cast<std::size_t>(data.size() - 1));
    double sse = 0.0;
    double pending = 0.0;
    bool have_pred = false;
    for (int t = 0; t < data.size(); ++t) {
        const double y = data.target[static_cast<std::size_t>(t)];
        pipe.observe(y);
        if (have_pred) {
            const double err = y - pending;
            sse += err * err;
            RunRecord rec;
            rec.t = t;
            rec.y = y;
            rec.y_hat = pending;
            rec.cum_mse = sse / static_cast<double>(records.size() + 1);
            records.push_back(rec);
            if (sink) {
                sink(rec);
            }
        }
        if (t + 1 < data.size()) {
            pending = pipe.predict_next(exog_row(data, t + 1));
            have_pred = true;
        }
    }
    return records;
}

OfflineResult run_offline(const Dataset& train, const Dataset& test,
                          const PipelineConfig& config, const RecordSink& sink) {
    if (train.size() < 1) {
        throw DataError("training series is empty");
    }
    if (test.size() < 1) {
        throw DataError("test series is empty");
    }
    if (train.n_exog() != test.n_exog()) {
        throw ConfigError("train and test disagree on exogenous width");
    }

    Pipeline pipe(config, train.n_exog());

    if (config.model != ModelKind::Naive) {
        const int d = config.sx.d;
        const int D = config.sx.D;
        const int m = config.sx.period;
        const std::vector<double> w =
            (d == 0 && D == 0) ? train.target : difference(train.target, d, D, m);
        OnlineStandardizer ys;
        for (double v : w) {
            ys.update(v);
        }
        std::vector<double> xm(static_cast<std::size_t>(train.n_exog()));
        std::vector<double> xs(static_cast<std::size_t>(train.n_exog()));
        for (int j = 0; j < train.n_exog(); ++j) {
            OnlineStandardizer s;
            for (int t = 0; t < train.size(); ++t) {
                s.update(train.exog(t, j));
            }
            xm[static_cast<std::size_t>(j)] = s.mean();
            xs[static_cast<std::size_t>(j)] = s.stddev();
        }
        pipe.pin_statistics(ys.mean(), ys.stddev(), xm, xs);
    }

    for (int pass = 0; pass < config.passes; ++pass) {
        pipe.reset_stream();
        for (int t = 0; t < train.size(); ++t) {
            pipe.observe(train.target[static_cast<std::size_t>(t)]);
            if (t + 1 < train.size()) {
                pipe.predict_next(exog_row(train, t + 1));
            }
        }
    }

    pipe.freeze();
    OfflineResult out;
    out.records.reserve(static_cast<std::size_t>(test.size()));
    std::vector<double> truth;
    std::vector<double> preds;
    double sse = 0.0;
    for (int h = 0; h < test.size(); ++h) {
        const double y_hat = pipe.predict_next(exog_row(test, h));
        const double y = test.target[static_cast<std::size_t>(h)];
        pipe.observe(y);
        truth.push_back(y);
        preds.push_back(y_hat);
        const double err = y - y_hat;
        sse += err * err;
        RunRecord rec;
        rec.t = h;
        rec.y = y;
        rec.y_hat = y_hat;
        rec.cum_mse = sse / static_cast<double>(h + 1);
        out.records.push_back(rec);
        if (sink) {
            sink(rec);
        }
    }
    out.mape = mape(truth, preds);
    return out;
}

std::vector<double> cum_mse(const std::vector<double>& y, const std::vector<double>& y_hat) {
    if (y.size() != y_hat.size()) {
        throw ConfigError("cumulative MSE needs sequences of equal length");
    }
    if (y.empty()) {
        throw ConfigError("cumulative MSE needs at least one value");
    }
    std::vector<double> out(y.size());
    double sse = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double err = y[t] - y_hat[t];
        sse += err * err;
        out[t] = sse / static_cast<double>(t + 1);
    }
    return out;
}

double mape(const std::vector<double>& y, const std::vector<double>& y_hat) {
    if (y.size() != y_hat.size()) {
        throw ConfigError("MAPE needs sequences of equal length");
    }
    if (y.empty()) {
        throw ConfigError("MAPE needs at least one value");
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        if (y[t] == 0.0) {
            throw DataError("ground-truth value at position " + std::to_string(t) +
                            " is zero; percentage error undefined");
        }
        acc += std::abs(y[t] - y_hat[t]) / std::abs(y[t]);
    }
    return acc / static_cast<double>(y.size());
}

double naive_predict(const std::vector<double>& history) {
    if (history.empty()) {
        throw DataError("cannot predict from an empty history");
    }
    return history.back();
}

} // namespace hybridpf
