#include "hybridpf/sarimax.hpp"

#include "hybridpf/errors.hpp"

#include <string>

namespace hybridpf {

LagBuffer::LagBuffer(int capacity) {
    if (capacity < 0) {
        throw ConfigError("lag buffer capacity must be non-negative, got " +
                          std::to_string(capacity));
    }
    values_.assign(static_cast<std::size_t>(capacity), 0.0);
}

void LagBuffer::push(double value) {
    if (values_.empty()) {
        return;
    }
    head_ = (head_ + 1) % static_cast<int>(values_.size());
    values_[static_cast<std::size_t>(head_)] = value;
    if (filled_ < static_cast<int>(values_.size())) {
        ++filled_;
    }
}

double LagBuffer::lag(int lag) const {
    if (lag < 1) {
        throw ConfigError("lag index must be >= 1, got " + std::to_string(lag));
    }
    if (lag > filled_) {
        return 0.0;
    }
    const int n = static_cast<int>(values_.size());
    const int idx = ((head_ - (lag - 1)) % n + n) % n;
    return values_[static_cast<std::size_t>(idx)];
}

std::vector<double> difference(const std::vector<double>& series, int d, int D, int m) {
    if (d < 0 || d > 1 || D < 0 || D > 1) {
        throw ConfigError("difference orders d and D must be 0 or 1");
    }
    if (D > 0 && m < 1) {
        throw ConfigError("seasonal differencing requires period m >= 1");
    }
    const int drop = d + D * m;
    const int n = static_cast<int>(series.size());
    if (n < drop + 1) {
        throw DataError("series of length " + std::to_string(n) +
                        " too short for differencing (needs > " + std::to_string(drop) + ")");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n - drop));
    for (int t = drop; t < n; ++t) {
        double w = series[static_cast<std::size_t>(t)];
        if (d == 1) {
            w -= series[static_cast<std::size_t>(t - 1)];
        }
        if (D == 1) {
            w -= series[static_cast<std::size_t>(t - m)];
            if (d == 1) {
                w += series[static_cast<std::size_t>(t - m - 1)];
            }
        }
        out.push_back(w);
    }
    return out;
}

double undifference(double pred, const std::vector<double>& raw_history, int d, int D, int m) {
    if (d < 0 || d > 1 || D < 0 || D > 1) {
        throw ConfigError("difference orders d and D must be 0 or 1");
    }
    if (D > 0 && m < 1) {
        throw ConfigError("seasonal undifferencing requires period m >= 1");
    }
    const int need = d + D * m;
    const int n = static_cast<int>(raw_history.size());
    if (n < need) {
        throw DataError("raw history of length " + std::to_string(n) +
                        " too short to invert differencing (needs " +
                        std::to_string(need) + ")");
    }
    double y = pred;
    if (d == 1) {
        y += raw_history[static_cast<std::size_t>(n - 1)];
    }
    if (D == 1) {
        y += raw_history[static_cast<std::size_t>(n - m)];
        if (d == 1) {
            y -= raw_history[static_cast<std::size_t>(n - m - 1)];
        }
    }
    return y;
}

Vector build_regressor(const HistoryBuffer& hist, const ResidualBuffer& res,
                       const Vector& exog, const SarimaxSpec& spec) {
    if (exog.size() != spec.n_exog) {
        throw ConfigError("regressor expected " + std::to_string(spec.n_exog) +
                          " exogenous values, got " + std::to_string(exog.size()));
    }
    Vector r(spec.state_dim());
    Eigen::Index k = 0;
    for (int j = 1; j <= spec.p; ++j) {
        r(k++) = hist.lag(j);
    }
    for (int j = 1; j <= spec.P; ++j) {
        r(k++) = hist.lag(j * spec.period);
    }
    for (int j = 1; j <= spec.q; ++j) {
        r(k++) = res.lag(j);
    }
    for (int j = 1; j <= spec.Q; ++j) {
        r(k++) = res.lag(j * spec.period);
    }
    for (int j = 0; j < spec.n_exog; ++j) {
        r(k++) = exog(j);
    }
    return r;
}

void record_step(ResidualBuffer& res, HistoryBuffer& hist, double y, double y_hat) {
    hist.push(y);
    res.push(y - y_hat);
}

} // namespace hybridpf
