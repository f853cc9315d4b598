#pragma once

#include "hybridpf/model_spec.hpp"

#include <vector>

namespace hybridpf {

/// Fixed-capacity ring of recent scalar values with newest-first lag access.
/// Lags beyond what has been observed so far read as 0, which keeps the
/// regressor well-defined during warm-up.
class LagBuffer {
public:
    LagBuffer() = default; // capacity 0: pushes are dropped, lags read 0
    explicit LagBuffer(int capacity);

    void push(double value);

    /// Value `lag` steps back (lag >= 1); 0 when outside capacity or not
    /// yet filled.
    double lag(int lag) const;

    int size() const { return filled_; }
    int capacity() const { return static_cast<int>(values_.size()); }

private:
    std::vector<double> values_;
    int head_ = 0;   // slot of the most recent value
    int filled_ = 0; // number of valid entries
};

/// Past differenced targets, deep enough for the largest AR lag.
using HistoryBuffer = LagBuffer;

/// Past estimated shocks eps_hat = y - y_hat, deep enough for the largest
/// MA lag.
using ResidualBuffer = LagBuffer;

/// Applies (1-B)^d then (1-B^m)^D to the series. Output length shrinks by
/// d + D*m. Only d, D in {0, 1} are supported.
std::vector<double> difference(const std::vector<double>& series, int d, int D, int m);

/// Inverts differencing for a single predicted value, using the raw (not
/// differenced) history up to the step before the prediction. Exact inverse
/// of `difference` for supported orders.
double undifference(double pred, const std::vector<double>& raw_history, int d, int D, int m);

/// Assembles the known regressor vector for the SARIMAX measurement:
/// [y lags 1..p, y lags m..mP, eps lags 1..q, eps lags m..mQ, exog].
Vector build_regressor(const HistoryBuffer& hist, const ResidualBuffer& res,
                       const Vector& exog, const SarimaxSpec& spec);

/// Pushes an observed target into the history and its prediction residual
/// into the shock buffer.
void record_step(ResidualBuffer& res, HistoryBuffer& hist, double y, double y_hat);

} // namespace hybridpf
