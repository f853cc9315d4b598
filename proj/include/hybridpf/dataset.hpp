#pragma once

#include "hybridpf/model_spec.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hybridpf {

/// One target series with optional exogenous features, aligned by row.
struct Dataset {
    std::string name;
    std::vector<double> target;
    Matrix exog; // T x n_exog, zero columns when the series has no drivers
    std::optional<int> period_hint;

    int size() const { return static_cast<int>(target.size()); }
    int n_exog() const { return static_cast<int>(exog.cols()); }
};

/// Reads a headered CSV. Parsing is strict: every referenced cell must be a
/// finite number, and failures report the 1-based row.
Dataset load_csv(const std::string& path, const std::string& target_column,
                 const std::vector<std::string>& exog_columns);

/// Reads one series out of a ragged-row competition file pair (first cell the
/// series id, remaining cells values, rows padded unevenly). Returns the
/// train and test splits for the id.
std::pair<Dataset, Dataset> load_m4_pair(const std::string& train_path,
                                         const std::string& test_path,
                                         const std::string& series_id);

/// Generator coefficients; vector lengths must match the corresponding orders
/// in the SarimaxSpec.
struct SynthCoeffs {
    std::vector<double> phi;
    std::vector<double> theta;
    std::vector<double> seasonal_phi;
    std::vector<double> seasonal_theta;
    std::vector<double> beta;
};

struct SynthResult {
    Dataset data;
    /// True one-step conditional means E[w_t | past], on the differenced
    /// scale when d or D is nonzero. Predicting with these achieves MSE of
    /// about noise_sigma^2, which makes them a generator-side oracle.
    std::vector<double> conditional_mean;
};

/// Simulates the linear model forward: each differenced value is the sum of
/// AR/seasonal-AR lags, MA/seasonal-MA shocks, exogenous terms, and a fresh
/// Gaussian shock. Rejects coefficient sets whose AR polynomial is unstable.
SynthResult synth_sarimax(const SarimaxSpec& spec, const SynthCoeffs& coeffs,
                          double noise_sigma, int T, std::uint64_t seed);

/// Seasonal linear recursion plus a smooth nonlinear function of lagged
/// drivers plus noise; the two drivers are shipped as exogenous features.
/// Construction:
///   x1_t = sin(2 pi t / m + a),  x2_t = sin(2 pi t / (3.17 m) + b)
///   lin_t = 0.5 lin_{t-1} + 0.3 lin_{t-m} + x1_t
///   nonlin_t = 0.8 tanh(2 x1_{t-1} x2_{t-1}) + 0.4 x2_{t-1}^2
///   y_t = lin_t + nonlin_t + noise_sigma * xi_t
/// with phases a, b drawn once from the seed. Requires T > 4m.
Dataset synth_hybrid(int T, int m, std::uint64_t seed, double noise_sigma = 0.1);

} // namespace hybridpf
