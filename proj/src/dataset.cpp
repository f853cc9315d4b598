#include "hybridpf/dataset.hpp"

#include "hybridpf/errors.hpp"
#include "hybridpf/state_space.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hybridpf {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r\"");
    return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& raw, int row, const std::string& path) {
    const std::string cell = trim(raw);
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || cell.empty()) {
        throw DataError(path + ": row " + std::to_string(row) + ": cannot parse '" + raw +
                        "' as a number");
    }
    if (!std::isfinite(value)) {
        throw DataError(path + ": row " + std::to_string(row) + ": non-finite value '" + raw +
                        "'");
    }
    return value;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open file: " + path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    return lines;
}

Dataset load_m4_series(const std::string& path, const std::string& series_id) {
    const auto lines = read_lines(path);
    for (std::size_t row = 0; row < lines.size(); ++row) {
        if (lines[row].empty()) {
            continue;
        }
        const auto fields = split_fields(lines[row]);
        if (fields.empty() || trim(fields[0]) != series_id) {
            continue;
        }
        std::vector<double> values;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            if (trim(fields[j]).empty()) {
                break; // ragged padding
            }
            values.push_back(parse_cell(fields[j], static_cast<int>(row + 1), path));
        }
        if (values.empty()) {
            throw DataError(path + ": row " + std::to_string(row + 1) + ": series '" +
                            series_id + "' has no values");
        }
        Dataset d;
        d.name = series_id;
        d.target = std::move(values);
        d.exog = Matrix(d.target.size(), 0);
        return d;
    }
    throw DataError(path + ": series id '" + series_id + "' not found");
}

/// Largest eigenvalue modulus of the companion matrix of
/// 1 - a_1 B - ... - a_L B^L; < 1 means a stable AR recursion.
double max_ar_root_modulus(const std::vector<double>& a) {
    const int L = static_cast<int>(a.size());
    if (L == 0) {
        return 0.0;
    }
    Matrix companion = Matrix::Zero(L, L);
    for (int j = 0; j < L; ++j) {
        companion(0, j) = a[static_cast<std::size_t>(j)];
    }
    for (int j = 1; j < L; ++j) {
        companion(j, j - 1) = 1.0;
    }
    const auto eigenvalues = Eigen::EigenSolver<Matrix>(companion, false).eigenvalues();
    double max_mod = 0.0;
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
        max_mod = std::max(max_mod, std::abs(eigenvalues(j)));
    }
    return max_mod;
}

void check_sizes(const SarimaxSpec& spec, const SynthCoeffs& coeffs) {
    auto need = [](const std::vector<double>& v, int n, const char* what) {
        if (static_cast<int>(v.size()) != n) {
            throw ConfigError(std::string("generator expects ") + std::to_string(n) + " " +
                              what + " coefficients, got " + std::to_string(v.size()));
        }
    };
    need(coeffs.phi, spec.p, "AR");
    need(coeffs.theta, spec.q, "MA");
    need(coeffs.seasonal_phi, spec.P, "seasonal AR");
    need(coeffs.seasonal_theta, spec.Q, "seasonal MA");
    need(coeffs.beta, spec.n_exog, "exogenous");
}

} // namespace

Dataset load_csv(const std::string& path, const std::string& target_column,
                 const std::vector<std::string>& exog_columns) {
    const auto lines = read_lines(path);
    if (lines.empty()) {
        throw DataError(path + ": file is empty");
    }
    const auto header = split_fields(lines[0]);
    auto column_index = [&](const std::string& name) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (trim(header[j]) == name) {
                return static_cast<int>(j);
            }
        }
        throw DataError(path + ": column '" + name + "' not found in header");
    };
    const int target_idx = column_index(target_column);
    std::vector<int> exog_idx;
    exog_idx.reserve(exog_columns.size());
    for (const auto& name : exog_columns) {
        exog_idx.push_back(column_index(name));
    }

    Dataset d;
    d.name = path;
    std::vector<std::vector<double>> exog_rows;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        if (lines[row].empty()) {
            continue;
        }
        const auto fields = split_fields(lines[row]);
        if (fields.size() != header.size()) {
            throw DataError(path + ": row " + std::to_string(row + 1) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        const int row_no = static_cast<int>(row + 1);
        d.target.push_back(parse_cell(fields[static_cast<std::size_t>(target_idx)], row_no, path));
        std::vector<double> xr;
        xr.reserve(exog_idx.size());
        for (int j : exog_idx) {
            xr.push_back(parse_cell(fields[static_cast<std::size_t>(j)], row_no, path));
        }
        exog_rows.push_back(std::move(xr));
    }
    if (d.target.empty()) {
        throw DataError(path + ": no data rows");
    }
    d.exog = Matrix(static_cast<Eigen::Index>(d.target.size()),
                    static_cast<Eigen::Index>(exog_columns.size()));
    for (std::size_t i = 0; i < exog_rows.size(); ++i) {
        for (std::size_t j = 0; j < exog_rows[i].size(); ++j) {
            d.exog(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = exog_rows[i][j];
        }
    }
    return d;
}

std::pair<Dataset, Dataset> load_m4_pair(const std::string& train_path,
                                         const std::string& test_path,
                                         const std::string& series_id) {
    Dataset train = load_m4_series(train_path, series_id);
    Dataset test = load_m4_series(test_path, series_id);
    train.name = series_id + "_train";
    test.name = series_id + "_test";
    return {std::move(train), std::move(test)};
}

SynthResult synth_sarimax(const SarimaxSpec& spec, const SynthCoeffs& coeffs,
                          double noise_sigma, int T, std::uint64_t seed) {
    spec.validate();
    check_sizes(spec, coeffs);
    if (T < 1) {
        throw ConfigError("generator length must be positive");
    }
    if (!(noise_sigma >= 0.0)) {
        throw ConfigError("noise sigma must be non-negative");
    }

    const int m = spec.period;
    const int L = std::max(spec.p, spec.P > 0 ? spec.P * m : 0);
    std::vector<double> a(static_cast<std::size_t>(L), 0.0);
    for (int j = 1; j <= spec.p; ++j) {
        a[static_cast<std::size_t>(j - 1)] += coeffs.phi[static_cast<std::size_t>(j - 1)];
    }
    for (int j = 1; j <= spec.P; ++j) {
        a[static_cast<std::size_t>(j * m - 1)] += coeffs.seasonal_phi[static_cast<std::size_t>(j - 1)];
    }
    const double root = max_ar_root_modulus(a);
    if (root >= 1.0) {
        throw ConfigError("autoregressive coefficients are unstable (largest root modulus " +
                          std::to_string(root) + " >= 1)");
    }

    RngStream rng(seed, 0);
    std::vector<double> w(static_cast<std::size_t>(T), 0.0);
    std::vector<double> eps(static_cast<std::size_t>(T), 0.0);
    std::vector<double> mean(static_cast<std::size_t>(T), 0.0);
    Matrix exog(T, spec.n_exog);
    auto w_at = [&](int t) { return t >= 0 ? w[static_cast<std::size_t>(t)] : 0.0; };
    auto eps_at = [&](int t) { return t >= 0 ? eps[static_cast<std::size_t>(t)] : 0.0; };

    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < spec.n_exog; ++j) {
            exog(t, j) = rng.normal();
        }
        double mu = 0.0;
        for (int j = 1; j <= spec.p; ++j) {
            mu += coeffs.phi[static_cast<std::size_t>(j - 1)] * w_at(t - j);
        }
        for (int j = 1; j <= spec.P; ++j) {
            mu += coeffs.seasonal_phi[static_cast<std::size_t>(j - 1)] * w_at(t - j * m);
        }
        for (int j = 1; j <= spec.q; ++j) {
            mu += coeffs.theta[static_cast<std::size_t>(j - 1)] * eps_at(t - j);
        }
        for (int j = 1; j <= spec.Q; ++j) {
            mu += coeffs.seasonal_theta[static_cast<std::size_t>(j - 1)] * eps_at(t - j * m);
        }
        for (int j = 0; j < spec.n_exog; ++j) {
            mu += coeffs.beta[static_cast<std::size_t>(j)] * exog(t, j);
        }
        eps[static_cast<std::size_t>(t)] = noise_sigma * rng.normal();
        mean[static_cast<std::size_t>(t)] = mu;
        w[static_cast<std::size_t>(t)] = mu + eps[static_cast<std::size_t>(t)];
    }

    // Integrate the differencing back out (zero pre-sample values).
    std::vector<double> y = w;
    if (spec.d == 1 || spec.D == 1) {
        auto y_at = [&](int t) { return t >= 0 ? y[static_cast<std::size_t>(t)] : 0.0; };
        for (int t = 0; t < T; ++t) {
            double v = w[static_cast<std::size_t>(t)];
            if (spec.d == 1) {
                v += y_at(t - 1);
            }
            if (spec.D == 1) {
                v += y_at(t - m);
                if (spec.d == 1) {
                    v -= y_at(t - m - 1);
                }
            }
            y[static_cast<std::size_t>(t)] = v;
        }
    }

    SynthResult out;
    out.data.name = "synth_sarimax";
    out.data.target = std::move(y);
    out.data.exog = std::move(exog);
    if (spec.P > 0 || spec.Q > 0 || spec.D > 0) {
        out.data.period_hint = m;
    }
    out.conditional_mean = std::move(mean);
    return out;
}

Dataset synth_hybrid(int T, int m, std::uint64_t seed, double noise_sigma) {
    if (m < 1) {
        throw ConfigError("seasonal period must be >= 1");
    }
    if (T <= 4 * m) {
        throw ConfigError("series length must exceed four periods");
    }
    if (!(noise_sigma >= 0.0)) {
        throw ConfigError("noise sigma must be non-negative");
    }
    RngStream rng(seed, 0);
    const double phase1 = 2.0 * M_PI * rng.uniform();
    const double phase2 = 2.0 * M_PI * rng.uniform();

    Dataset d;
    d.name = "synth_hybrid";
    d.period_hint = m;
    d.target.resize(static_cast<std::size_t>(T));
    d.exog = Matrix(T, 2);

    std::vector<double> lin(static_cast<std::size_t>(T), 0.0);
    auto lin_at = [&](int t) { return t >= 0 ? lin[static_cast<std::size_t>(t)] : 0.0; };
    auto x1 = [&](int t) { return std::sin(2.0 * M_PI * t / m + phase1); };
    auto x2 = [&](int t) { return std::sin(2.0 * M_PI * t / (3.17 * m) + phase2); };

    for (int t = 0; t < T; ++t) {
        d.exog(t, 0) = x1(t);
        d.exog(t, 1) = x2(t);
        lin[static_cast<std::size_t>(t)] = 0.5 * lin_at(t - 1) + 0.3 * lin_at(t - m) + x1(t);
        const double x1_prev = t >= 1 ? x1(t - 1) : 0.0;
        const double x2_prev = t >= 1 ? x2(t - 1) : 0.0;
        const double nonlin = 0.8 * std::tanh(2.0 * x1_prev * x2_prev) + 0.4 * x2_prev * x2_prev;
        d.target[static_cast<std::size_t>(t)] =
            lin[static_cast<std::size_t>(t)] + nonlin + noise_sigma * rng.normal();
    }
    return d;
}

} // namespace hybridpf
