#pragma once

// Independent scalar-loop evaluations of the recurrent cells, written against
// the packed parameter layout directly (per gate: row-major k x (k+l) weight
// matrix, then bias; readout last). Used as oracles for the vectorized
// implementations; deliberately free of Eigen.

#include <cmath>
#include <vector>

namespace oracle {

inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

/// a[i] = b_g[i] + sum_j W_g[i][j] * z[j] for gate `gate`.
inline std::vector<double> gate_preact(const double* theta, int k, int cols, int gate,
                                       const std::vector<double>& z) {
    const int block = k * cols + k;
    const double* w = theta + gate * block;
    const double* b = w + k * cols;
    std::vector<double> a(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        double acc = b[i];
        for (int j = 0; j < cols; ++j) {
            acc += w[i * cols + j] * z[static_cast<std::size_t>(j)];
        }
        a[static_cast<std::size_t>(i)] = acc;
    }
    return a;
}

struct CellOut {
    std::vector<double> c;
    std::vector<double> h;
};

inline CellOut lstm_reference(const double* theta, int k, int l, const std::vector<double>& x,
                              const std::vector<double>& c_prev,
                              const std::vector<double>& h_prev) {
    const int cols = k + l;
    std::vector<double> z(h_prev);
    z.insert(z.end(), x.begin(), x.end());
    const auto f = gate_preact(theta, k, cols, 0, z);
    const auto i = gate_preact(theta, k, cols, 1, z);
    const auto g = gate_preact(theta, k, cols, 2, z);
    const auto o = gate_preact(theta, k, cols, 3, z);
    CellOut out;
    out.c.resize(static_cast<std::size_t>(k));
    out.h.resize(static_cast<std::size_t>(k));
    for (int u = 0; u < k; ++u) {
        const auto s = static_cast<std::size_t>(u);
        out.c[s] = sigmoid(f[s]) * c_prev[s] + sigmoid(i[s]) * std::tanh(g[s]);
        out.h[s] = sigmoid(o[s]) * std::tanh(out.c[s]);
    }
    return out;
}

inline std::vector<double> gru_reference(const double* theta, int k, int l,
                                         const std::vector<double>& x,
                                         const std::vector<double>& h_prev) {
    const int cols = k + l;
    std::vector<double> z(h_prev);
    z.insert(z.end(), x.begin(), x.end());
    const auto upd = gate_preact(theta, k, cols, 0, z);
    const auto rst = gate_preact(theta, k, cols, 1, z);
    std::vector<double> zr(static_cast<std::size_t>(cols));
    for (int u = 0; u < k; ++u) {
        const auto s = static_cast<std::size_t>(u);
        zr[s] = sigmoid(rst[s]) * h_prev[s];
    }
    for (int j = 0; j < l; ++j) {
        zr[static_cast<std::size_t>(k + j)] = x[static_cast<std::size_t>(j)];
    }
    const auto cand = gate_preact(theta, k, cols, 2, zr);
    std::vector<double> h(static_cast<std::size_t>(k));
    for (int u = 0; u < k; ++u) {
        const auto s = static_cast<std::size_t>(u);
        const double zg = sigmoid(upd[s]);
        h[s] = (1.0 - zg) * h_prev[s] + zg * std::tanh(cand[s]);
    }
    return h;
}

} // namespace oracle
