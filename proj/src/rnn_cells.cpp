#include "hybridpf/rnn_cells.hpp"

#include "hybridpf/errors.hpp"

#include <cmath>
#include <string>

namespace hybridpf {

namespace {

void check_dims(const PackedView& params, const Vector& x, const Vector& h_prev) {
    const int k = params.hidden_size();
    const int l = params.concat_size() - k;
    if (x.size() != l) {
        throw ConfigError("cell input length " + std::to_string(x.size()) +
                          " does not match expected " + std::to_string(l));
    }
    if (h_prev.size() != k) {
        throw ConfigError("hidden state length " + std::to_string(h_prev.size()) +
                          " does not match expected " + std::to_string(k));
    }
}

} // namespace

Vector sigmoid(const Vector& v) {
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = v[i];
        if (a >= 0.0) {
            out[i] = 1.0 / (1.0 + std::exp(-a));
        } else {
            const double e = std::exp(a);
            out[i] = e / (1.0 + e);
        }
    }
    return out;
}

CellState lstm_forward(const PackedView& params, const Vector& x, const CellState& prev) {
    check_dims(params, x, prev.h);
    if (prev.c.size() != params.hidden_size()) {
        throw ConfigError("cell state length does not match hidden size");
    }

    Vector z(params.concat_size());
    z << prev.h, x;

    const Vector f = sigmoid(params.weight(0) * z + params.bias(0));
    const Vector i = sigmoid(params.weight(1) * z + params.bias(1));
    const Vector cand = (params.weight(2) * z + params.bias(2)).array().tanh();
    const Vector o = sigmoid(params.weight(3) * z + params.bias(3));

    CellState next;
    next.c = f.cwiseProduct(prev.c) + i.cwiseProduct(cand);
    next.h = o.cwiseProduct(next.c.array().tanh().matrix());
    return next;
}

Vector gru_forward(const PackedView& params, const Vector& x, const Vector& h_prev) {
    check_dims(params, x, h_prev);

    Vector z(params.concat_size());
    z << h_prev, x;

    const Vector update = sigmoid(params.weight(0) * z + params.bias(0));
    const Vector reset = sigmoid(params.weight(1) * z + params.bias(1));

    Vector zr(params.concat_size());
    zr << reset.cwiseProduct(h_prev), x;
    const Vector cand = (params.weight(2) * zr + params.bias(2)).array().tanh();

    return (Vector::Ones(h_prev.size()) - update).cwiseProduct(h_prev) +
           update.cwiseProduct(cand);
}

} // namespace hybridpf
