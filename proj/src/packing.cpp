#include "hybridpf/packing.hpp"

#include "hybridpf/errors.hpp"

#include <string>

namespace hybridpf {

Vector pack_params(const RnnParams& params, const RnnSpec& spec) {
    spec.validate();
    const int gates = spec.gate_count();
    const int k = spec.hidden_size;
    const int cols = spec.hidden_size + spec.input_size;

    if (static_cast<int>(params.weights.size()) != gates ||
        static_cast<int>(params.biases.size()) != gates) {
        throw ConfigError("expected " + std::to_string(gates) + " gate weight/bias blocks");
    }
    for (int g = 0; g < gates; ++g) {
        if (params.weights[g].rows() != k || params.weights[g].cols() != cols) {
            throw ConfigError("gate " + std::to_string(g) + " weight matrix must be " +
                              std::to_string(k) + "x" + std::to_string(cols));
        }
        if (params.biases[g].size() != k) {
            throw ConfigError("gate " + std::to_string(g) + " bias must have length " +
                              std::to_string(k));
        }
    }
    if (params.readout.size() != k) {
        throw ConfigError("readout vector must have length " + std::to_string(k));
    }

    Vector theta(spec.param_count());
    int offset = 0;
    for (int g = 0; g < gates; ++g) {
        for (int r = 0; r < k; ++r) {
            for (int c = 0; c < cols; ++c) {
                theta[offset++] = params.weights[g](r, c);
            }
        }
        theta.segment(offset, k) = params.biases[g];
        offset += k;
    }
    theta.segment(offset, k) = params.readout;
    return theta;
}

RnnParams unpack_params(const Vector& theta, const RnnSpec& spec) {
    spec.validate();
    if (theta.size() != spec.param_count()) {
        throw ConfigError("theta length " + std::to_string(theta.size()) +
                          " does not match n_theta " + std::to_string(spec.param_count()));
    }
    const int gates = spec.gate_count();
    const int k = spec.hidden_size;
    const int cols = spec.hidden_size + spec.input_size;

    RnnParams params;
    params.weights.resize(gates);
    params.biases.resize(gates);
    int offset = 0;
    for (int g = 0; g < gates; ++g) {
        Matrix w(k, cols);
        for (int r = 0; r < k; ++r) {
            for (int c = 0; c < cols; ++c) {
                w(r, c) = theta[offset++];
            }
        }
        params.weights[g] = std::move(w);
        params.biases[g] = theta.segment(offset, k);
        offset += k;
    }
    params.readout = theta.segment(offset, k);
    return params;
}

} // namespace hybridpf
