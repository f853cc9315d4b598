#pragma once

#include "hybridpf/model_spec.hpp"

#include <vector>

namespace hybridpf {

/// Per-gate cell parameters in matrix form. Gate order is fixed:
/// LSTM uses [forget, input, candidate, output]; GRU uses
/// [update, reset, candidate]. Each weight matrix is k x (k+l) and acts on
/// the concatenation [h_prev; x].
struct RnnParams {
    std::vector<Matrix> weights; // gate_count() matrices
    std::vector<Vector> biases;  // gate_count() vectors of length k
    Vector readout;              // dense read-out vector w, length k
};

/// Flattens cell parameters into the theta vector. The packed order is, per
/// gate, the weight matrix in row-major order followed by its bias, with the
/// readout vector last. unpack_params is the exact inverse.
Vector pack_params(const RnnParams& params, const RnnSpec& spec);

RnnParams unpack_params(const Vector& theta, const RnnSpec& spec);

/// Zero-copy view over a packed theta block. Used on the hot path so cell
/// evaluations never materialize parameter copies.
class PackedView {
public:
    using MatView = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    using VecView = Eigen::Map<const Vector>;

    PackedView(const double* theta, int hidden_size, int input_size, int gate_count)
        : data_(theta),
          k_(hidden_size),
          cols_(hidden_size + input_size),
          gate_block_(hidden_size * (hidden_size + input_size) + hidden_size),
          gates_(gate_count) {}

    PackedView(const double* theta, const RnnSpec& spec)
        : PackedView(theta, spec.hidden_size, spec.input_size, spec.gate_count()) {}

    MatView weight(int gate) const { return {data_ + gate * gate_block_, k_, cols_}; }
    VecView bias(int gate) const { return {data_ + gate * gate_block_ + k_ * cols_, k_}; }
    VecView readout() const { return {data_ + gates_ * gate_block_, k_}; }

    int hidden_size() const { return k_; }
    int concat_size() const { return cols_; }
    int gate_count() const { return gates_; }

private:
    const double* data_;
    int k_;
    int cols_;
    int gate_block_;
    int gates_;
};

} // namespace hybridpf
