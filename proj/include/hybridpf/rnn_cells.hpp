#pragma once

#include "hybridpf/packing.hpp"

namespace hybridpf {

/// Internal cell state. c is meaningful for LSTM only; GRU carries just h.
struct CellState {
    Vector c;
    Vector h;
};

/// One deterministic LSTM step on the concatenation [h_prev; x]:
///   f = sigma(W_f z + b_f), i = sigma(W_i z + b_i),
///   c~ = tanh(W_c z + b_c), o = sigma(W_o z + b_o),
///   c = f (*) c_prev + i (*) c~, h = o (*) tanh(c).
/// Noise injection is the state-space module's job, not the cell's.
CellState lstm_forward(const PackedView& params, const Vector& x, const CellState& prev);

/// One deterministic GRU step:
///   z = sigma(W_z [h_prev; x] + b_z), q = sigma(W_q [h_prev; x] + b_r),
///   h~ = tanh(W_h [q (*) h_prev; x] + b_h),
///   h = (1 - z) (*) h_prev + z (*) h~.
Vector gru_forward(const PackedView& params, const Vector& x, const Vector& h_prev);

/// Elementwise logistic sigmoid, evaluated on the numerically stable branch.
Vector sigmoid(const Vector& v);

} // namespace hybridpf
