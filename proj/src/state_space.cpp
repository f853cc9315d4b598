#include "hybridpf/state_space.hpp"

#include "hybridpf/errors.hpp"
#include "hybridpf/packing.hpp"
#include "hybridpf/rnn_cells.hpp"

#include <cmath>
#include <string>

namespace hybridpf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void add_noise(StateVector& s, const Segment& seg, double sigma, RngStream& rng) {
    for (Eigen::Index i = seg.offset; i < seg.end(); ++i) {
        s(i) += sigma * rng.normal();
    }
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform() { return uniform_(engine_); }

StateVector cells_after(const StateLayout& layout, const StateVector& s, const Vector& x) {
    StateVector out = s;
    if (!layout.has_cell()) {
        return out;
    }
    const int gates = *layout.cell_kind == CellKind::Lstm ? 4 : 3;
    PackedView view(s.data() + layout.theta.offset, layout.hidden_size,
                    layout.input_size, gates);
    if (*layout.cell_kind == CellKind::Lstm) {
        CellState prev{s.segment(layout.c.offset, layout.c.length),
                       s.segment(layout.h.offset, layout.h.length)};
        CellState next = lstm_forward(view, x, prev);
        out.segment(layout.c.offset, layout.c.length) = next.c;
        out.segment(layout.h.offset, layout.h.length) = next.h;
    } else {
        Vector h_prev = s.segment(layout.h.offset, layout.h.length);
        Vector h = gru_forward(view, x, h_prev);
        out.segment(layout.h.offset, layout.h.length) = h;
    }
    if (!out.segment(layout.c.offset, layout.c.length).allFinite() ||
        !out.segment(layout.h.offset, layout.h.length).allFinite()) {
        throw NumericalError("recurrent cell produced a non-finite state");
    }
    return out;
}

void transition(const StateLayout& layout, StateVector& s, const Vector& x,
                const NoiseSpec& noise, RngStream& rng) {
    s = cells_after(layout, s, x);
    add_noise(s, layout.c, noise.sigma_c, rng);
    add_noise(s, layout.h, noise.sigma_h, rng);
    add_noise(s, layout.theta, noise.sigma_theta, rng);
    add_noise(s, layout.phi, noise.sigma_sx, rng);
    add_noise(s, layout.theta_ma, noise.sigma_sx, rng);
    add_noise(s, layout.beta, noise.sigma_sx, rng);
}

double measure(const StateLayout& layout, const StateVector& s, const Vector& r) {
    return measure_with_hidden(layout, s, s.segment(layout.h.offset, layout.h.length), r);
}

double measure_with_hidden(const StateLayout& layout, const StateVector& s,
                           const Vector& h, const Vector& r) {
    double y = 0.0;
    if (layout.has_cell()) {
        const int gates = *layout.cell_kind == CellKind::Lstm ? 4 : 3;
        PackedView view(s.data() + layout.theta.offset, layout.hidden_size,
                        layout.input_size, gates);
        y += view.readout().dot(h);
    }
    const Eigen::Index sx = layout.sx_dim();
    if (sx > 0) {
        if (r.size() != sx) {
            throw ConfigError("regressor length " + std::to_string(r.size()) +
                              " does not match coefficient block " + std::to_string(sx));
        }
        y += r.dot(s.segment(layout.sx_offset(), sx));
    }
    return y;
}

double log_likelihood(double y_obs, double y_pred, double sigma_y) {
    if (!(sigma_y > 0.0)) {
        throw ConfigError("observation noise must be positive");
    }
    const double z = (y_obs - y_pred) / sigma_y;
    return -0.5 * std::log(2.0 * M_PI) - std::log(sigma_y) - 0.5 * z * z;
}

} // namespace hybridpf
