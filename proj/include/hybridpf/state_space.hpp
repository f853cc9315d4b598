#pragma once

#include "hybridpf/model_spec.hpp"

#include <cstdint>
#include <random>

namespace hybridpf {

/// Deterministically seeded random stream. Distinct (seed, stream) pairs
/// yield independent-looking sequences, so each particle slot can own one
/// and results stay reproducible at any thread count.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    double normal();  // N(0, 1)
    double uniform(); // U[0, 1)

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Advances the recurrent cell deterministically and returns the state with
/// updated c/h segments; parameter segments are copied unchanged. For a
/// configuration without a cell this is the identity.
StateVector cells_after(const StateLayout& layout, const StateVector& s, const Vector& x);

/// One state-transition draw: deterministic cell advance plus independent
/// Gaussian perturbations on every segment (random walk on parameters).
/// Mutates `s` in place. Draws from `rng` in a fixed order so results are
/// reproducible.
void transition(const StateLayout& layout, StateVector& s, const Vector& x,
                const NoiseSpec& noise, RngStream& rng);

/// Noiseless measurement: readout of the hidden state plus the linear
/// combination of the known regressor with the SARIMAX coefficient block.
double measure(const StateLayout& layout, const StateVector& s, const Vector& r);

/// As `measure`, but against an explicit hidden state (used when the cell
/// has been advanced separately from the stored state).
double measure_with_hidden(const StateLayout& layout, const StateVector& s,
                           const Vector& h, const Vector& r);

/// Log density of N(y_obs; y_pred, sigma_y^2).
double log_likelihood(double y_obs, double y_pred, double sigma_y);

} // namespace hybridpf
