#pragma once

#include "hybridpf/model_spec.hpp"
#include "hybridpf/state_space.hpp"

#include <cstdint>
#include <vector>

namespace hybridpf {

/// How one-step predictions are formed from the ensemble.
enum class PredictMode {
    PerParticle, // advance every particle's cell, average the measurements
    MeanState,   // collapse to the weighted mean state, then advance once
};

struct FilterConfig {
    int particle_count = 500;
    /// Resample when the effective sample size drops below this fraction of
    /// the particle count.
    double resample_fraction = 0.5;
    std::uint64_t seed = 0;
    int threads = 1;
    PredictMode predict_mode = PredictMode::PerParticle;

    void validate() const;
};

/// Spread of the initial ensemble. Weight entries start at N(0, scale/(k+l)),
/// the readout at N(0, scale/k), biases at zero, and every linear coefficient
/// at N(0, coeff_std^2).
struct InitSpec {
    double weight_scale = 1.0;
    double readout_scale = 1.0;
    double sx_coeff_std = 0.1;

    void validate() const;
};

/// Effective sample size 1 / sum(w_i^2) of normalized weights.
double effective_size(const Vector& weights);

struct StepDiag {
    double ess = 0.0;
    bool resampled = false;
};

/// Bootstrap particle filter over the joint cell/coefficient state. Each
/// particle slot owns a fixed random stream, transitions write only their own
/// slot, and every reduction runs sequentially in slot order, so results are
/// bitwise identical at any thread count.
class ParticleFilter {
public:
    ParticleFilter(const StateLayout& layout, const FilterConfig& config,
                   const NoiseSpec& noise, const InitSpec& init);

    /// One assimilation step: propagate through the transition, reweight by
    /// the likelihood of y given the measurement, and resample if the
    /// effective sample size fell below the configured fraction.
    StepDiag step(const Vector& x, const Vector& r, double y);

    /// One-step-ahead prediction of the measurement. Does not mutate the
    /// ensemble.
    double predict(const Vector& x, const Vector& r) const;

    /// Commits a deterministic cell advance on every particle, leaving the
    /// parameter segments and weights untouched. Used when the model is
    /// frozen but the cell must keep tracking its inputs.
    void advance_frozen(const Vector& x);

    /// Weighted mean of the ensemble.
    StateVector estimate_state() const;

    double effective_size() const;

    /// Systematic resampling with a single uniform offset. Particle states
    /// move between slots; each slot keeps its random stream.
    void systematic_resample();

    const std::vector<StateVector>& particles() const { return particles_; }
    const Vector& weights() const { return weights_; }
    void set_particle(int i, const StateVector& s);
    void set_weights(const Vector& weights);

    const StateLayout& layout() const { return layout_; }
    int resample_count() const { return resample_count_; }

private:
    void initialize_ensemble();

    StateLayout layout_;
    FilterConfig config_;
    NoiseSpec noise_;
    InitSpec init_;

    std::vector<StateVector> particles_;
    std::vector<RngStream> streams_; // one per slot, fixed for the run
    RngStream ensemble_rng_;         // resampling offsets
    Vector weights_;                 // normalized
    Vector log_weights_;
    int resample_count_ = 0;

    // scratch, sized once
    std::vector<double> scratch_;
};

} // namespace hybridpf
