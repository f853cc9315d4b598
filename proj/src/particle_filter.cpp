#include "hybridpf/particle_filter.hpp"

#include "hybridpf/errors.hpp"
#include "hybridpf/parallel.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace hybridpf {

void FilterConfig::validate() const {
    if (particle_count < 2) {
        throw ConfigError("particle count must be at least 2, got " +
                          std::to_string(particle_count));
    }
    if (!(resample_fraction >= 0.0 && resample_fraction <= 1.0)) {
        throw ConfigError("resample fraction must lie in [0, 1]");
    }
    if (threads < 1) {
        throw ConfigError("thread count must be at least 1");
    }
}

void InitSpec::validate() const {
    if (!(weight_scale >= 0.0) || !(readout_scale >= 0.0) || !(sx_coeff_std >= 0.0)) {
        throw ConfigError("initial ensemble scales must be non-negative");
    }
}

double effective_size(const Vector& weights) {
    const double sq = weights.squaredNorm();
    if (!(sq > 0.0)) {
        throw NumericalError("effective sample size undefined for all-zero weights");
    }
    return 1.0 / sq;
}

ParticleFilter::ParticleFilter(const StateLayout& layout, const FilterConfig& config,
                               const NoiseSpec& noise, const InitSpec& init)
    : layout_(layout),
      config_(config),
      noise_(noise),
      init_(init),
      ensemble_rng_(config.seed, static_cast<std::uint64_t>(config.particle_count)) {
    config_.validate();
    noise_.validate();
    init_.validate();
    if (layout_.total_dim <= 0) {
        throw ConfigError("state layout is empty; nothing to filter");
    }
    const int n = config_.particle_count;
    streams_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        streams_.emplace_back(config_.seed, static_cast<std::uint64_t>(i));
    }
    particles_.assign(static_cast<std::size_t>(n), StateVector::Zero(layout_.total_dim));
    weights_ = Vector::Constant(n, 1.0 / n);
    log_weights_ = Vector::Constant(n, -std::log(static_cast<double>(n)));
    scratch_.assign(static_cast<std::size_t>(n), 0.0);
    initialize_ensemble();
}

void ParticleFilter::initialize_ensemble() {
    const int k = layout_.hidden_size;
    const int l = layout_.input_size;
    const double w_std = layout_.has_cell() ? std::sqrt(init_.weight_scale / (k + l)) : 0.0;
    const double r_std = layout_.has_cell() ? std::sqrt(init_.readout_scale / k) : 0.0;
    const int gate_block = k * (k + l) + k;
    const int weight_entries = k * (k + l);

    for (int i = 0; i < config_.particle_count; ++i) {
        StateVector& s = particles_[static_cast<std::size_t>(i)];
        RngStream& rng = streams_[static_cast<std::size_t>(i)];
        if (layout_.has_cell()) {
            const int gate_count = (layout_.theta.length - k) / gate_block;
            double* theta = s.data() + layout_.theta.offset;
            for (int g = 0; g < gate_count; ++g) {
                double* block = theta + g * gate_block;
                for (int j = 0; j < weight_entries; ++j) {
                    block[j] = w_std * rng.normal();
                }
                // biases stay zero
            }
            double* readout = theta + gate_count * gate_block;
            for (int j = 0; j < k; ++j) {
                readout[j] = r_std * rng.normal();
            }
        }
        for (int j = layout_.sx_offset(); j < layout_.sx_offset() + layout_.sx_dim(); ++j) {
            s(j) = init_.sx_coeff_std * rng.normal();
        }
    }
}

StepDiag ParticleFilter::step(const Vector& x, const Vector& r, double y) {
    const int n = config_.particle_count;
    parallel_for(n, config_.threads, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            transition(layout_, particles_[static_cast<std::size_t>(i)], x, noise_,
                       streams_[static_cast<std::size_t>(i)]);
        }
    });
    parallel_for(n, config_.threads, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const double y_pred = measure(layout_, particles_[static_cast<std::size_t>(i)], r);
            scratch_[static_cast<std::size_t>(i)] = log_likelihood(y, y_pred, noise_.sigma_y);
        }
    });

    double max_lw = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        log_weights_(i) += scratch_[static_cast<std::size_t>(i)];
        max_lw = std::max(max_lw, log_weights_(i));
    }
    if (!std::isfinite(max_lw)) {
        throw NumericalError("all particle weights underflowed");
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += std::exp(log_weights_(i) - max_lw);
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw NumericalError("particle weight normalization failed");
    }
    const double log_sum = std::log(sum);
    for (int i = 0; i < n; ++i) {
        log_weights_(i) -= max_lw + log_sum;
        weights_(i) = std::exp(log_weights_(i));
    }

    StepDiag diag;
    diag.ess = hybridpf::effective_size(weights_);
    if (diag.ess < config_.resample_fraction * n) {
        systematic_resample();
        diag.resampled = true;
    }
    return diag;
}

double ParticleFilter::predict(const Vector& x, const Vector& r) const {
    const int n = config_.particle_count;
    if (config_.predict_mode == PredictMode::MeanState) {
        const StateVector mean = estimate_state();
        return measure(layout_, cells_after(layout_, mean, x), r);
    }
    std::vector<double> preds(static_cast<std::size_t>(n));
    parallel_for(n, config_.threads, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const StateVector& s = particles_[static_cast<std::size_t>(i)];
            preds[static_cast<std::size_t>(i)] = measure(layout_, cells_after(layout_, s, x), r);
        }
    });
    double y = 0.0;
    for (int i = 0; i < n; ++i) {
        y += weights_(i) * preds[static_cast<std::size_t>(i)];
    }
    return y;
}

void ParticleFilter::advance_frozen(const Vector& x) {
    const int n = config_.particle_count;
    parallel_for(n, config_.threads, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            StateVector& s = particles_[static_cast<std::size_t>(i)];
            s = cells_after(layout_, s, x);
        }
    });
}

StateVector ParticleFilter::estimate_state() const {
    StateVector est = StateVector::Zero(layout_.total_dim);
    for (int i = 0; i < config_.particle_count; ++i) {
        est += weights_(i) * particles_[static_cast<std::size_t>(i)];
    }
    return est;
}

double ParticleFilter::effective_size() const { return hybridpf::effective_size(weights_); }

void ParticleFilter::systematic_resample() {
    const int n = config_.particle_count;
    const double u0 = ensemble_rng_.uniform() / n;
    std::vector<int> index(static_cast<std::size_t>(n));
    double cum = weights_(0);
    int j = 0;
    for (int i = 0; i < n; ++i) {
        const double u = u0 + static_cast<double>(i) / n;
        while (u > cum && j + 1 < n) {
            ++j;
            cum += weights_(j);
        }
        index[static_cast<std::size_t>(i)] = j;
    }
    std::vector<StateVector> next(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        next[static_cast<std::size_t>(i)] = particles_[static_cast<std::size_t>(index[static_cast<std::size_t>(i)])];
    }
    particles_ = std::move(next);
    weights_.setConstant(1.0 / n);
    log_weights_.setConstant(-std::log(static_cast<double>(n)));
    ++resample_count_;
}

void ParticleFilter::set_particle(int i, const StateVector& s) {
    if (i < 0 || i >= config_.particle_count) {
        throw ConfigError("particle index out of range");
    }
    check_state(layout_, s);
    particles_[static_cast<std::size_t>(i)] = s;
}

void ParticleFilter::set_weights(const Vector& weights) {
    if (weights.size() != config_.particle_count) {
        throw ConfigError("weight vector length does not match particle count");
    }
    const double sum = weights.sum();
    if (!(sum > 0.0) || (weights.array() < 0.0).any()) {
        throw ConfigError("weights must be non-negative with positive sum");
    }
    weights_ = weights / sum;
    for (int i = 0; i < config_.particle_count; ++i) {
        log_weights_(i) = std::log(std::max(weights_(i), 1e-300));
    }
}

} // namespace hybridpf
