#pragma once

#include <cstdint>

#include "rankguard/domain.hpp"
#include "rankguard/selection.hpp"

namespace rankguard {

/// Knobs for random finite verification instances.
struct InstanceGenConfig {
    int domain_size_min = 2;
    int domain_size_max = 64;
    int num_classes_min = 2;
    int num_classes_max = 10;

    /// Mixing weight of the synthetic measure: mu_s = (1 - lambda) * mu_r +
    /// lambda * nu with nu an independent random pmf. 0 means identical
    /// domains; 1 means unrelated ones.
    double lambda = 0.3;

    /// Probability that a hypothesis copies the true label at each point
    /// (otherwise a uniformly random wrong label).
    double hypothesis_accuracy = 0.8;

    int hypotheses_per_instance = 4;

    void validate() const;
};

/// Deterministic random instance for the given seed: mu_r and nu are flat
/// simplex draws, mu_s the lambda-mixture (bitwise equal to mu_r when
/// lambda = 0), f uniform labels, hypotheses noisy copies of f.
FiniteInstance generate_instance(const InstanceGenConfig& cfg, std::uint64_t seed);

/// Knobs for the evaluation-trace generator. The model: each run has a
/// latent quality q = arch_offset + run_offset; per-epoch test error is
/// floor_test + q + curve_amp * exp(-epoch / curve_tau) + epoch_noise * xi,
/// clamped to [0,1]. Synthetic-split error replaces q by the coupled
/// q~ = rho * q + sqrt(1 - rho^2) * q' (q' an independent copy), adds
/// synth_bias, and uses synth_noise — so the rank correlation between final
/// synthetic and test errors tends to rho. Each run also has a subset-trained
/// duplicate (same q) whose val error adds subset_penalty.
struct TraceGenConfig {
    int num_archs = 64;
    int runs_per_arch = 10;
    int epochs = 100;
    double rho = 0.97;
    double floor_test = 0.15;
    double arch_spread = 0.03;
    double run_spread = 0.015;
    double epoch_noise = 0.002;
    double synth_bias = 0.02;
    double synth_noise = 0.004;
    double subset_penalty = 0.02;
    double curve_amp = 0.6;
    double curve_tau = 12.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Full trace set for the config: per (arch, run), fully-trained curves for
/// train/test/synthetic plus a subset-trained val curve. Seed streams are
/// derived per (arch, run), so output is independent of generation order.
EvalTraceSet generate_traces(const TraceGenConfig& cfg);

}  // namespace rankguard
