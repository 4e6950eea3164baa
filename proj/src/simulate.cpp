#include "rankguard/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankguard/rng.hpp"

namespace rankguard {

void InstanceGenConfig::validate() const {
    if (domain_size_min < 1 || domain_size_max < domain_size_min)
        throw InvalidConfigError("domain size range [" + std::to_string(domain_size_min) + ", " +
                                 std::to_string(domain_size_max) + "] is invalid");
    if (num_classes_min < 2 || num_classes_max < num_classes_min)
        throw InvalidConfigError("class count range [" + std::to_string(num_classes_min) + ", " +
                                 std::to_string(num_classes_max) + "] is invalid");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw InvalidConfigError("lambda must be in [0,1], got " + std::to_string(lambda));
    if (!(hypothesis_accuracy >= 0.0 && hypothesis_accuracy <= 1.0))
        throw InvalidConfigError("hypothesis_accuracy must be in [0,1], got " +
                                 std::to_string(hypothesis_accuracy));
    if (hypotheses_per_instance < 1)
        throw InvalidConfigError("hypotheses_per_instance must be at least 1, got " +
                                 std::to_string(hypotheses_per_instance));
}

FiniteInstance generate_instance(const InstanceGenConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);

    const auto span = [&](int lo, int hi) {
        return lo + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(hi - lo + 1)));
    };
    const int n = span(cfg.domain_size_min, cfg.domain_size_max);
    const int c = span(cfg.num_classes_min, cfg.num_classes_max);

    FiniteInstance inst;
    inst.domain = FiniteDomain(n, c);

    const Eigen::VectorXd real = rng.simplex(n);
    const Eigen::VectorXd nu = rng.simplex(n);
    inst.mu_r = Pmf(real);
    // 1.0 * real + 0.0 * nu reproduces real bitwise, so lambda = 0 yields
    // identical measures, not merely close ones.
    inst.mu_s = Pmf((1.0 - cfg.lambda) * real + cfg.lambda * nu);

    inst.f.resize(n);
    for (int i = 0; i < n; ++i)
        inst.f[i] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(c)));

    inst.hypotheses.reserve(static_cast<std::size_t>(cfg.hypotheses_per_instance));
    for (int h = 0; h < cfg.hypotheses_per_instance; ++h) {
        LabelMap labels(n);
        for (int i = 0; i < n; ++i) {
            if (rng.uniform01() < cfg.hypothesis_accuracy) {
                labels[i] = inst.f[i];
            } else {
                // uniform over the c-1 wrong labels
                const int w = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(c - 1)));
                labels[i] = w >= inst.f[i] ? w + 1 : w;
            }
        }
        inst.hypotheses.push_back(std::move(labels));
    }
    return inst;
}

void TraceGenConfig::validate() const {
    if (num_archs < 1)
        throw InvalidConfigError("num_archs must be at least 1, got " + std::to_string(num_archs));
    if (runs_per_arch < 1)
        throw InvalidConfigError("runs_per_arch must be at least 1, got " +
                                 std::to_string(runs_per_arch));
    if (epochs < 1)
        throw InvalidConfigError("epochs must be at least 1, got " + std::to_string(epochs));
    if (!(rho >= -1.0 && rho <= 1.0))
        throw InvalidConfigError("rho must be in [-1,1], got " + std::to_string(rho));
    for (const auto& [name, value] :
         {std::pair<const char*, double>{"floor_test", floor_test},
          {"arch_spread", arch_spread},
          {"run_spread", run_spread},
          {"epoch_noise", epoch_noise},
          {"synth_bias", synth_bias},
          {"synth_noise", synth_noise},
          {"subset_penalty", subset_penalty},
          {"curve_amp", curve_amp},
          {"curve_tau", curve_tau}}) {
        if (!std::isfinite(value) || value < 0.0)
            throw InvalidConfigError(std::string(name) + " must be finite and non-negative, got " +
                                     std::to_string(value));
    }
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

/// Zero-padded arch label so lexicographic and numeric order agree.
std::string arch_label(int a, int width) {
    std::string digits = std::to_string(a);
    return "a" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
}

}  // namespace

EvalTraceSet generate_traces(const TraceGenConfig& cfg) {
    cfg.validate();

    const int width = static_cast<int>(std::to_string(cfg.num_archs - 1).size());
    // sqrt(1 - 1.0) is exactly 0, so rho = 1 couples q~ to q bitwise.
    const double mix = std::sqrt(1.0 - cfg.rho * cfg.rho);

    std::vector<EvalRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.num_archs) * cfg.runs_per_arch * cfg.epochs * 4);

    for (int a = 0; a < cfg.num_archs; ++a) {
        // Stream 0: per-arch latent offsets (real and the independent copy).
        Rng arch_rng(derive_seed(cfg.seed, {0, static_cast<std::uint64_t>(a)}));
        const double arch_offset = arch_rng.gaussian(0.0, cfg.arch_spread);
        const double arch_offset_p = arch_rng.gaussian(0.0, cfg.arch_spread);
        const std::string arch = arch_label(a, width);

        for (int r = 0; r < cfg.runs_per_arch; ++r) {
            // Stream 1: per-run offsets and every per-epoch noise draw.
            Rng rng(derive_seed(
                cfg.seed, {1, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(r)}));
            const double q = arch_offset + rng.gaussian(0.0, cfg.run_spread);
            const double q_p = arch_offset_p + rng.gaussian(0.0, cfg.run_spread);
            const double q_synth = cfg.rho * q + mix * q_p;

            for (int e = 0; e < cfg.epochs; ++e) {
                const double decay = cfg.curve_amp * std::exp(-static_cast<double>(e) / cfg.curve_tau);
                const double train_err =
                    clamp01(0.5 * cfg.floor_test + q + decay + cfg.epoch_noise * rng.gaussian());
                const double test_err =
                    clamp01(cfg.floor_test + q + decay + cfg.epoch_noise * rng.gaussian());
                const double synth_err = clamp01(cfg.floor_test + cfg.synth_bias + q_synth + decay +
                                                 cfg.synth_noise * rng.gaussian());
                const double val_err = clamp01(cfg.floor_test + cfg.subset_penalty + q + decay +
                                               cfg.epoch_noise * rng.gaussian());
                records.push_back({arch, r, e, Split::train, TrainedOn::full, train_err});
                records.push_back({arch, r, e, Split::test, TrainedOn::full, test_err});
                records.push_back({arch, r, e, Split::synthetic, TrainedOn::full, synth_err});
                records.push_back({arch, r, e, Split::val, TrainedOn::subset, val_err});
            }
        }
    }

    std::map<std::string, std::string> metadata;
    metadata["generator"] = "trace-sim";
    metadata["seed"] = std::to_string(cfg.seed);
    metadata["rho"] = std::to_string(cfg.rho);
    return EvalTraceSet(std::move(records), std::move(metadata));
}

}  // namespace rankguard
