#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rankguard/domain.hpp"
#include "rankguard/rank.hpp"
#include "rankguard/simulate.hpp"

namespace rankguard {

struct VerifyOptions {
    std::size_t num_instances = 0;
    std::uint64_t seed = 0;

    /// Worker threads; 0 or less means hardware concurrency. Results are
    /// identical for any worker count: instance streams derive from
    /// (seed, instance index), and all reductions are order-independent.
    int workers = 0;

    /// Vacuity guard: at least this fraction of checked pairs must trigger
    /// the gap condition, or the run proves nothing and is flagged.
    double trigger_floor = 0.01;

    std::size_t counterexample_cap = 16;
};

/// One violating pair, kept with enough context to reproduce it.
struct Counterexample {
    std::size_t instance_index = 0;
    std::size_t i = 0;  ///< ordered hypothesis pair
    std::size_t j = 0;
    std::string reason;
    TheoremVerdict verdict;
    FiniteInstance instance;
};

struct VerificationReport {
    std::size_t instances = 0;
    std::size_t pairs_checked = 0;
    std::size_t condition_triggered = 0;

    /// Pairs with condition_held but not conclusion_held. Any correct
    /// implementation reports zero.
    std::size_t violations = 0;
    /// Risk-decomposition residuals above 1e-12, under either measure.
    std::size_t lemma_violations = 0;
    /// Proof-chain slacks below -1e-12.
    std::size_t chain_violations = 0;
    /// Gap-bound slacks below -1e-12.
    std::size_t corollary2_violations = 0;

    double slack_min = std::numeric_limits<double>::infinity();
    double slack_median = 0.0;
    double corollary2_slack_min = std::numeric_limits<double>::infinity();

    double trigger_floor = 0.0;
    bool vacuity_ok = false;

    std::vector<Counterexample> counterexamples;

    double trigger_fraction() const {
        return pairs_checked == 0
                   ? 0.0
                   : static_cast<double>(condition_triggered) / static_cast<double>(pairs_checked);
    }
    bool clean() const {
        return violations == 0 && lemma_violations == 0 && chain_violations == 0 &&
               corollary2_violations == 0 && vacuity_ok;
    }
};

/// Tolerance for floating-point residue in the exact identities.
inline constexpr double kResidualTolerance = 1e-12;

/// Brute-force verification sweep: generates `num_instances` seeded random
/// instances, checks every ordered hypothesis pair against the
/// rank-preservation statement, the proof-chain inequality, the gap bound,
/// and the risk-decomposition identity (under both measures).
VerificationReport verify_batch(const InstanceGenConfig& gen, const VerifyOptions& opts);

struct FalsifyReport {
    std::size_t instances = 0;
    /// Instances containing a genuine rank flip: some pair with
    /// delta_eps_s >= 0 but delta_eps_r < 0 (the gap condition is then
    /// necessarily false — the bound has bite, it is not vacuously safe).
    std::size_t flips = 0;
    std::optional<std::size_t> first_flip_instance;
};

/// Demonstrates the converse fails: without the gap condition, synthetic
/// ranking does mislead. Under an adversarial config (large lambda) flips
/// appear within a few thousand instances.
FalsifyReport falsify_converse(const InstanceGenConfig& gen, std::size_t num_instances,
                               std::uint64_t seed);

}  // namespace rankguard
