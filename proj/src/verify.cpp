#include "rankguard/verify.hpp"

#include <algorithm>
#include <thread>

#include "rankguard/rng.hpp"

namespace rankguard {

namespace {

struct WorkerTally {
    std::size_t pairs = 0;
    std::size_t triggered = 0;
    std::size_t violations = 0;
    std::size_t lemma_violations = 0;
    std::size_t chain_violations = 0;
    std::size_t corollary2_violations = 0;
    double slack_min = std::numeric_limits<double>::infinity();
    double corollary2_slack_min = std::numeric_limits<double>::infinity();
    std::vector<Counterexample> counterexamples;
};

}  // namespace

VerificationReport verify_batch(const InstanceGenConfig& gen, const VerifyOptions& opts) {
    gen.validate();
    if (opts.num_instances < 1)
        throw InvalidConfigError("verification needs at least 1 instance, got " +
                                 std::to_string(opts.num_instances));
    if (gen.hypotheses_per_instance < 2)
        throw InvalidConfigError("verification needs at least 2 hypotheses per instance, got " +
                                 std::to_string(gen.hypotheses_per_instance));

    const std::size_t h = static_cast<std::size_t>(gen.hypotheses_per_instance);
    const std::size_t pairs_per_instance = h * (h - 1);
    const std::size_t n = opts.num_instances;

    // One slack slot per ordered pair, written by exactly one worker, so the
    // median is computed over identical data for any worker count.
    std::vector<double> slacks(n * pairs_per_instance);

    std::size_t worker_count = opts.workers > 0
                                   ? static_cast<std::size_t>(opts.workers)
                                   : std::max(1u, std::thread::hardware_concurrency());
    worker_count = std::min(worker_count, n);
    std::vector<WorkerTally> tallies(worker_count);

    const auto scan_range = [&](std::size_t begin, std::size_t end, WorkerTally& tally) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const FiniteInstance inst = generate_instance(gen, derive_seed(opts.seed, {idx}));
            std::size_t pair = 0;
            for (std::size_t i = 0; i < h; ++i) {
                for (std::size_t j = 0; j < h; ++j) {
                    if (i == j) continue;
                    const TheoremVerdict v =
                        check_pair(inst.hypotheses[i], inst.hypotheses[j], inst.f, inst.mu_r,
                                   inst.mu_s);
                    slacks[idx * pairs_per_instance + pair] = v.slack;
                    ++pair;
                    ++tally.pairs;
                    if (v.condition_held) ++tally.triggered;
                    tally.slack_min = std::min(tally.slack_min, v.slack);
                    tally.corollary2_slack_min =
                        std::min(tally.corollary2_slack_min, v.corollary2_slack);

                    std::string reason;
                    if (v.condition_held && !v.conclusion_held) {
                        ++tally.violations;
                        reason = "condition held but real risk gap is negative";
                    }
                    if (v.slack < -kResidualTolerance) {
                        ++tally.chain_violations;
                        if (reason.empty()) reason = "proof-chain slack below tolerance";
                    }
                    if (v.corollary2_slack < -kResidualTolerance) {
                        ++tally.corollary2_violations;
                        if (reason.empty()) reason = "gap-bound slack below tolerance";
                    }
                    const double residual_r =
                        lemma1_check(inst.mu_r, inst.hypotheses[i], inst.hypotheses[j], inst.f)
                            .residual;
                    const double residual_s =
                        lemma1_check(inst.mu_s, inst.hypotheses[i], inst.hypotheses[j], inst.f)
                            .residual;
                    if (residual_r > kResidualTolerance || residual_s > kResidualTolerance) {
                        ++tally.lemma_violations;
                        if (reason.empty()) reason = "risk-decomposition residual above tolerance";
                    }
                    if (!reason.empty() && tally.counterexamples.size() < opts.counterexample_cap)
                        tally.counterexamples.push_back({idx, i, j, reason, v, inst});
                }
            }
        }
    };

    if (worker_count <= 1) {
        scan_range(0, n, tallies[0]);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        const std::size_t chunk = (n + worker_count - 1) / worker_count;
        for (std::size_t w = 0; w < worker_count; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            threads.emplace_back(scan_range, begin, end, std::ref(tallies[w]));
        }
        for (std::thread& t : threads) t.join();
    }

    VerificationReport report;
    report.instances = n;
    report.trigger_floor = opts.trigger_floor;
    for (WorkerTally& tally : tallies) {
        report.pairs_checked += tally.pairs;
        report.condition_triggered += tally.triggered;
        report.violations += tally.violations;
        report.lemma_violations += tally.lemma_violations;
        report.chain_violations += tally.chain_violations;
        report.corollary2_violations += tally.corollary2_violations;
        report.slack_min = std::min(report.slack_min, tally.slack_min);
        report.corollary2_slack_min =
            std::min(report.corollary2_slack_min, tally.corollary2_slack_min);
        report.counterexamples.insert(report.counterexamples.end(),
                                      std::make_move_iterator(tally.counterexamples.begin()),
                                      std::make_move_iterator(tally.counterexamples.end()));
    }
    std::sort(report.counterexamples.begin(), report.counterexamples.end(),
              [](const Counterexample& a, const Counterexample& b) {
                  return std::tie(a.instance_index, a.i, a.j) < std::tie(b.instance_index, b.i, b.j);
              });
    if (report.counterexamples.size() > opts.counterexample_cap)
        report.counterexamples.resize(opts.counterexample_cap);

    const std::size_t mid = slacks.size() / 2;
    std::nth_element(slacks.begin(), slacks.begin() + mid, slacks.end());
    report.slack_median = slacks[mid];
    if (slacks.size() % 2 == 0) {
        const double lower = *std::max_element(slacks.begin(), slacks.begin() + mid);
        report.slack_median = 0.5 * (lower + slacks[mid]);
    }

    report.vacuity_ok = report.trigger_fraction() >= opts.trigger_floor;
    return report;
}

FalsifyReport falsify_converse(const InstanceGenConfig& gen, std::size_t num_instances,
                               std::uint64_t seed) {
    gen.validate();
    if (num_instances < 1)
        throw InvalidConfigError("falsification needs at least 1 instance, got " +
                                 std::to_string(num_instances));

    FalsifyReport report;
    report.instances = num_instances;
    const std::size_t h = static_cast<std::size_t>(gen.hypotheses_per_instance);
    for (std::size_t idx = 0; idx < num_instances; ++idx) {
        const FiniteInstance inst = generate_instance(gen, derive_seed(seed, {idx}));
        bool flipped = false;
        for (std::size_t i = 0; i < h && !flipped; ++i) {
            for (std::size_t j = 0; j < h && !flipped; ++j) {
                if (i == j) continue;
                const TheoremVerdict v = check_pair(inst, i, j);
                // A genuine flip: synthetic ranking says h_i is no worse,
                // real ranking says it is strictly worse. The gap condition
                // cannot have held (the statement is verified separately).
                flipped = v.delta_eps_s >= 0.0 && v.delta_eps_r < 0.0;
            }
        }
        if (flipped) {
            ++report.flips;
            if (!report.first_flip_instance) report.first_flip_instance = idx;
        }
    }
    return report;
}

}  // namespace rankguard
