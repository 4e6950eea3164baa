#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rankguard/errors.hpp"

namespace rankguard {

enum class Split { train, val, test, synthetic };
enum class TrainedOn { full, subset };

constexpr std::array<Split, 4> kAllSplits = {Split::train, Split::val, Split::test,
                                             Split::synthetic};

std::string to_string(Split s);
std::string to_string(TrainedOn t);
Split split_from_string(const std::string& s);
TrainedOn trained_on_from_string(const std::string& s);

/// One logged evaluation: this model instance, at this epoch, scored this
/// error on this data split.
struct EvalRecord {
    std::string arch_id;
    int run_id = 0;
    int epoch = 0;
    Split split = Split::test;
    TrainedOn trained_on = TrainedOn::full;
    double error = 0.0;

    void validate() const;
};

/// Identity of one training run: architecture, seed instance, and which
/// data the run trained on.
struct RunKey {
    std::string arch_id;
    int run_id = 0;
    TrainedOn trained_on = TrainedOn::full;

    auto operator<=>(const RunKey&) const = default;
};

/// Per-run error curves, one per split; an empty curve means the split was
/// not reported. curve[e] is the error at epoch e (contiguous from 0).
struct RunCurves {
    std::array<std::vector<double>, 4> by_split;

    const std::vector<double>& curve(Split s) const {
        return by_split[static_cast<std::size_t>(s)];
    }
    std::vector<double>& curve(Split s) { return by_split[static_cast<std::size_t>(s)]; }
};

/// Immutable, validated collection of evaluation records. Records keep their
/// insertion order (so files round-trip); selectors use the sorted run index,
/// which also fixes the deterministic tie-break order.
class EvalTraceSet {
public:
    EvalTraceSet() = default;
    explicit EvalTraceSet(std::vector<EvalRecord> records,
                          std::map<std::string, std::string> metadata = {});

    const std::vector<EvalRecord>& records() const { return records_; }
    const std::map<std::string, std::string>& metadata() const { return metadata_; }
    const std::map<RunKey, RunCurves>& runs() const { return runs_; }

    /// Error curve for one (run, split); null when that split is absent.
    const std::vector<double>* curve(const std::string& arch_id, int run_id, TrainedOn trained_on,
                                     Split split) const;

    /// Sorted unique architecture ids having at least one run with this
    /// trained_on tag.
    std::vector<std::string> arch_ids(TrainedOn trained_on) const;

    /// Sorted run ids of one architecture under this trained_on tag.
    std::vector<int> run_ids(const std::string& arch_id, TrainedOn trained_on) const;

private:
    std::vector<EvalRecord> records_;
    std::map<std::string, std::string> metadata_;
    std::map<RunKey, RunCurves> runs_;
};

/// The model instance a selector picked, with its score on the selection
/// split and, for context, the errors of every split present at the same
/// coordinate.
struct SelectionOutcome {
    std::string arch_id;
    int run_id = 0;
    int epoch = 0;
    double selected_error = 0.0;
    std::map<std::string, double> report_errors;  ///< split name -> error
};

/// Early stopping: within one training run, pick the epoch minimizing error
/// on `select_split` (tie: smallest epoch).
SelectionOutcome select_es(const EvalTraceSet& traces, const std::string& arch_id, int run_id,
                           Split select_split, TrainedOn trained_on = TrainedOn::full);

enum class SelectAt { last_epoch, best_epoch };

SelectAt select_at_from_string(const std::string& s);
std::string to_string(SelectAt at);

/// Random seed selection: among the runs of one architecture, pick the run
/// with minimal `select_split` error — at each run's final epoch
/// (at = last_epoch), or jointly over (run, epoch) (at = best_epoch, the
/// combined ES+RSS selection). Ties: smaller run_id, then smaller epoch.
SelectionOutcome select_rss(const EvalTraceSet& traces, const std::string& arch_id,
                            Split select_split, SelectAt at,
                            TrainedOn trained_on = TrainedOn::full);

/// Synthetic-protocol hyper-parameter search: global argmin of synthetic
/// error over every fully-trained (arch, run, epoch). Ties: lexicographic
/// arch_id, then run_id, then epoch.
SelectionOutcome select_hps_synthetic(const EvalTraceSet& traces);

/// What the standard holdout protocol can deliver: an architecture (picked
/// by mean final-epoch validation error over subset-trained runs) and the
/// expected error of retraining it, scored as the mean final-epoch test
/// error of that architecture's fully-trained runs.
struct StandardOutcome {
    std::string arch_id;
    double subset_val_mean = 0.0;  ///< the selection score
    double expected_error = 0.0;   ///< mean full-data test error of the arch
    int runs_scored = 0;           ///< full runs behind expected_error
};

StandardOutcome select_hps_standard(const EvalTraceSet& traces);

struct CompareOptions {
    /// Score the standard protocol with one seeded random full run instead
    /// of the mean over runs.
    bool standard_single_run = false;
};

/// Side-by-side comparison of the three selection protocols on one trace set.
struct ProtocolComparison {
    SelectionOutcome synthetic;       ///< HPS by synthetic error
    double synthetic_test_error = 0.0;
    StandardOutcome standard;
    double random_mean = 0.0;  ///< mean final-epoch test error, all full runs
    double random_std = 0.0;   ///< population std of the same
};

ProtocolComparison compare_protocols(const EvalTraceSet& traces, std::uint64_t seed,
                                     const CompareOptions& opts = {});

/// The four aggregates of the early-stopping / seed-selection comparison:
/// all means are of test error over fully-trained runs.
struct EsRssSummary {
    double baseline = 0.0;  ///< last epoch, all runs
    double es = 0.0;        ///< per-run best synthetic epoch
    double rss = 0.0;       ///< per-arch synthetic-selected run, last epoch
    double es_rss = 0.0;    ///< per-arch synthetic-selected (run, epoch)
    int archs = 0;
    int runs = 0;
};

EsRssSummary es_rss_summary(const EvalTraceSet& traces);

}  // namespace rankguard
