#include "rankguard/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rankguard/rng.hpp"

namespace rankguard {

std::string to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
        case Split::synthetic: return "synthetic";
    }
    return "?";
}

std::string to_string(TrainedOn t) { return t == TrainedOn::full ? "full" : "subset"; }

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    if (s == "synthetic") return Split::synthetic;
    throw SchemaError("unknown split '" + s + "', expected train|val|test|synthetic");
}

TrainedOn trained_on_from_string(const std::string& s) {
    if (s == "full") return TrainedOn::full;
    if (s == "subset") return TrainedOn::subset;
    throw SchemaError("unknown trained_on '" + s + "', expected full|subset");
}

SelectAt select_at_from_string(const std::string& s) {
    if (s == "last") return SelectAt::last_epoch;
    if (s == "best") return SelectAt::best_epoch;
    throw SchemaError("unknown selection point '" + s + "', expected last|best");
}

std::string to_string(SelectAt at) { return at == SelectAt::last_epoch ? "last" : "best"; }

void EvalRecord::validate() const {
    if (arch_id.empty()) throw SchemaError("arch_id must not be empty");
    if (run_id < 0) throw SchemaError("run_id must be non-negative, got " + std::to_string(run_id));
    if (epoch < 0) throw SchemaError("epoch must be non-negative, got " + std::to_string(epoch));
    if (!std::isfinite(error) || error < 0.0 || error > 1.0)
        throw SchemaError("error must be finite and in [0,1], got " + std::to_string(error));
}

EvalTraceSet::EvalTraceSet(std::vector<EvalRecord> records,
                           std::map<std::string, std::string> metadata)
    : records_(std::move(records)), metadata_(std::move(metadata)) {
    if (records_.empty()) throw EmptyInputError("trace set has no records");

    for (const EvalRecord& rec : records_) {
        rec.validate();
        std::vector<double>& curve =
            runs_[RunKey{rec.arch_id, rec.run_id, rec.trained_on}].curve(rec.split);
        const std::size_t e = static_cast<std::size_t>(rec.epoch);
        if (curve.size() <= e) curve.resize(e + 1, std::numeric_limits<double>::quiet_NaN());
        if (!std::isnan(curve[e]))
            throw SchemaError("duplicate record for (" + rec.arch_id + ", run " +
                              std::to_string(rec.run_id) + ", epoch " + std::to_string(rec.epoch) +
                              ", " + to_string(rec.split) + ", " + to_string(rec.trained_on) + ")");
        curve[e] = rec.error;
    }

    // Every reported split must cover epochs 0..max without holes.
    for (const auto& [key, curves] : runs_) {
        for (Split s : kAllSplits) {
            const std::vector<double>& curve = curves.curve(s);
            for (std::size_t e = 0; e < curve.size(); ++e) {
                if (std::isnan(curve[e]))
                    throw SchemaError("(" + key.arch_id + ", run " + std::to_string(key.run_id) +
                                      ", " + to_string(key.trained_on) + ", " + to_string(s) +
                                      ") is missing epoch " + std::to_string(e) + " of 0.." +
                                      std::to_string(curve.size() - 1));
            }
        }
    }
}

const std::vector<double>* EvalTraceSet::curve(const std::string& arch_id, int run_id,
                                               TrainedOn trained_on, Split split) const {
    const auto it = runs_.find(RunKey{arch_id, run_id, trained_on});
    if (it == runs_.end()) return nullptr;
    const std::vector<double>& c = it->second.curve(split);
    return c.empty() ? nullptr : &c;
}

std::vector<std::string> EvalTraceSet::arch_ids(TrainedOn trained_on) const {
    std::vector<std::string> out;
    for (const auto& [key, curves] : runs_)
        if (key.trained_on == trained_on && (out.empty() || out.back() != key.arch_id))
            out.push_back(key.arch_id);
    return out;  // map order keeps this sorted and unique
}

std::vector<int> EvalTraceSet::run_ids(const std::string& arch_id, TrainedOn trained_on) const {
    std::vector<int> out;
    for (const auto& [key, curves] : runs_)
        if (key.trained_on == trained_on && key.arch_id == arch_id) out.push_back(key.run_id);
    return out;
}

namespace {

/// All splits present at one coordinate, as a name -> error map.
std::map<std::string, double> errors_at(const EvalTraceSet& traces, const std::string& arch_id,
                                        int run_id, TrainedOn trained_on, int epoch) {
    std::map<std::string, double> out;
    for (Split s : kAllSplits) {
        const std::vector<double>* c = traces.curve(arch_id, run_id, trained_on, s);
        if (c && static_cast<std::size_t>(epoch) < c->size())
            out[to_string(s)] = (*c)[static_cast<std::size_t>(epoch)];
    }
    return out;
}

SelectionOutcome make_outcome(const EvalTraceSet& traces, const std::string& arch_id, int run_id,
                              TrainedOn trained_on, int epoch, double selected_error) {
    SelectionOutcome out;
    out.arch_id = arch_id;
    out.run_id = run_id;
    out.epoch = epoch;
    out.selected_error = selected_error;
    out.report_errors = errors_at(traces, arch_id, run_id, trained_on, epoch);
    return out;
}

const std::vector<double>& require_curve(const EvalTraceSet& traces, const std::string& arch_id,
                                         int run_id, TrainedOn trained_on, Split split) {
    const std::vector<double>* c = traces.curve(arch_id, run_id, trained_on, split);
    if (!c)
        throw NotFoundError("no " + to_string(split) + " data for (" + arch_id + ", run " +
                            std::to_string(run_id) + ", " + to_string(trained_on) + ")");
    return *c;
}

}  // namespace

SelectionOutcome select_es(const EvalTraceSet& traces, const std::string& arch_id, int run_id,
                           Split select_split, TrainedOn trained_on) {
    const std::vector<double>& curve = require_curve(traces, arch_id, run_id, trained_on, select_split);
    std::size_t best = 0;
    for (std::size_t e = 1; e < curve.size(); ++e)
        if (curve[e] < curve[best]) best = e;  // strict: ties keep the earliest epoch
    return make_outcome(traces, arch_id, run_id, trained_on, static_cast<int>(best), curve[best]);
}

SelectionOutcome select_rss(const EvalTraceSet& traces, const std::string& arch_id,
                            Split select_split, SelectAt at, TrainedOn trained_on) {
    const std::vector<int> runs = traces.run_ids(arch_id, trained_on);
    if (runs.empty())
        throw NotFoundError("no " + to_string(trained_on) + " runs for architecture '" + arch_id +
                            "'");

    bool found = false;
    int best_run = 0;
    std::size_t best_epoch = 0;
    double best_error = std::numeric_limits<double>::infinity();
    for (int run : runs) {  // ascending: strict < keeps the smallest run_id on ties
        const std::vector<double>* curve = traces.curve(arch_id, run, trained_on, select_split);
        if (!curve) continue;
        found = true;
        if (at == SelectAt::last_epoch) {
            const std::size_t e = curve->size() - 1;
            if ((*curve)[e] < best_error) {
                best_error = (*curve)[e];
                best_run = run;
                best_epoch = e;
            }
        } else {
            for (std::size_t e = 0; e < curve->size(); ++e) {
                if ((*curve)[e] < best_error) {
                    best_error = (*curve)[e];
                    best_run = run;
                    best_epoch = e;
                }
            }
        }
    }
    if (!found)
        throw NotFoundError("no " + to_string(select_split) + " data for architecture '" +
                            arch_id + "' (" + to_string(trained_on) + ")");
    return make_outcome(traces, arch_id, best_run, trained_on, static_cast<int>(best_epoch),
                        best_error);
}

SelectionOutcome select_hps_synthetic(const EvalTraceSet& traces) {
    bool found = false;
    RunKey best_key;
    std::size_t best_epoch = 0;
    double best_error = std::numeric_limits<double>::infinity();
    // runs() iterates in key order (arch lexicographic, then run), so strict <
    // implements the documented tie-break, with the epoch scan innermost.
    for (const auto& [key, curves] : traces.runs()) {
        if (key.trained_on != TrainedOn::full) continue;
        const std::vector<double>& curve = curves.curve(Split::synthetic);
        for (std::size_t e = 0; e < curve.size(); ++e) {
            found = true;
            if (curve[e] < best_error) {
                best_error = curve[e];
                best_key = key;
                best_epoch = e;
            }
        }
    }
    if (!found) throw NotFoundError("no fully-trained synthetic-split records in trace set");
    return make_outcome(traces, best_key.arch_id, best_key.run_id, TrainedOn::full,
                        static_cast<int>(best_epoch), best_error);
}

StandardOutcome select_hps_standard(const EvalTraceSet& traces) {
    // Step 1-2: score each architecture by its subset-trained runs' mean
    // final-epoch validation error; smaller wins, lexicographic tie-break.
    bool found = false;
    std::string best_arch;
    double best_score = std::numeric_limits<double>::infinity();
    for (const std::string& arch : traces.arch_ids(TrainedOn::subset)) {
        double sum = 0.0;
        int count = 0;
        for (int run : traces.run_ids(arch, TrainedOn::subset)) {
            const std::vector<double>* val = traces.curve(arch, run, TrainedOn::subset, Split::val);
            if (!val) continue;
            sum += val->back();
            ++count;
        }
        if (count == 0) continue;
        const double score = sum / count;
        if (!found || score < best_score) {
            found = true;
            best_score = score;
            best_arch = arch;
        }
    }
    if (!found) throw NotFoundError("no subset-trained val-split records in trace set");

    // Step 3 stand-in: the protocol retrains the winner on the full data, so
    // its comparison value is the mean full-data test error of that
    // architecture, not any single run's.
    StandardOutcome out;
    out.arch_id = best_arch;
    out.subset_val_mean = best_score;
    double sum = 0.0;
    for (int run : traces.run_ids(best_arch, TrainedOn::full)) {
        sum += require_curve(traces, best_arch, run, TrainedOn::full, Split::test).back();
        ++out.runs_scored;
    }
    if (out.runs_scored == 0)
        throw NotFoundError("no fully-trained test-split records for selected architecture '" +
                            best_arch + "'");
    out.expected_error = sum / out.runs_scored;
    return out;
}

ProtocolComparison compare_protocols(const EvalTraceSet& traces, std::uint64_t seed,
                                     const CompareOptions& opts) {
    ProtocolComparison cmp;
    cmp.synthetic = select_hps_synthetic(traces);
    const auto it = cmp.synthetic.report_errors.find("test");
    if (it == cmp.synthetic.report_errors.end())
        throw NotFoundError("synthetic-selected coordinate has no test-split error");
    cmp.synthetic_test_error = it->second;

    cmp.standard = select_hps_standard(traces);
    if (opts.standard_single_run) {
        // Mimic an actual single retraining: one seeded draw among the
        // winner's fully-trained runs.
        const std::vector<int> runs = traces.run_ids(cmp.standard.arch_id, TrainedOn::full);
        Rng rng(derive_seed(seed, {0x5e1ec7ull}));
        const int run = runs[static_cast<std::size_t>(rng.uniform_int(runs.size()))];
        cmp.standard.expected_error =
            require_curve(traces, cmp.standard.arch_id, run, TrainedOn::full, Split::test).back();
        cmp.standard.runs_scored = 1;
    }

    // Random baseline: expected error of picking any fully-trained model at
    // its last epoch, uniformly.
    double sum = 0.0, sum2 = 0.0;
    int count = 0;
    for (const auto& [key, curves] : traces.runs()) {
        if (key.trained_on != TrainedOn::full) continue;
        const std::vector<double>& test = curves.curve(Split::test);
        if (test.empty()) continue;
        sum += test.back();
        sum2 += test.back() * test.back();
        ++count;
    }
    if (count == 0) throw NotFoundError("no fully-trained test-split records in trace set");
    cmp.random_mean = sum / count;
    const double var = std::max(0.0, sum2 / count - cmp.random_mean * cmp.random_mean);
    cmp.random_std = std::sqrt(var);
    return cmp;
}

EsRssSummary es_rss_summary(const EvalTraceSet& traces) {
    EsRssSummary out;
    const std::vector<std::string> archs = traces.arch_ids(TrainedOn::full);
    if (archs.empty()) throw NotFoundError("no fully-trained runs in trace set");

    double baseline_sum = 0.0, es_sum = 0.0, rss_sum = 0.0, es_rss_sum = 0.0;
    for (const std::string& arch : archs) {
        for (int run : traces.run_ids(arch, TrainedOn::full)) {
            baseline_sum += require_curve(traces, arch, run, TrainedOn::full, Split::test).back();
            const SelectionOutcome es = select_es(traces, arch, run, Split::synthetic);
            const auto test_at_es = es.report_errors.find("test");
            if (test_at_es == es.report_errors.end())
                throw NotFoundError("no test error at (" + arch + ", run " + std::to_string(run) +
                                    ", epoch " + std::to_string(es.epoch) + ")");
            es_sum += test_at_es->second;
            ++out.runs;
        }
        const SelectionOutcome rss = select_rss(traces, arch, Split::synthetic, SelectAt::last_epoch);
        const SelectionOutcome es_rss = select_rss(traces, arch, Split::synthetic, SelectAt::best_epoch);
        for (const auto* sel : {&rss, &es_rss}) {
            if (!sel->report_errors.count("test"))
                throw NotFoundError("no test error at (" + arch + ", run " +
                                    std::to_string(sel->run_id) + ", epoch " +
                                    std::to_string(sel->epoch) + ")");
        }
        rss_sum += rss.report_errors.at("test");
        es_rss_sum += es_rss.report_errors.at("test");
        ++out.archs;
    }
    out.baseline = baseline_sum / out.runs;
    out.es = es_sum / out.runs;
    out.rss = rss_sum / out.archs;
    out.es_rss = es_rss_sum / out.archs;
    return out;
}

}  // namespace rankguard
