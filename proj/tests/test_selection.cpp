#include <doctest.h>

#include <cmath>

#include "rankguard/selection.hpp"

using namespace rankguard;

namespace {

/// Appends one run's per-epoch errors for a single split.
void add_curve(std::vector<EvalRecord>& out, const std::string& arch, int run, TrainedOn trained,
               Split split, std::initializer_list<double> errors) {
    int epoch = 0;
    for (double e : errors)
        out.push_back({arch, run, epoch++, split, trained, e});
}

/// Two-architecture fixture: full runs carry test + synthetic curves, each
/// run also has a subset duplicate reporting val.
EvalTraceSet fixture() {
    std::vector<EvalRecord> r;
    // arch a, run 0
    add_curve(r, "a", 0, TrainedOn::full, Split::synthetic, {0.5, 0.3, 0.4, 0.3});
    add_curve(r, "a", 0, TrainedOn::full, Split::test, {0.45, 0.35, 0.25, 0.20});
    add_curve(r, "a", 0, TrainedOn::subset, Split::val, {0.50, 0.40, 0.30, 0.28});
    // arch a, run 1
    add_curve(r, "a", 1, TrainedOn::full, Split::synthetic, {0.6, 0.5, 0.4, 0.2});
    add_curve(r, "a", 1, TrainedOn::full, Split::test, {0.50, 0.40, 0.30, 0.24});
    add_curve(r, "a", 1, TrainedOn::subset, Split::val, {0.55, 0.45, 0.35, 0.30});
    // arch b, run 0
    add_curve(r, "b", 0, TrainedOn::full, Split::synthetic, {0.7, 0.5, 0.3, 0.25});
    add_curve(r, "b", 0, TrainedOn::full, Split::test, {0.60, 0.45, 0.30, 0.26});
    add_curve(r, "b", 0, TrainedOn::subset, Split::val, {0.70, 0.50, 0.40, 0.36});
    return EvalTraceSet(std::move(r));
}

}  // namespace

TEST_CASE("split and trained_on names round-trip") {
    for (Split s : kAllSplits) CHECK(split_from_string(to_string(s)) == s);
    CHECK(trained_on_from_string("full") == TrainedOn::full);
    CHECK(trained_on_from_string("subset") == TrainedOn::subset);
    CHECK_THROWS_AS(split_from_string("holdout"), SchemaError);
    CHECK_THROWS_AS(trained_on_from_string("partial"), SchemaError);
    CHECK(select_at_from_string("last") == SelectAt::last_epoch);
    CHECK(select_at_from_string("best") == SelectAt::best_epoch);
    CHECK_THROWS_AS(select_at_from_string("first"), SchemaError);
}

TEST_CASE("EvalRecord validates its fields") {
    EvalRecord ok{"a", 0, 0, Split::test, TrainedOn::full, 0.5};
    CHECK_NOTHROW(ok.validate());
    EvalRecord bad = ok;
    bad.arch_id = "";
    CHECK_THROWS_AS(bad.validate(), SchemaError);
    bad = ok;
    bad.run_id = -1;
    CHECK_THROWS_AS(bad.validate(), SchemaError);
    bad = ok;
    bad.epoch = -2;
    CHECK_THROWS_AS(bad.validate(), SchemaError);
    bad = ok;
    bad.error = 1.5;
    CHECK_THROWS_AS(bad.validate(), SchemaError);
    bad = ok;
    bad.error = std::nan("");
    CHECK_THROWS_AS(bad.validate(), SchemaError);
}

TEST_CASE("EvalTraceSet rejects duplicates, gaps, and emptiness") {
    CHECK_THROWS_AS(EvalTraceSet(std::vector<EvalRecord>{}), EmptyInputError);

    std::vector<EvalRecord> dup;
    add_curve(dup, "a", 0, TrainedOn::full, Split::test, {0.5});
    dup.push_back(dup.front());
    CHECK_THROWS_AS(EvalTraceSet(std::move(dup)), SchemaError);

    std::vector<EvalRecord> gap;
    gap.push_back({"a", 0, 0, Split::test, TrainedOn::full, 0.5});
    gap.push_back({"a", 0, 2, Split::test, TrainedOn::full, 0.4});  // epoch 1 missing
    CHECK_THROWS_AS(EvalTraceSet(std::move(gap)), SchemaError);
}

TEST_CASE("EvalTraceSet indexes runs and preserves record order") {
    const EvalTraceSet t = fixture();
    CHECK(t.records().size() == 36);
    CHECK(t.records().front().error == 0.5);  // insertion order kept

    const std::vector<double>* syn = t.curve("a", 0, TrainedOn::full, Split::synthetic);
    REQUIRE(syn != nullptr);
    CHECK(*syn == std::vector<double>{0.5, 0.3, 0.4, 0.3});
    CHECK(t.curve("a", 0, TrainedOn::full, Split::val) == nullptr);
    CHECK(t.curve("zzz", 0, TrainedOn::full, Split::test) == nullptr);

    CHECK(t.arch_ids(TrainedOn::full) == std::vector<std::string>{"a", "b"});
    CHECK(t.run_ids("a", TrainedOn::full) == std::vector<int>{0, 1});
    CHECK(t.run_ids("a", TrainedOn::subset) == std::vector<int>{0, 1});
}

TEST_CASE("early stopping picks the first minimal epoch") {
    const EvalTraceSet t = fixture();
    const SelectionOutcome es = select_es(t, "a", 0, Split::synthetic);
    CHECK(es.arch_id == "a");
    CHECK(es.run_id == 0);
    CHECK(es.epoch == 1);  // 0.3 appears at epochs 1 and 3; the tie keeps epoch 1
    CHECK(es.selected_error == 0.3);
    CHECK(es.report_errors.at("test") == 0.35);
    CHECK(es.report_errors.at("synthetic") == 0.3);

    CHECK_THROWS_AS(select_es(t, "a", 9, Split::synthetic), NotFoundError);
    CHECK_THROWS_AS(select_es(t, "a", 0, Split::val), NotFoundError);  // full has no val
}

TEST_CASE("seed selection at the last epoch breaks ties toward smaller run id") {
    std::vector<EvalRecord> r;
    add_curve(r, "a", 0, TrainedOn::full, Split::synthetic, {0.9, 0.3});
    add_curve(r, "a", 0, TrainedOn::full, Split::test, {0.9, 0.31});
    add_curve(r, "a", 1, TrainedOn::full, Split::synthetic, {0.9, 0.3});  // ties run 0
    add_curve(r, "a", 1, TrainedOn::full, Split::test, {0.9, 0.29});
    add_curve(r, "a", 2, TrainedOn::full, Split::synthetic, {0.9, 0.5});
    add_curve(r, "a", 2, TrainedOn::full, Split::test, {0.9, 0.5});
    const EvalTraceSet t(std::move(r));

    const SelectionOutcome rss = select_rss(t, "a", Split::synthetic, SelectAt::last_epoch);
    CHECK(rss.run_id == 0);
    CHECK(rss.epoch == 1);
    CHECK(rss.selected_error == 0.3);
}

TEST_CASE("seed selection at the best epoch searches (run, epoch) jointly") {
    const EvalTraceSet t = fixture();
    // arch a: run 0 min synthetic 0.3 @1; run 1 min 0.2 @3 -> run 1 wins
    const SelectionOutcome rss = select_rss(t, "a", Split::synthetic, SelectAt::best_epoch);
    CHECK(rss.run_id == 1);
    CHECK(rss.epoch == 3);
    CHECK(rss.selected_error == 0.2);
    CHECK(rss.report_errors.at("test") == 0.24);

    // at last epoch instead: run 0 has 0.3, run 1 has 0.2 -> still run 1
    const SelectionOutcome last = select_rss(t, "a", Split::synthetic, SelectAt::last_epoch);
    CHECK(last.run_id == 1);
    CHECK(last.epoch == 3);

    CHECK_THROWS_AS(select_rss(t, "nope", Split::synthetic, SelectAt::last_epoch), NotFoundError);
}

TEST_CASE("synthetic-protocol search scans every full (arch, run, epoch)") {
    const EvalTraceSet t = fixture();
    // global synthetic minimum is 0.2 at (a, 1, 3)
    const SelectionOutcome hps = select_hps_synthetic(t);
    CHECK(hps.arch_id == "a");
    CHECK(hps.run_id == 1);
    CHECK(hps.epoch == 3);
    CHECK(hps.selected_error == 0.2);
    CHECK(hps.report_errors.at("test") == 0.24);
}

TEST_CASE("synthetic-protocol ties resolve lexicographically") {
    std::vector<EvalRecord> r;
    add_curve(r, "b", 0, TrainedOn::full, Split::synthetic, {0.2});
    add_curve(r, "a", 1, TrainedOn::full, Split::synthetic, {0.2});
    add_curve(r, "a", 0, TrainedOn::full, Split::synthetic, {0.2, 0.2});
    const EvalTraceSet t(std::move(r));
    const SelectionOutcome hps = select_hps_synthetic(t);
    CHECK(hps.arch_id == "a");
    CHECK(hps.run_id == 0);
    CHECK(hps.epoch == 0);
}

TEST_CASE("standard protocol averages subset val, scores full test") {
    const EvalTraceSet t = fixture();
    // arch a subset val finals: 0.28, 0.30 -> mean 0.29; arch b: 0.36
    const StandardOutcome std_sel = select_hps_standard(t);
    CHECK(std_sel.arch_id == "a");
    CHECK(std_sel.subset_val_mean == doctest::Approx(0.29).epsilon(1e-12));
    // arch a full test finals: 0.20, 0.24 -> mean 0.22
    CHECK(std_sel.expected_error == doctest::Approx(0.22).epsilon(1e-12));
    CHECK(std_sel.runs_scored == 2);
}

TEST_CASE("standard protocol needs both subset and full runs") {
    std::vector<EvalRecord> only_full;
    add_curve(only_full, "a", 0, TrainedOn::full, Split::test, {0.5});
    CHECK_THROWS_AS(select_hps_standard(EvalTraceSet(std::move(only_full))), NotFoundError);

    std::vector<EvalRecord> no_full_for_winner;
    add_curve(no_full_for_winner, "a", 0, TrainedOn::subset, Split::val, {0.1});
    add_curve(no_full_for_winner, "b", 0, TrainedOn::subset, Split::val, {0.9});
    add_curve(no_full_for_winner, "b", 0, TrainedOn::full, Split::test, {0.5});
    CHECK_THROWS_AS(select_hps_standard(EvalTraceSet(std::move(no_full_for_winner))),
                    NotFoundError);
}

TEST_CASE("protocol comparison wires the three columns together") {
    const EvalTraceSet t = fixture();
    const ProtocolComparison cmp = compare_protocols(t, 0);
    CHECK(cmp.synthetic.arch_id == "a");
    CHECK(cmp.synthetic_test_error == 0.24);
    CHECK(cmp.standard.arch_id == "a");
    CHECK(cmp.standard.expected_error == doctest::Approx(0.22).epsilon(1e-12));
    // full-run final test errors: 0.20, 0.24, 0.26
    const double mean = (0.20 + 0.24 + 0.26) / 3.0;
    CHECK(cmp.random_mean == doctest::Approx(mean).epsilon(1e-12));
    const double var =
        ((0.20 - mean) * (0.20 - mean) + (0.24 - mean) * (0.24 - mean) +
         (0.26 - mean) * (0.26 - mean)) /
        3.0;
    CHECK(cmp.random_std == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
}

TEST_CASE("single-run standard scoring is seed-deterministic") {
    const EvalTraceSet t = fixture();
    CompareOptions opts;
    opts.standard_single_run = true;
    const ProtocolComparison a = compare_protocols(t, 7, opts);
    const ProtocolComparison b = compare_protocols(t, 7, opts);
    CHECK(a.standard.expected_error == b.standard.expected_error);
    CHECK(a.standard.runs_scored == 1);
    // the score is one of the winner's full test finals
    const bool is_one_of =
        a.standard.expected_error == 0.20 || a.standard.expected_error == 0.24;
    CHECK(is_one_of);
}

TEST_CASE("es-rss summary aggregates the four policies") {
    const EvalTraceSet t = fixture();
    const EsRssSummary s = es_rss_summary(t);
    CHECK(s.archs == 2);
    CHECK(s.runs == 3);
    // Baseline: mean of final test errors (0.20 + 0.24 + 0.26) / 3
    CHECK(s.baseline == doctest::Approx((0.20 + 0.24 + 0.26) / 3).epsilon(1e-12));
    // ES per run: argmin synthetic -> epochs 1, 3, 3 -> test 0.35, 0.24, 0.26
    CHECK(s.es == doctest::Approx((0.35 + 0.24 + 0.26) / 3).epsilon(1e-12));
    // RSS per arch at last epoch: arch a picks run 1 (0.24), arch b run 0 (0.26)
    CHECK(s.rss == doctest::Approx((0.24 + 0.26) / 2).epsilon(1e-12));
    // ES+RSS per arch at best epoch: arch a (run 1, ep 3) test 0.24; arch b (run 0, ep 3) 0.26
    CHECK(s.es_rss == doctest::Approx((0.24 + 0.26) / 2).epsilon(1e-12));
}
