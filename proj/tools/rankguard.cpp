// rankguard: exact rank-preservation verification, divergence estimation, and
// synthetic-data model-selection protocols over evaluation traces.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankguard/divergence.hpp"
#include "rankguard/domain.hpp"
#include "rankguard/estimator.hpp"
#include "rankguard/io.hpp"
#include "rankguard/rank.hpp"
#include "rankguard/selection.hpp"
#include "rankguard/simulate.hpp"
#include "rankguard/verify.hpp"

namespace rg = rankguard;

namespace {

/// "A..B" (or a single "N" meaning N..N) -> [lo, hi].
std::pair<int, int> parse_range(const std::string& text, const std::string& flag) {
    const auto parse_end = [&](const std::string& part) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            return v;
        } catch (const std::exception&) {
            throw rg::InvalidConfigError(flag + ": expected an integer or A..B range, got '" +
                                         text + "'");
        }
    };
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos) {
        const int v = parse_end(text);
        return {v, v};
    }
    return {parse_end(text.substr(0, dots)), parse_end(text.substr(dots + 2))};
}

/// Human table to stdout; machine JSON to --out when given.
void emit(const std::string& table, const std::string& json, const std::string& out_path) {
    std::cout << table;
    if (!out_path.empty()) rg::write_text_file(out_path, json);
}

/// Final-epoch (or best-epoch) error of one split for every fully-trained
/// model instance, falling back to the subset-trained duplicate when a split
/// is only reported there (e.g. val).
struct InstanceErrors {
    std::vector<std::string> arch;
    std::vector<int> run;
    Eigen::VectorXd a;
    Eigen::VectorXd b;
};

InstanceErrors collect_instance_errors(const rg::EvalTraceSet& traces, rg::Split split_a,
                                       rg::Split split_b, rg::SelectAt at) {
    const auto pick = [&](const std::string& arch, int run, rg::Split split, double& out) {
        const std::vector<double>* curve = traces.curve(arch, run, rg::TrainedOn::full, split);
        if (!curve) curve = traces.curve(arch, run, rg::TrainedOn::subset, split);
        if (!curve) return false;
        if (at == rg::SelectAt::last_epoch) {
            out = curve->back();
        } else {
            out = *std::min_element(curve->begin(), curve->end());
        }
        return true;
    };

    std::vector<double> va, vb;
    InstanceErrors out;
    // runs() is sorted by (arch, run, trained_on); visit each (arch, run) once
    std::string last_arch;
    int last_run = -1;
    bool first = true;
    for (const auto& [key, curves] : traces.runs()) {
        if (!first && key.arch_id == last_arch && key.run_id == last_run) continue;
        first = false;
        last_arch = key.arch_id;
        last_run = key.run_id;
        double ea = 0.0, eb = 0.0;
        if (!pick(key.arch_id, key.run_id, split_a, ea)) continue;
        if (!pick(key.arch_id, key.run_id, split_b, eb)) continue;
        out.arch.push_back(key.arch_id);
        out.run.push_back(key.run_id);
        va.push_back(ea);
        vb.push_back(eb);
    }
    out.a = Eigen::Map<Eigen::VectorXd>(va.data(), static_cast<Eigen::Index>(va.size()));
    out.b = Eigen::Map<Eigen::VectorXd>(vb.data(), static_cast<Eigen::Index>(vb.size()));
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{
        "Model selection with synthetic data: exact rank-preservation checks on finite "
        "domains, sample-based divergence estimation, and selection protocols over "
        "evaluation traces."};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    // Shared storage. Each subcommand registers only the knobs it uses.
    std::string traces_path, out_path, scatter_path, instance_path;
    std::string samples_path, real_path, synth_path;
    std::string domain_range = "2..64", class_range = "2..10";
    std::string split_a = "synthetic", split_b = "test", select_split = "synthetic";
    std::string at_text = "last", format_text;
    std::string arch_id;
    std::uint64_t seed = 0;
    std::size_t instances = 10000;
    int run_id = 0;
    int workers = 0;
    double lambda = rg::InstanceGenConfig{}.lambda;
    double accuracy = rg::InstanceGenConfig{}.hypothesis_accuracy;
    int hypotheses = rg::InstanceGenConfig{}.hypotheses_per_instance;
    double trigger_floor = 0.01;
    std::vector<std::size_t> pair_flag;
    rg::EstimatorParams est;
    rg::TraceGenConfig sim;
    bool single_run = false;

    const auto add_gen_flags = [&](CLI::App* cmd) {
        cmd->add_option("--domain-size", domain_range, "domain size range A..B");
        cmd->add_option("--classes", class_range, "class count range A..B");
        cmd->add_option("--lambda", lambda, "synthetic-measure mixing weight in [0,1]")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--accuracy", accuracy, "per-point hypothesis accuracy in [0,1]")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--hypotheses", hypotheses, "hypotheses per instance");
    };
    const auto gen_config = [&]() {
        rg::InstanceGenConfig cfg;
        std::tie(cfg.domain_size_min, cfg.domain_size_max) =
            parse_range(domain_range, "--domain-size");
        std::tie(cfg.num_classes_min, cfg.num_classes_max) = parse_range(class_range, "--classes");
        cfg.lambda = lambda;
        cfg.hypothesis_accuracy = accuracy;
        cfg.hypotheses_per_instance = hypotheses;
        return cfg;
    };

    // verify -----------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand(
        "verify", "brute-force the rank-preservation statement on random instances");
    verify_cmd->add_option("--instances", instances, "instances to generate");
    add_gen_flags(verify_cmd);
    verify_cmd->add_option("--seed", seed, "RNG seed");
    verify_cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
    verify_cmd->add_option("--trigger-floor", trigger_floor,
                           "minimum fraction of pairs that must trigger the condition");
    verify_cmd->add_option("--out", out_path, "write the JSON report here");

    // falsify ----------------------------------------------------------------
    auto* falsify_cmd = app.add_subcommand(
        "falsify", "hunt for rank flips: synthetic says no-worse, real says worse");
    falsify_cmd->add_option("--instances", instances, "instances to scan");
    add_gen_flags(falsify_cmd);
    falsify_cmd->add_option("--seed", seed, "RNG seed");
    falsify_cmd->add_option("--out", out_path, "write the JSON report here");

    // tv exact / tv estimate --------------------------------------------------
    auto* tv_cmd = app.add_subcommand("tv", "L1 divergence between real and synthetic");
    tv_cmd->require_subcommand(1);
    auto* tv_exact = tv_cmd->add_subcommand("exact", "exact divergence of a stored instance");
    tv_exact->add_option("--instance", instance_path, "instance JSON file")->required();
    tv_exact->add_option("--pair", pair_flag,
                         "hypothesis pair i j: also report the divergence restricted to "
                         "their disagreement set")
        ->expected(2);
    tv_exact->add_option("--out", out_path, "write the JSON report here");

    auto* tv_estimate = tv_cmd->add_subcommand(
        "estimate", "cluster-histogram estimate from feature samples");
    tv_estimate->add_option("--samples", samples_path,
                            "combined sample CSV (source,dim0,...); may hold both sources");
    tv_estimate->add_option("--real", real_path, "per-source sample CSV with the real rows");
    tv_estimate->add_option("--synthetic", synth_path,
                            "per-source sample CSV with the synthetic rows");
    tv_estimate->add_option("--clusters", est.clusters, "k-means cluster count");
    tv_estimate->add_option("--restarts", est.restarts, "independent clusterings to average");
    tv_estimate->add_option("--max-iter", est.kmeans.max_iter, "k-means iteration cap");
    tv_estimate->add_option("--tol", est.kmeans.tol, "k-means centroid-movement tolerance");
    tv_estimate->add_option("--seed", seed, "RNG seed");
    tv_estimate->add_option("--out", out_path, "write the JSON report here");

    // rank -------------------------------------------------------------------
    auto* rank_cmd = app.add_subcommand(
        "rank", "Spearman rank correlation between two splits over model instances");
    rank_cmd->add_option("--traces", traces_path, "evaluation trace file (CSV or JSON)")
        ->required();
    rank_cmd->add_option("--split-a", split_a, "first split (scatter column 1)");
    rank_cmd->add_option("--split-b", split_b, "second split (scatter column 2)");
    rank_cmd->add_option("--at", at_text, "compare errors at the last or best epoch")
        ->check(CLI::IsMember({"last", "best"}));
    rank_cmd->add_option("--scatter", scatter_path, "write a scatter CSV here");
    rank_cmd->add_option("--out", out_path, "write the JSON report here");

    // select -----------------------------------------------------------------
    auto* select_cmd = app.add_subcommand("select", "run one selection scenario");
    select_cmd->require_subcommand(1);
    auto* sel_es = select_cmd->add_subcommand("es", "early stopping within one run");
    sel_es->add_option("--traces", traces_path, "evaluation trace file")->required();
    sel_es->add_option("--arch", arch_id, "architecture id")->required();
    sel_es->add_option("--run", run_id, "run id")->required();
    sel_es->add_option("--split", select_split, "selection split");
    sel_es->add_option("--out", out_path, "write the JSON report here");

    auto* sel_rss = select_cmd->add_subcommand("rss", "seed selection among runs of one arch");
    sel_rss->add_option("--traces", traces_path, "evaluation trace file")->required();
    sel_rss->add_option("--arch", arch_id, "architecture id")->required();
    sel_rss->add_option("--split", select_split, "selection split");
    sel_rss->add_option("--at", at_text, "select at each run's last epoch or its best")
        ->check(CLI::IsMember({"last", "best"}));
    sel_rss->add_option("--out", out_path, "write the JSON report here");

    auto* sel_es_rss = select_cmd->add_subcommand(
        "es-rss", "joint seed + epoch selection (rss at the best epoch)");
    sel_es_rss->add_option("--traces", traces_path, "evaluation trace file")->required();
    sel_es_rss->add_option("--arch", arch_id, "architecture id")->required();
    sel_es_rss->add_option("--split", select_split, "selection split");
    sel_es_rss->add_option("--out", out_path, "write the JSON report here");

    auto* sel_hps_syn = select_cmd->add_subcommand(
        "hps-syn", "synthetic-protocol search over all (arch, run, epoch)");
    sel_hps_syn->add_option("--traces", traces_path, "evaluation trace file")->required();
    sel_hps_syn->add_option("--out", out_path, "write the JSON report here");

    auto* sel_hps_std = select_cmd->add_subcommand(
        "hps-std", "standard holdout protocol (subset val mean, full retrain)");
    sel_hps_std->add_option("--traces", traces_path, "evaluation trace file")->required();
    sel_hps_std->add_option("--out", out_path, "write the JSON report here");

    // summarize ----------------------------------------------------------------
    auto* summarize_cmd = app.add_subcommand("summarize", "aggregate tables over a trace set");
    summarize_cmd->require_subcommand(1);
    auto* sum_es_rss = summarize_cmd->add_subcommand(
        "es-rss", "Baseline / ES / RSS / ES+RSS mean test errors");
    sum_es_rss->add_option("--traces", traces_path, "evaluation trace file")->required();
    sum_es_rss->add_option("--out", out_path, "write the JSON report here");

    auto* sum_protocols = summarize_cmd->add_subcommand(
        "protocols", "synthetic / standard / random-baseline test errors");
    sum_protocols->add_option("--traces", traces_path, "evaluation trace file")->required();
    sum_protocols->add_option("--seed", seed, "seed for --single-run scoring");
    sum_protocols->add_flag("--single-run", single_run,
                            "score the standard protocol with one seeded run instead of the mean");
    sum_protocols->add_option("--out", out_path, "write the JSON report here");

    // simulate -----------------------------------------------------------------
    auto* simulate_cmd = app.add_subcommand("simulate", "seeded generators");
    simulate_cmd->require_subcommand(1);
    auto* sim_traces = simulate_cmd->add_subcommand("traces", "evaluation-trace simulator");
    sim_traces->add_option("--archs", sim.num_archs, "architectures");
    sim_traces->add_option("--runs", sim.runs_per_arch, "runs per architecture");
    sim_traces->add_option("--epochs", sim.epochs, "epochs per run");
    sim_traces->add_option("--rho", sim.rho, "target synthetic-real rank correlation in [-1,1]");
    sim_traces->add_option("--floor-test", sim.floor_test, "asymptotic test error");
    sim_traces->add_option("--arch-spread", sim.arch_spread, "arch quality spread (stddev)");
    sim_traces->add_option("--run-spread", sim.run_spread, "run quality spread (stddev)");
    sim_traces->add_option("--epoch-noise", sim.epoch_noise, "per-epoch noise (stddev)");
    sim_traces->add_option("--synth-bias", sim.synth_bias, "constant synthetic-split offset");
    sim_traces->add_option("--synth-noise", sim.synth_noise, "synthetic per-epoch noise (stddev)");
    sim_traces->add_option("--subset-penalty", sim.subset_penalty,
                           "extra error of subset-trained duplicates");
    sim_traces->add_option("--curve-amp", sim.curve_amp, "initial error-curve amplitude");
    sim_traces->add_option("--curve-tau", sim.curve_tau, "error-curve decay constant (epochs)");
    sim_traces->add_option("--seed", sim.seed, "RNG seed");
    sim_traces->add_option("--out", out_path, "write traces here (.json for JSON, else CSV)");
    sim_traces->add_option("--format", format_text, "force csv or json output")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* sim_instance = simulate_cmd->add_subcommand("instance", "finite-instance generator");
    add_gen_flags(sim_instance);
    sim_instance->add_option("--seed", seed, "RNG seed");
    sim_instance->add_option("--out", out_path, "write the instance JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    if (verify_cmd->parsed()) {
        rg::VerifyOptions opts;
        opts.num_instances = instances;
        opts.seed = seed;
        opts.workers = workers;
        opts.trigger_floor = trigger_floor;
        const rg::VerificationReport report = rg::verify_batch(gen_config(), opts);
        emit(rg::report_table(report), rg::report_json(report), out_path);
        return report.clean() ? 0 : 1;
    }

    if (falsify_cmd->parsed()) {
        const rg::FalsifyReport report = rg::falsify_converse(gen_config(), instances, seed);
        emit(rg::report_table(report), rg::report_json(report), out_path);
        return 0;
    }

    if (tv_exact->parsed()) {
        const rg::FiniteInstance inst = rg::parse_instance(instance_path);
        rg::DivergenceReport report;
        if (!pair_flag.empty()) {
            const rg::TheoremVerdict v = rg::check_pair(inst, pair_flag[0], pair_flag[1]);
            report.full_l1 = v.delta_full;
            report.restricted_l1 = v.delta_restricted;
        } else {
            report = rg::divergence_report(inst.mu_r, inst.mu_s);
        }
        emit(rg::report_table(report), rg::report_json(report), out_path);
        return 0;
    }

    if (tv_estimate->parsed()) {
        rg::FeatureSampleSet real, synth;
        if (!samples_path.empty()) {
            if (!real_path.empty() || !synth_path.empty())
                throw rg::InvalidConfigError("--samples excludes --real/--synthetic");
            rg::SampleSetPair sets = rg::parse_sample_sets(samples_path);
            real = std::move(sets.real);
            synth = std::move(sets.synthetic);
        } else {
            if (real_path.empty() || synth_path.empty())
                throw rg::InvalidConfigError(
                    "tv estimate needs --samples, or both --real and --synthetic");
            rg::SampleSetPair rs = rg::parse_sample_sets(real_path);
            if (rs.synthetic.count() > 0)
                throw rg::SchemaError(real_path +
                                      ": file given as --real contains synthetic rows");
            rg::SampleSetPair ss = rg::parse_sample_sets(synth_path);
            if (ss.real.count() > 0)
                throw rg::SchemaError(synth_path +
                                      ": file given as --synthetic contains real rows");
            real = std::move(rs.real);
            synth = std::move(ss.synthetic);
        }
        rg::EstimateReport report;
        report.estimate = rg::estimate_l1(real, synth, seed, est);
        report.clusters = est.clusters;
        report.restarts = est.restarts;
        report.seed = seed;
        report.real_count = real.count();
        report.synth_count = synth.count();
        report.dim = real.dim();
        emit(rg::report_table(report), rg::report_json(report), out_path);
        return 0;
    }

    if (rank_cmd->parsed()) {
        const rg::EvalTraceSet traces =
            rg::parse_traces(traces_path, rg::trace_format_for_path(traces_path));
        const InstanceErrors errs =
            collect_instance_errors(traces, rg::split_from_string(split_a),
                                    rg::split_from_string(split_b),
                                    rg::select_at_from_string(at_text));
        if (errs.a.size() < 2)
            throw rg::EmptyInputError("fewer than 2 model instances report both '" + split_a +
                                      "' and '" + split_b + "'");
        const rg::RankReport report = rg::rank_report(errs.a, errs.b);
        if (!scatter_path.empty()) {
            std::ostringstream buffer;
            rg::write_scatter_csv(report, buffer);
            rg::write_text_file(scatter_path, buffer.str());
        }
        emit(rg::report_table(report), rg::report_json(report), out_path);
        return 0;
    }

    if (sel_es->parsed() || sel_rss->parsed() || sel_es_rss->parsed() || sel_hps_syn->parsed() ||
        sel_hps_std->parsed()) {
        const rg::EvalTraceSet traces =
            rg::parse_traces(traces_path, rg::trace_format_for_path(traces_path));
        if (sel_hps_std->parsed()) {
            const rg::StandardOutcome outcome = rg::select_hps_standard(traces);
            emit(rg::report_table(outcome), rg::report_json(outcome), out_path);
            return 0;
        }
        rg::SelectionOutcome outcome;
        if (sel_es->parsed()) {
            outcome = rg::select_es(traces, arch_id, run_id, rg::split_from_string(select_split));
        } else if (sel_rss->parsed()) {
            outcome = rg::select_rss(traces, arch_id, rg::split_from_string(select_split),
                                     rg::select_at_from_string(at_text));
        } else if (sel_es_rss->parsed()) {
            outcome = rg::select_rss(traces, arch_id, rg::split_from_string(select_split),
                                     rg::SelectAt::best_epoch);
        } else {
            outcome = rg::select_hps_synthetic(traces);
        }
        emit(rg::report_table(outcome), rg::report_json(outcome), out_path);
        return 0;
    }

    if (sum_es_rss->parsed()) {
        const rg::EvalTraceSet traces =
            rg::parse_traces(traces_path, rg::trace_format_for_path(traces_path));
        const rg::EsRssSummary summary = rg::es_rss_summary(traces);
        emit(rg::report_table(summary), rg::report_json(summary), out_path);
        return 0;
    }

    if (sum_protocols->parsed()) {
        const rg::EvalTraceSet traces =
            rg::parse_traces(traces_path, rg::trace_format_for_path(traces_path));
        rg::CompareOptions opts;
        opts.standard_single_run = single_run;
        const rg::ProtocolComparison cmp = rg::compare_protocols(traces, seed, opts);
        emit(rg::report_table(cmp), rg::report_json(cmp), out_path);
        return 0;
    }

    if (sim_traces->parsed()) {
        const rg::EvalTraceSet traces = rg::generate_traces(sim);
        rg::TraceFormat format = out_path.empty() ? rg::TraceFormat::csv
                                                  : rg::trace_format_for_path(out_path);
        if (!format_text.empty())
            format = format_text == "json" ? rg::TraceFormat::json : rg::TraceFormat::csv;
        if (out_path.empty()) {
            rg::write_traces(traces, std::cout, format);
        } else {
            rg::write_traces(traces, out_path, format);
        }
        return 0;
    }

    if (sim_instance->parsed()) {
        const rg::FiniteInstance inst = rg::generate_instance(gen_config(), seed);
        if (out_path.empty()) {
            rg::write_instance(inst, std::cout);
        } else {
            rg::write_instance(inst, out_path);
        }
        return 0;
    }

    std::cerr << app.help() << std::flush;
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const rankguard::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
