#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include "rankguard/divergence.hpp"
#include "rankguard/domain.hpp"
#include "rankguard/estimator.hpp"
#include "rankguard/rank.hpp"
#include "rankguard/selection.hpp"
#include "rankguard/verify.hpp"

namespace rankguard {

enum class TraceFormat { csv, json };

/// Format implied by a file name: .json means JSON, anything else CSV.
TraceFormat trace_format_for_path(const std::string& path);

// --- evaluation traces ------------------------------------------------------
//
// CSV dialect: comma-separated, no quoting (no field may contain a comma),
// UTF-8, '\n' line ends with an optional '\r', mandatory header
//   arch_id,run_id,epoch,split,trained_on,error
// The JSON form is an array of objects with the same field names. Parse
// errors carry the file name and the offending line (or JSON path) and field.

EvalTraceSet parse_traces(const std::string& path, TraceFormat format);
EvalTraceSet parse_traces(std::istream& in, TraceFormat format, const std::string& filename);
void write_traces(const EvalTraceSet& traces, std::ostream& out, TraceFormat format);
void write_traces(const EvalTraceSet& traces, const std::string& path, TraceFormat format);

// --- finite instances -------------------------------------------------------
//
// JSON document: {"n": .., "c": .., "mu_r": [..], "mu_s": [..], "f": [..],
// "hypotheses": [[..], ..]}. Integers round-trip exactly; reals are written
// with shortest-round-trip precision so parsing recovers them bit-for-bit.

FiniteInstance parse_instance(const std::string& path);
FiniteInstance parse_instance(std::istream& in, const std::string& filename);
void write_instance(const FiniteInstance& inst, std::ostream& out);
void write_instance(const FiniteInstance& inst, const std::string& path);

// --- feature sample sets ----------------------------------------------------
//
// CSV header: source,dim0,dim1,...  with source in {real, synthetic}.
// A file may mix both sources (the estimator splits them) or carry one.

struct SampleSetPair {
    FeatureSampleSet real;
    FeatureSampleSet synthetic;
};

SampleSetPair parse_sample_sets(const std::string& path);
SampleSetPair parse_sample_sets(std::istream& in, const std::string& filename);
void write_sample_sets(const SampleSetPair& sets, std::ostream& out);

// --- reports ----------------------------------------------------------------
//
// JSON reports are machine artifacts: deterministic field order, floats at
// shortest-round-trip precision (exact through a parse). Tables are for
// humans: floats shown with kDefaultTableDigits significant digits, or the
// RANKGUARD_REPORT_DIGITS env var when set.

inline constexpr int kDefaultTableDigits = 6;

/// Significant digits for table output; reads RANKGUARD_REPORT_DIGITS.
int report_table_digits();

/// One double at the table precision.
std::string format_table_value(double v);

/// One double at shortest-round-trip precision (parses back bit-for-bit).
std::string format_exact(double v);

std::string report_json(const VerificationReport& report);
std::string report_json(const FalsifyReport& report);
std::string report_json(const DivergenceReport& report);
std::string report_json(const EstimateReport& report);
std::string report_json(const RankReport& report);
std::string report_json(const SelectionOutcome& outcome);
std::string report_json(const StandardOutcome& outcome);
std::string report_json(const ProtocolComparison& cmp);
std::string report_json(const EsRssSummary& summary);

std::string report_table(const VerificationReport& report);
std::string report_table(const FalsifyReport& report);
std::string report_table(const DivergenceReport& report);
std::string report_table(const EstimateReport& report);
std::string report_table(const RankReport& report);
std::string report_table(const SelectionOutcome& outcome);
std::string report_table(const StandardOutcome& outcome);
std::string report_table(const ProtocolComparison& cmp);
std::string report_table(const EsRssSummary& summary);

/// Scatter pairs as CSV with header err_synthetic,err_real (column one is
/// the first split given to the rank analysis, column two the second).
void write_scatter_csv(const RankReport& report, std::ostream& out);

/// Writes text to a path, surfacing failures with the path in the message.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rankguard
