#include "rankguard/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace rankguard {

using ordered_json = nlohmann::ordered_json;

TraceFormat trace_format_for_path(const std::string& path) {
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0 ? TraceFormat::json
                                                                              : TraceFormat::csv;
}

// --- low-level text helpers --------------------------------------------------

namespace {

std::vector<std::string> split_on_comma(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

int parse_int_field(const std::string& text, const std::string& file, const std::string& location,
                    const std::string& field) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw SchemaError(file, location, field, "expected integer, found '" + text + "'");
    return value;
}

double parse_double_field(const std::string& text, const std::string& file,
                          const std::string& location, const std::string& field) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw SchemaError(file, location, field, "expected number, found '" + text + "'");
    return value;
}

/// Reads one line, stripping an optional trailing '\r'. Returns false at EOF.
bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open '" + path + "' for reading");
    return in;
}

}  // namespace

std::string format_exact(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

int report_table_digits() {
    const char* env = std::getenv("RANKGUARD_REPORT_DIGITS");
    if (!env || *env == '\0') return kDefaultTableDigits;
    int digits = 0;
    const std::string text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), digits);
    if (ec != std::errc{} || ptr != text.data() + text.size() || digits < 1 || digits > 17)
        throw InvalidConfigError("RANKGUARD_REPORT_DIGITS must be an integer in [1,17], got '" +
                                 text + "'");
    return digits;
}

std::string format_table_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", report_table_digits(), v);
    return buf;
}

// --- evaluation traces -------------------------------------------------------

namespace {

constexpr const char* kTraceHeader = "arch_id,run_id,epoch,split,trained_on,error";

EvalTraceSet finish_trace_set(std::vector<EvalRecord> records, const std::string& filename) {
    try {
        return EvalTraceSet(std::move(records));
    } catch (const EmptyInputError& e) {
        throw EmptyInputError(filename + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(filename, "", "", e.what());
    }
}

EvalTraceSet parse_traces_csv(std::istream& in, const std::string& filename) {
    std::string line;
    if (!read_line(in, line)) throw EmptyInputError(filename + ": file is empty");
    if (line != kTraceHeader)
        throw SchemaError(filename, "line 1", "",
                          std::string("expected header '") + kTraceHeader + "', found '" + line +
                              "'");

    // key -> first line number, to cite both sides of a duplicate
    std::map<std::tuple<std::string, int, int, Split, TrainedOn>, std::size_t> seen;
    std::vector<EvalRecord> records;
    std::size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string location = "line " + std::to_string(line_no);
        const std::vector<std::string> fields = split_on_comma(line);
        if (fields.size() != 6)
            throw SchemaError(filename, location, "",
                              "expected 6 comma-separated fields, found " +
                                  std::to_string(fields.size()));

        EvalRecord rec;
        rec.arch_id = fields[0];
        rec.run_id = parse_int_field(fields[1], filename, location, "run_id");
        rec.epoch = parse_int_field(fields[2], filename, location, "epoch");
        try {
            rec.split = split_from_string(fields[3]);
        } catch (const SchemaError& e) {
            throw SchemaError(filename, location, "split", e.what());
        }
        try {
            rec.trained_on = trained_on_from_string(fields[4]);
        } catch (const SchemaError& e) {
            throw SchemaError(filename, location, "trained_on", e.what());
        }
        rec.error = parse_double_field(fields[5], filename, location, "error");
        try {
            rec.validate();
        } catch (const SchemaError& e) {
            throw SchemaError(filename, location, "", e.what());
        }

        const auto key = std::make_tuple(rec.arch_id, rec.run_id, rec.epoch, rec.split,
                                         rec.trained_on);
        const auto [it, inserted] = seen.emplace(key, line_no);
        if (!inserted)
            throw SchemaError(filename, location, "",
                              "duplicate record (arch_id=" + rec.arch_id +
                                  ", run_id=" + std::to_string(rec.run_id) +
                                  ", epoch=" + std::to_string(rec.epoch) + ", split=" +
                                  to_string(rec.split) + ", trained_on=" +
                                  to_string(rec.trained_on) + ") first seen at line " +
                                  std::to_string(it->second));
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw EmptyInputError(filename + ": no data rows after the header");
    return finish_trace_set(std::move(records), filename);
}

int require_json_int(const ordered_json& obj, const char* field, const std::string& file,
                     const std::string& location) {
    if (!obj.contains(field)) throw SchemaError(file, location, field, "field is missing");
    const auto& v = obj.at(field);
    if (!v.is_number_integer())
        throw SchemaError(file, location, field, "expected integer, found " + v.dump());
    return v.get<int>();
}

std::string require_json_string(const ordered_json& obj, const char* field,
                                const std::string& file, const std::string& location) {
    if (!obj.contains(field)) throw SchemaError(file, location, field, "field is missing");
    const auto& v = obj.at(field);
    if (!v.is_string())
        throw SchemaError(file, location, field, "expected string, found " + v.dump());
    return v.get<std::string>();
}

double require_json_number(const ordered_json& obj, const char* field, const std::string& file,
                           const std::string& location) {
    if (!obj.contains(field)) throw SchemaError(file, location, field, "field is missing");
    const auto& v = obj.at(field);
    if (!v.is_number())
        throw SchemaError(file, location, field, "expected number, found " + v.dump());
    return v.get<double>();
}

ordered_json parse_json_document(std::istream& in, const std::string& filename) {
    try {
        return ordered_json::parse(in);
    } catch (const ordered_json::parse_error& e) {
        throw SchemaError(filename, "byte " + std::to_string(e.byte), "", e.what());
    }
}

EvalTraceSet parse_traces_json(std::istream& in, const std::string& filename) {
    const ordered_json doc = parse_json_document(in, filename);
    if (!doc.is_array())
        throw SchemaError(filename, "$", "", "expected a top-level array of records");
    if (doc.empty()) throw EmptyInputError(filename + ": record array is empty");

    static const std::array<const char*, 6> kFields = {"arch_id", "run_id", "epoch",
                                                       "split",   "trained_on", "error"};
    std::vector<EvalRecord> records;
    records.reserve(doc.size());
    for (std::size_t idx = 0; idx < doc.size(); ++idx) {
        const std::string location = "records[" + std::to_string(idx) + "]";
        const ordered_json& obj = doc[idx];
        if (!obj.is_object())
            throw SchemaError(filename, location, "", "expected an object, found " + obj.dump());
        for (const auto& [key, value] : obj.items()) {
            if (std::find_if(kFields.begin(), kFields.end(),
                             [&](const char* f) { return key == f; }) == kFields.end())
                throw SchemaError(filename, location, key, "unknown field");
        }

        EvalRecord rec;
        rec.arch_id = require_json_string(obj, "arch_id", filename, location);
        rec.run_id = require_json_int(obj, "run_id", filename, location);
        rec.epoch = require_json_int(obj, "epoch", filename, location);
        const std::string split_text = require_json_string(obj, "split", filename, location);
        const std::string trained_text = require_json_string(obj, "trained_on", filename, location);
        try {
            rec.split = split_from_string(split_text);
        } catch (const SchemaError& e) {
            throw SchemaError(filename, location, "split", e.what());
        }
        try {
            rec.trained_on = trained_on_from_string(trained_text);
        } catch (const SchemaError& e) {
            throw SchemaError(filename, location, "trained_on", e.what());
        }
        rec.error = require_json_number(obj, "error", filename, location);
        try {
            rec.validate();
        } catch (const SchemaError& e) {
            throw SchemaError(filename, location, "", e.what());
        }
        records.push_back(std::move(rec));
    }
    return finish_trace_set(std::move(records), filename);
}

}  // namespace

EvalTraceSet parse_traces(std::istream& in, TraceFormat format, const std::string& filename) {
    return format == TraceFormat::csv ? parse_traces_csv(in, filename)
                                      : parse_traces_json(in, filename);
}

EvalTraceSet parse_traces(const std::string& path, TraceFormat format) {
    std::ifstream in = open_for_read(path);
    return parse_traces(in, format, path);
}

void write_traces(const EvalTraceSet& traces, std::ostream& out, TraceFormat format) {
    if (format == TraceFormat::csv) {
        out << kTraceHeader << '\n';
        for (const EvalRecord& rec : traces.records())
            out << rec.arch_id << ',' << rec.run_id << ',' << rec.epoch << ','
                << to_string(rec.split) << ',' << to_string(rec.trained_on) << ','
                << format_exact(rec.error) << '\n';
    } else {
        ordered_json doc = ordered_json::array();
        for (const EvalRecord& rec : traces.records()) {
            ordered_json obj;
            obj["arch_id"] = rec.arch_id;
            obj["run_id"] = rec.run_id;
            obj["epoch"] = rec.epoch;
            obj["split"] = to_string(rec.split);
            obj["trained_on"] = to_string(rec.trained_on);
            obj["error"] = rec.error;
            doc.push_back(std::move(obj));
        }
        out << doc.dump() << '\n';
    }
}

void write_traces(const EvalTraceSet& traces, const std::string& path, TraceFormat format) {
    std::ostringstream buffer;
    write_traces(traces, buffer, format);
    write_text_file(path, buffer.str());
}

// --- finite instances --------------------------------------------------------

FiniteInstance parse_instance(std::istream& in, const std::string& filename) {
    const ordered_json doc = parse_json_document(in, filename);
    if (!doc.is_object()) throw SchemaError(filename, "$", "", "expected a top-level object");
    static const std::array<const char*, 6> kFields = {"n", "c", "mu_r", "mu_s", "f", "hypotheses"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find_if(kFields.begin(), kFields.end(),
                         [&](const char* f) { return key == f; }) == kFields.end())
            throw SchemaError(filename, "$", key, "unknown field");
    }

    const int n = require_json_int(doc, "n", filename, "$");
    const int c = require_json_int(doc, "c", filename, "$");

    const auto read_real_array = [&](const char* field) {
        if (!doc.contains(field)) throw SchemaError(filename, "$", field, "field is missing");
        const ordered_json& arr = doc.at(field);
        if (!arr.is_array())
            throw SchemaError(filename, "$", field, "expected array, found " + arr.dump());
        if (arr.size() != static_cast<std::size_t>(n))
            throw SchemaError(filename, "$", field,
                              "expected " + std::to_string(n) + " masses, found " +
                                  std::to_string(arr.size()));
        Eigen::VectorXd v(n);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number())
                throw SchemaError(filename, field + ("[" + std::to_string(i) + "]"), "",
                                  "expected number, found " + arr[i].dump());
            v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
        }
        return v;
    };
    const auto read_label_array = [&](const ordered_json& arr, const std::string& field) {
        if (!arr.is_array())
            throw SchemaError(filename, "$", field, "expected array, found " + arr.dump());
        if (arr.size() != static_cast<std::size_t>(n))
            throw SchemaError(filename, "$", field,
                              "expected " + std::to_string(n) + " labels, found " +
                                  std::to_string(arr.size()));
        LabelMap labels(n);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number_integer())
                throw SchemaError(filename, field + ("[" + std::to_string(i) + "]"), "",
                                  "expected integer label, found " + arr[i].dump());
            labels[static_cast<Eigen::Index>(i)] = arr[i].get<int>();
        }
        return labels;
    };

    FiniteInstance inst;
    try {
        inst.domain = FiniteDomain(n, c);
    } catch (const SchemaError& e) {
        throw SchemaError(filename, "$", "n", e.what());
    }
    try {
        inst.mu_r = Pmf(read_real_array("mu_r"));
    } catch (const SchemaError& e) {
        if (!e.file().empty()) throw;
        throw SchemaError(filename, "$", "mu_r", e.what());
    }
    try {
        inst.mu_s = Pmf(read_real_array("mu_s"));
    } catch (const SchemaError& e) {
        if (!e.file().empty()) throw;
        throw SchemaError(filename, "$", "mu_s", e.what());
    }

    if (!doc.contains("f")) throw SchemaError(filename, "$", "f", "field is missing");
    inst.f = read_label_array(doc.at("f"), "f");
    if (!doc.contains("hypotheses"))
        throw SchemaError(filename, "$", "hypotheses", "field is missing");
    const ordered_json& hyps = doc.at("hypotheses");
    if (!hyps.is_array() || hyps.empty())
        throw SchemaError(filename, "$", "hypotheses", "expected a non-empty array of label arrays");
    for (std::size_t k = 0; k < hyps.size(); ++k)
        inst.hypotheses.push_back(
            read_label_array(hyps[k], "hypotheses[" + std::to_string(k) + "]"));

    try {
        inst.validate();
    } catch (const SchemaError& e) {
        throw SchemaError(filename, "$", "", e.what());
    }
    return inst;
}

FiniteInstance parse_instance(const std::string& path) {
    std::ifstream in = open_for_read(path);
    return parse_instance(in, path);
}

void write_instance(const FiniteInstance& inst, std::ostream& out) {
    ordered_json doc;
    doc["n"] = inst.domain.n;
    doc["c"] = inst.domain.c;
    doc["mu_r"] = std::vector<double>(inst.mu_r.masses().begin(), inst.mu_r.masses().end());
    doc["mu_s"] = std::vector<double>(inst.mu_s.masses().begin(), inst.mu_s.masses().end());
    doc["f"] = std::vector<int>(inst.f.begin(), inst.f.end());
    ordered_json hyps = ordered_json::array();
    for (const LabelMap& h : inst.hypotheses) hyps.push_back(std::vector<int>(h.begin(), h.end()));
    doc["hypotheses"] = std::move(hyps);
    out << doc.dump(2) << '\n';
}

void write_instance(const FiniteInstance& inst, const std::string& path) {
    std::ostringstream buffer;
    write_instance(inst, buffer);
    write_text_file(path, buffer.str());
}

// --- feature sample sets -----------------------------------------------------

SampleSetPair parse_sample_sets(std::istream& in, const std::string& filename) {
    std::string line;
    if (!read_line(in, line)) throw EmptyInputError(filename + ": file is empty");
    const std::vector<std::string> header = split_on_comma(line);
    if (header.size() < 2 || header[0] != "source")
        throw SchemaError(filename, "line 1", "",
                          "expected header 'source,dim0,dim1,...', found '" + line + "'");
    for (std::size_t d = 1; d < header.size(); ++d) {
        const std::string expected = "dim" + std::to_string(d - 1);
        if (header[d] != expected)
            throw SchemaError(filename, "line 1", "",
                              "expected column '" + expected + "', found '" + header[d] + "'");
    }
    const std::size_t dims = header.size() - 1;

    std::vector<std::vector<double>> rows[2];
    std::size_t line_no = 1;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string location = "line " + std::to_string(line_no);
        const std::vector<std::string> fields = split_on_comma(line);
        if (fields.size() != dims + 1)
            throw SchemaError(filename, location, "",
                              "expected " + std::to_string(dims + 1) + " fields, found " +
                                  std::to_string(fields.size()));
        SampleSource source;
        try {
            source = sample_source_from_string(fields[0]);
        } catch (const SchemaError& e) {
            throw SchemaError(filename, location, "source", e.what());
        }
        std::vector<double> row(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            row[d] = parse_double_field(fields[d + 1], filename, location,
                                        "dim" + std::to_string(d));
            if (!std::isfinite(row[d]))
                throw SchemaError(filename, location, "dim" + std::to_string(d),
                                  "coordinate must be finite");
        }
        rows[source == SampleSource::real ? 0 : 1].push_back(std::move(row));
    }
    if (rows[0].empty() && rows[1].empty())
        throw EmptyInputError(filename + ": no data rows after the header");

    SampleSetPair out;
    const auto fill = [&](FeatureSampleSet& set, const std::vector<std::vector<double>>& src,
                          SampleSource tag) {
        set.source = tag;
        set.points.resize(static_cast<Eigen::Index>(src.size()), static_cast<Eigen::Index>(dims));
        for (std::size_t i = 0; i < src.size(); ++i)
            for (std::size_t d = 0; d < dims; ++d)
                set.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = src[i][d];
    };
    fill(out.real, rows[0], SampleSource::real);
    fill(out.synthetic, rows[1], SampleSource::synthetic);
    return out;
}

SampleSetPair parse_sample_sets(const std::string& path) {
    std::ifstream in = open_for_read(path);
    return parse_sample_sets(in, path);
}

void write_sample_sets(const SampleSetPair& sets, std::ostream& out) {
    const Eigen::Index dims = sets.real.count() > 0 ? sets.real.dim() : sets.synthetic.dim();
    out << "source";
    for (Eigen::Index d = 0; d < dims; ++d) out << ",dim" << d;
    out << '\n';
    const auto write_set = [&](const FeatureSampleSet& set) {
        for (Eigen::Index i = 0; i < set.count(); ++i) {
            out << to_string(set.source);
            for (Eigen::Index d = 0; d < set.dim(); ++d)
                out << ',' << format_exact(set.points(i, d));
            out << '\n';
        }
    };
    write_set(sets.real);
    write_set(sets.synthetic);
}

// --- reports -----------------------------------------------------------------

namespace {

std::string dump_report(const ordered_json& doc) { return doc.dump(2) + "\n"; }

ordered_json instance_to_json(const FiniteInstance& inst) {
    std::ostringstream buffer;
    write_instance(inst, buffer);
    return ordered_json::parse(buffer.str());
}

ordered_json verdict_to_json(const TheoremVerdict& v) {
    ordered_json doc;
    doc["delta_eps_s"] = v.delta_eps_s;
    doc["delta_eps_r"] = v.delta_eps_r;
    doc["delta_restricted"] = v.delta_restricted;
    doc["delta_full"] = v.delta_full;
    doc["condition_held"] = v.condition_held;
    doc["conclusion_held"] = v.conclusion_held;
    doc["corollary1_condition"] = v.corollary1_condition;
    doc["slack"] = v.slack;
    doc["corollary2_slack"] = v.corollary2_slack;
    return doc;
}

/// Two-column aligned key/value block.
std::string kv_table(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t width = 0;
    for (const auto& [key, value] : rows) width = std::max(width, key.size());
    std::string out;
    for (const auto& [key, value] : rows) {
        out += key;
        out.append(width - key.size() + 2, ' ');
        out += value;
        out += '\n';
    }
    return out;
}

/// Header row plus one value row, columns padded to fit.
std::string columns_table(const std::vector<std::pair<std::string, std::string>>& columns) {
    std::string header, values;
    for (const auto& [name, value] : columns) {
        const std::size_t width = std::max(name.size(), value.size()) + 2;
        header += name;
        header.append(width - name.size(), ' ');
        values += value;
        values.append(width - value.size(), ' ');
    }
    const auto trim = [](std::string& s) {
        while (!s.empty() && s.back() == ' ') s.pop_back();
    };
    trim(header);
    trim(values);
    return header + "\n" + values + "\n";
}

}  // namespace

std::string report_json(const VerificationReport& report) {
    ordered_json doc;
    doc["instances"] = report.instances;
    doc["pairs_checked"] = report.pairs_checked;
    doc["condition_triggered"] = report.condition_triggered;
    doc["trigger_fraction"] = report.trigger_fraction();
    doc["trigger_floor"] = report.trigger_floor;
    doc["vacuity_ok"] = report.vacuity_ok;
    doc["violations"] = report.violations;
    doc["lemma_violations"] = report.lemma_violations;
    doc["chain_violations"] = report.chain_violations;
    doc["corollary2_violations"] = report.corollary2_violations;
    doc["slack_min"] = report.slack_min;
    doc["slack_median"] = report.slack_median;
    doc["corollary2_slack_min"] = report.corollary2_slack_min;
    ordered_json examples = ordered_json::array();
    for (const Counterexample& ce : report.counterexamples) {
        ordered_json obj;
        obj["instance_index"] = ce.instance_index;
        obj["pair"] = {ce.i, ce.j};
        obj["reason"] = ce.reason;
        obj["verdict"] = verdict_to_json(ce.verdict);
        obj["instance"] = instance_to_json(ce.instance);
        examples.push_back(std::move(obj));
    }
    doc["counterexamples"] = std::move(examples);
    return dump_report(doc);
}

std::string report_table(const VerificationReport& report) {
    char frac[32];
    std::snprintf(frac, sizeof(frac), "%.2f%%", 100.0 * report.trigger_fraction());
    return kv_table({
        {"instances", std::to_string(report.instances)},
        {"pairs checked", std::to_string(report.pairs_checked)},
        {"condition triggered", std::to_string(report.condition_triggered) + " (" + frac + ")"},
        {"vacuity guard", report.vacuity_ok ? "ok" : "NOT MET"},
        {"violations", std::to_string(report.violations)},
        {"lemma violations", std::to_string(report.lemma_violations)},
        {"chain violations", std::to_string(report.chain_violations)},
        {"corollary2 violations", std::to_string(report.corollary2_violations)},
        {"slack min", format_table_value(report.slack_min)},
        {"slack median", format_table_value(report.slack_median)},
        {"corollary2 slack min", format_table_value(report.corollary2_slack_min)},
        {"counterexamples kept", std::to_string(report.counterexamples.size())},
    });
}

std::string report_json(const FalsifyReport& report) {
    ordered_json doc;
    doc["instances"] = report.instances;
    doc["flips"] = report.flips;
    if (report.first_flip_instance)
        doc["first_flip_instance"] = *report.first_flip_instance;
    else
        doc["first_flip_instance"] = nullptr;
    return dump_report(doc);
}

std::string report_table(const FalsifyReport& report) {
    return kv_table({
        {"instances", std::to_string(report.instances)},
        {"rank flips", std::to_string(report.flips)},
        {"first flip at", report.first_flip_instance ? std::to_string(*report.first_flip_instance)
                                                     : std::string("-")},
    });
}

std::string report_json(const DivergenceReport& report) {
    ordered_json doc;
    doc["full_l1"] = report.full_l1;
    if (report.restricted_l1)
        doc["restricted_l1"] = *report.restricted_l1;
    else
        doc["restricted_l1"] = nullptr;
    doc["convention"] = DivergenceReport::convention;
    doc["halved_tv"] = report.halved_tv();
    return dump_report(doc);
}

std::string report_table(const DivergenceReport& report) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("full_l1", format_table_value(report.full_l1));
    if (report.restricted_l1)
        rows.emplace_back("restricted_l1", format_table_value(*report.restricted_l1));
    rows.emplace_back("convention", DivergenceReport::convention);
    rows.emplace_back("halved_tv", format_table_value(report.halved_tv()));
    return kv_table(rows);
}

std::string report_json(const EstimateReport& report) {
    ordered_json doc;
    doc["estimate_l1"] = report.estimate;
    doc["convention"] = DivergenceReport::convention;
    doc["clusters"] = report.clusters;
    doc["restarts"] = report.restarts;
    doc["seed"] = report.seed;
    doc["real_count"] = report.real_count;
    doc["synth_count"] = report.synth_count;
    doc["dim"] = report.dim;
    return dump_report(doc);
}

std::string report_table(const EstimateReport& report) {
    return kv_table({
        {"estimate_l1", format_table_value(report.estimate)},
        {"convention", DivergenceReport::convention},
        {"clusters", std::to_string(report.clusters)},
        {"restarts", std::to_string(report.restarts)},
        {"seed", std::to_string(report.seed)},
        {"real samples", std::to_string(report.real_count)},
        {"synthetic samples", std::to_string(report.synth_count)},
        {"dimensions", std::to_string(report.dim)},
    });
}

std::string report_json(const RankReport& report) {
    ordered_json doc;
    doc["spearman"] = report.spearman;
    doc["n"] = report.n;
    return dump_report(doc);
}

std::string report_table(const RankReport& report) {
    return kv_table({
        {"spearman", format_table_value(report.spearman)},
        {"instances", std::to_string(report.n)},
    });
}

namespace {

ordered_json outcome_to_json(const SelectionOutcome& outcome) {
    ordered_json doc;
    doc["arch_id"] = outcome.arch_id;
    doc["run_id"] = outcome.run_id;
    doc["epoch"] = outcome.epoch;
    doc["selected_error"] = outcome.selected_error;
    ordered_json errors;
    for (const auto& [split, error] : outcome.report_errors) errors[split] = error;
    doc["report_errors"] = std::move(errors);
    return doc;
}

ordered_json standard_to_json(const StandardOutcome& outcome) {
    ordered_json doc;
    doc["arch_id"] = outcome.arch_id;
    doc["subset_val_mean"] = outcome.subset_val_mean;
    doc["expected_error"] = outcome.expected_error;
    doc["runs_scored"] = outcome.runs_scored;
    return doc;
}

}  // namespace

std::string report_json(const SelectionOutcome& outcome) {
    return dump_report(outcome_to_json(outcome));
}

std::string report_table(const SelectionOutcome& outcome) {
    std::vector<std::pair<std::string, std::string>> rows = {
        {"arch_id", outcome.arch_id},
        {"run_id", std::to_string(outcome.run_id)},
        {"epoch", std::to_string(outcome.epoch)},
        {"selected error", format_table_value(outcome.selected_error)},
    };
    for (const auto& [split, error] : outcome.report_errors)
        rows.emplace_back(split + " error", format_table_value(error));
    return kv_table(rows);
}

std::string report_json(const StandardOutcome& outcome) {
    return dump_report(standard_to_json(outcome));
}

std::string report_table(const StandardOutcome& outcome) {
    return kv_table({
        {"arch_id", outcome.arch_id},
        {"subset val mean", format_table_value(outcome.subset_val_mean)},
        {"expected error", format_table_value(outcome.expected_error)},
        {"runs scored", std::to_string(outcome.runs_scored)},
    });
}

std::string report_json(const ProtocolComparison& cmp) {
    ordered_json doc;
    doc["synthetic"] = outcome_to_json(cmp.synthetic);
    doc["synthetic_test_error"] = cmp.synthetic_test_error;
    doc["standard"] = standard_to_json(cmp.standard);
    doc["random_mean"] = cmp.random_mean;
    doc["random_std"] = cmp.random_std;
    return dump_report(doc);
}

std::string report_table(const ProtocolComparison& cmp) {
    return columns_table({
        {"synthetic", format_table_value(cmp.synthetic_test_error)},
        {"standard", format_table_value(cmp.standard.expected_error)},
        {"average-of-all", format_table_value(cmp.random_mean) + " +/- " +
                               format_table_value(cmp.random_std)},
    });
}

std::string report_json(const EsRssSummary& summary) {
    ordered_json doc;
    doc["baseline"] = summary.baseline;
    doc["es"] = summary.es;
    doc["rss"] = summary.rss;
    doc["es_rss"] = summary.es_rss;
    doc["archs"] = summary.archs;
    doc["runs"] = summary.runs;
    return dump_report(doc);
}

std::string report_table(const EsRssSummary& summary) {
    return columns_table({
        {"Baseline", format_table_value(summary.baseline)},
        {"ES", format_table_value(summary.es)},
        {"RSS", format_table_value(summary.rss)},
        {"ES+RSS", format_table_value(summary.es_rss)},
    });
}

void write_scatter_csv(const RankReport& report, std::ostream& out) {
    out << "err_synthetic,err_real\n";
    for (const auto& [a, b] : report.scatter)
        out << format_exact(a) << ',' << format_exact(b) << '\n';
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace rankguard
