#include "cdtk/harness.hpp"

#include "cdtk/behavior_model.hpp"
#include "cdtk/errors.hpp"
#include "cdtk/flightsim.hpp"
#include "cdtk/pathgen.hpp"
#include "cdtk/pgm.hpp"
#include "cdtk/recorder.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

namespace cdtk::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    }
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::StorageError, "cannot open '" + path + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(ErrorKind::StorageError, "short write to '" + path + "'");
    }
}

InstanceModel populate(const display::DisplayModel& model,
                       const std::vector<extract::Observation>& observations,
                       const std::string& state,
                       long long seq,
                       double t_sec) {
    InstanceModel instance;
    instance.current_state = state;
    instance.seq = seq;
    instance.t_sec = t_sec;
    for (const extract::Observation& obs : observations) {
        if (obs.confidence != extract::Confidence::Exact) {
            continue;
        }
        if (instance.properties.count(obs.target_property)) {
            throw Error(ErrorKind::DuplicateProperty,
                        "two observations bind '" + obs.target_property + "' on frame " +
                            std::to_string(seq));
        }
        instance.properties.emplace(obs.target_property, *obs.value);
    }
    // Unused: model reserved for future slot validation; observations already
    // carry the target property resolved through it.
    (void)model;
    return instance;
}

WidgetIndex build_widget_index(const display::DisplayModel& model) {
    WidgetIndex index;
    for (const display::WidgetModel& widget : model.widgets) {
        index.widget_by_property[widget.target_property] = std::string(to_string(widget.kind));
    }
    return index;
}

std::vector<std::string> resolve_widgets(const ocl::Constraint& constraint,
                                         const WidgetIndex& index) {
    std::vector<std::string> widgets;
    for (const std::string& property : ocl::property_refs(*constraint.body)) {
        auto it = index.widget_by_property.find(property);
        if (it == index.widget_by_property.end()) {
            throw Error(ErrorKind::UnresolvableWidget,
                        "constraint '" + constraint.name + "' references '" + property +
                            "', which no widget displays");
        }
        if (std::find(widgets.begin(), widgets.end(), it->second) == widgets.end()) {
            widgets.push_back(it->second);
        }
    }
    return widgets;
}

std::vector<EvaluationRecord> evaluate_frame(
    const ocl::ConstraintSet& set,
    const std::vector<std::vector<std::string>>& widget_lists,
    const InstanceModel& instance) {
    ocl::EvalContext context = instance.eval_context();
    std::vector<ocl::VerdictEntry> verdicts = ocl::evaluate_set(set, context);
    std::vector<EvaluationRecord> records;
    records.reserve(verdicts.size());
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        EvaluationRecord record;
        record.seq = instance.seq;
        record.state = instance.current_state;
        record.constraint = verdicts[i].constraint;
        record.verdict = verdicts[i].verdict;
        record.detail = verdicts[i].detail;
        record.widgets = widget_lists[i];
        records.push_back(std::move(record));
    }
    return records;
}

std::string to_jsonl(const std::vector<EvaluationRecord>& records) {
    std::string out;
    for (const EvaluationRecord& record : records) {
        json line;
        line["seq"] = record.seq;
        line["state"] = record.state;
        line["constraint"] = record.constraint;
        line["verdict"] = std::string(ocl::to_string(record.verdict));
        line["widgets"] = record.widgets;
        if (!record.detail.empty()) {
            line["detail"] = record.detail;
        }
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::vector<EvaluationRecord> records_from_jsonl(std::string_view bytes) {
    std::vector<EvaluationRecord> records;
    std::size_t start = 0;
    int line_no = 0;
    while (start < bytes.size()) {
        std::size_t end = bytes.find('\n', start);
        if (end == std::string_view::npos) {
            end = bytes.size();
        }
        std::string_view line = bytes.substr(start, end - start);
        start = end + 1;
        line_no++;
        if (line.empty()) {
            continue;
        }
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::SyntaxError, std::string("record line: ") + e.what(), line_no);
        }
        EvaluationRecord record;
        record.seq = doc.at("seq").get<long long>();
        record.state = doc.at("state").get<std::string>();
        record.constraint = doc.at("constraint").get<std::string>();
        std::string verdict = doc.at("verdict").get<std::string>();
        if (verdict == "pass") {
            record.verdict = ocl::Verdict::Pass;
        } else if (verdict == "fail") {
            record.verdict = ocl::Verdict::Fail;
        } else if (verdict == "error") {
            record.verdict = ocl::Verdict::Error;
        } else {
            throw Error(ErrorKind::SchemaError, "unknown verdict '" + verdict + "'", line_no);
        }
        if (doc.contains("widgets")) {
            for (const json& w : doc["widgets"]) {
                record.widgets.push_back(w.get<std::string>());
            }
        }
        record.detail = doc.value("detail", "");
        records.push_back(std::move(record));
    }
    return records;
}

TestReport compile_report(const std::vector<EvaluationRecord>& records,
                          const std::map<std::string, long long>& frame_counts,
                          const std::map<std::string, double>& eval_ms,
                          const std::vector<std::string>& state_order) {
    struct Aggregate {
        long long fails = 0;
        long long errors = 0;
        std::set<std::string> failing_names;
    };
    std::map<std::string, Aggregate> per_state;
    std::vector<std::string> rows = state_order;
    auto ensure_row = [&rows](const std::string& state) {
        if (std::find(rows.begin(), rows.end(), state) == rows.end()) {
            rows.push_back(state);
        }
    };
    std::set<std::string> distinct_failed;
    std::map<std::string, std::pair<std::set<std::string>, std::set<long long>>> localization;

    for (const EvaluationRecord& record : records) {
        ensure_row(record.state);
        Aggregate& agg = per_state[record.state];
        if (record.verdict == ocl::Verdict::Fail) {
            agg.fails++;
            agg.failing_names.insert(record.constraint);
            distinct_failed.insert(record.constraint);
            for (const std::string& widget : record.widgets) {
                auto& [names, seqs] = localization[widget];
                names.insert(record.constraint);
                seqs.insert(record.seq);
            }
        } else if (record.verdict == ocl::Verdict::Error) {
            agg.errors++;
        }
    }
    for (const auto& [state, count] : frame_counts) {
        ensure_row(state);
    }

    TestReport report;
    report.totals.state = "total";
    for (const std::string& state : rows) {
        StateRow row;
        row.state = state;
        auto fc = frame_counts.find(state);
        row.frames = fc == frame_counts.end() ? 0 : fc->second;
        auto agg = per_state.find(state);
        if (agg != per_state.end()) {
            row.failed_evaluations = agg->second.fails;
            row.unique_constraints_failed = static_cast<long long>(agg->second.failing_names.size());
            row.extraction_errors = agg->second.errors;
        }
        auto ms = eval_ms.find(state);
        row.eval_time_ms = ms == eval_ms.end() ? 0.0 : ms->second;

        report.totals.frames += row.frames;
        report.totals.failed_evaluations += row.failed_evaluations;
        report.totals.unique_constraints_failed += row.unique_constraints_failed;
        report.totals.extraction_errors += row.extraction_errors;
        report.totals.eval_time_ms += row.eval_time_ms;
        report.states.push_back(std::move(row));
    }
    report.distinct_failed_constraints.assign(distinct_failed.begin(), distinct_failed.end());
    for (const auto& [widget, data] : localization) {
        Localization entry;
        entry.widget = widget;
        entry.failed_constraints.assign(data.first.begin(), data.first.end());
        for (long long seq : data.second) {
            if (entry.example_seqs.size() == 5) {
                break;
            }
            entry.example_seqs.push_back(seq);
        }
        report.fault_localization.push_back(std::move(entry));
    }
    return report;
}

namespace {

json row_to_json(const StateRow& row, bool mask_timings, bool with_state) {
    json out;
    if (with_state) {
        out["state"] = row.state;
    }
    out["frames"] = row.frames;
    out["failedEvaluations"] = row.failed_evaluations;
    out["uniqueConstraintsFailed"] = row.unique_constraints_failed;
    out["extractionErrors"] = row.extraction_errors;
    out["evalTimeMs"] = mask_timings ? 0.0 : row.eval_time_ms;
    return out;
}

} // namespace

std::string report_to_json(const TestReport& report, bool mask_timings) {
    json doc;
    doc["states"] = json::array();
    for (const StateRow& row : report.states) {
        doc["states"].push_back(row_to_json(row, mask_timings, true));
    }
    doc["totals"] = row_to_json(report.totals, mask_timings, false);
    doc["distinctFailedConstraints"] = report.distinct_failed_constraints;
    doc["faultLocalization"] = json::array();
    for (const Localization& entry : report.fault_localization) {
        json item;
        item["widget"] = entry.widget;
        item["failedConstraints"] = entry.failed_constraints;
        item["exampleSeqs"] = entry.example_seqs;
        doc["faultLocalization"].push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
}

std::string report_to_text(const TestReport& report) {
    const char* headers[] = {"State",  "Frames",        "Failed OCL Eval.", "Unique OCL Failed",
                             "Extr. Errors", "Eval Time (ms)"};
    std::vector<std::array<std::string, 6>> table;
    auto format_row = [](const StateRow& row) {
        std::ostringstream ms;
        ms << std::fixed << std::setprecision(2) << row.eval_time_ms;
        return std::array<std::string, 6>{row.state,
                                          std::to_string(row.frames),
                                          std::to_string(row.failed_evaluations),
                                          std::to_string(row.unique_constraints_failed),
                                          std::to_string(row.extraction_errors),
                                          ms.str()};
    };
    for (const StateRow& row : report.states) {
        table.push_back(format_row(row));
    }
    table.push_back(format_row(report.totals));

    std::size_t widths[6];
    for (int c = 0; c < 6; ++c) {
        widths[c] = std::string(headers[c]).size();
        for (const auto& row : table) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::ostringstream out;
    auto emit = [&out, &widths](const std::array<std::string, 6>& cells) {
        for (int c = 0; c < 6; ++c) {
            if (c == 0) {
                out << std::left << std::setw(static_cast<int>(widths[c])) << cells[c];
            } else {
                out << "  " << std::right << std::setw(static_cast<int>(widths[c])) << cells[c];
            }
        }
        out << "\n";
    };
    std::array<std::string, 6> header_cells;
    for (int c = 0; c < 6; ++c) {
        header_cells[c] = headers[c];
    }
    emit(header_cells);
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (i + 1 == table.size()) {
            out << std::string(std::accumulate(std::begin(widths), std::end(widths), std::size_t{0}) +
                                   10,
                               '-')
                << "\n";
        }
        emit(table[i]);
    }

    out << "\nDistinct failed constraints (" << report.distinct_failed_constraints.size() << ")";
    if (!report.distinct_failed_constraints.empty()) {
        out << ": ";
        for (std::size_t i = 0; i < report.distinct_failed_constraints.size(); ++i) {
            out << (i ? ", " : "") << report.distinct_failed_constraints[i];
        }
    }
    out << "\n";
    out << "Fault localization:\n";
    if (report.fault_localization.empty()) {
        out << "  (none)\n";
    }
    for (const Localization& entry : report.fault_localization) {
        out << "  " << entry.widget << ": ";
        for (std::size_t i = 0; i < entry.failed_constraints.size(); ++i) {
            out << (i ? ", " : "") << entry.failed_constraints[i];
        }
        out << "  (e.g. seq";
        for (std::size_t i = 0; i < entry.example_seqs.size(); ++i) {
            out << (i ? ", " : " ") << entry.example_seqs[i];
        }
        out << ")\n";
    }
    return out.str();
}

RunConfig RunConfig::from_file(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SyntaxError, std::string("config JSON: ") + e.what());
    }
    fs::path base = fs::path(path).parent_path();
    auto resolve = [&base](const std::string& p) { return (base / p).lexically_normal().string(); };
    auto required = [&doc, &path](const char* key) {
        if (!doc.contains(key) || !doc[key].is_string()) {
            throw Error(ErrorKind::ConfigError,
                        "config '" + path + "' needs a string field '" + key + "'");
        }
        return doc[key].get<std::string>();
    };
    RunConfig config;
    config.display_path = resolve(required("display"));
    config.mapping_path = resolve(required("mapping"));
    config.machine_path = resolve(required("machine"));
    config.constraints_path = resolve(required("constraints"));
    config.tables_path = resolve(required("tables"));
    config.profile_path = resolve(required("profile"));
    if (doc.contains("faults") && !doc["faults"].is_null()) {
        config.faults_path = resolve(doc["faults"].get<std::string>());
    }
    config.interval_sec = doc.value("intervalSec", 1.0);
    if (config.interval_sec <= 0.0) {
        throw Error(ErrorKind::ConfigError, "intervalSec must be positive");
    }
    config.out_dir = resolve(required("out"));
    return config;
}

namespace {

[[noreturn]] void rethrow_tagged(const char* stage, const Error& e) {
    throw Error(e.kind(), std::string("[") + stage + "] " + e.message(), e.line(), e.column());
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        rethrow_tagged(name, e);
    }
}

} // namespace

RunResult run_pipeline(const RunConfig& config) {
    RunResult result;
    fs::create_directories(config.out_dir);

    // Model generation.
    display::DisplayModel model = stage("gen-model", [&] {
        display::DisplayDefinition def =
            display::parse_display_xml(read_text_file(config.display_path));
        display::MappingFile mapping = display::parse_mapping(read_text_file(config.mapping_path));
        display::GeneratedModel generated = display::generate_model(def, mapping);
        for (std::string& warning : generated.warnings) {
            result.warnings.push_back("gen-model: " + warning);
        }
        write_text_file((fs::path(config.out_dir) / "model.json").string(),
                        display::to_json(generated.model));
        return generated.model;
    });

    // Paths.
    behavior::StateMachine machine = stage("gen-paths", [&] {
        return behavior::parse_state_machine(read_text_file(config.machine_path));
    });
    std::vector<pathgen::TestPath> paths = stage("gen-paths", [&] {
        pathgen::TransitionTree tree = pathgen::build_transition_tree(machine);
        std::vector<pathgen::TestPath> extracted = pathgen::extract_paths(tree, machine);
        write_text_file((fs::path(config.out_dir) / "tree.json").string(), pathgen::to_json(tree));
        write_text_file((fs::path(config.out_dir) / "paths.json").string(),
                        pathgen::to_json(extracted));
        return extracted;
    });

    // Scripts.
    std::vector<pathgen::SimScript> scripts = stage("gen-scripts", [&] {
        pathgen::Tables tables = pathgen::tables_from_json(read_text_file(config.tables_path));
        pathgen::ScriptGenResult generated = pathgen::generate_scripts(paths, tables);
        for (std::string& warning : generated.warnings) {
            result.warnings.push_back("gen-scripts: " + warning);
        }
        fs::create_directories(fs::path(config.out_dir) / "scripts");
        for (const pathgen::SimScript& script : generated.scripts) {
            write_text_file((fs::path(config.out_dir) / "scripts" / (script.name + ".xml")).string(),
                            pathgen::to_runscript_xml(script));
        }
        return generated.scripts;
    });

    // Constraints, validated against the machine and the model up front.
    ocl::ConstraintSet constraints = stage("check-constraints", [&] {
        ocl::ConstraintSet set = ocl::parse_constraints(read_text_file(config.constraints_path));
        std::vector<ValidationIssue> issues = validate_constraints(set, machine.states, model);
        if (!issues.empty()) {
            throw Error(issues.front().kind,
                        "constraint '" + issues.front().constraint + "': " + issues.front().message);
        }
        return set;
    });
    WidgetIndex index = build_widget_index(model);
    std::vector<std::vector<std::string>> widget_lists;
    for (const ocl::Constraint& constraint : constraints.constraints) {
        widget_lists.push_back(resolve_widgets(constraint, index));
    }

    // Simulation.
    flightsim::FlightProfile profile = stage("simulate", [&] {
        return flightsim::profile_from_json(read_text_file(config.profile_path));
    });
    std::vector<flightsim::FaultSpec> faults;
    if (config.faults_path) {
        faults = stage("simulate", [&] {
            return flightsim::faults_from_json(read_text_file(*config.faults_path));
        });
    }
    std::vector<std::vector<flightsim::Sample>> sample_sets = stage("simulate", [&] {
        std::vector<std::vector<flightsim::Sample>> sets;
        fs::create_directories(fs::path(config.out_dir) / "samples");
        for (const pathgen::SimScript& script : scripts) {
            std::vector<flightsim::Sample> samples =
                flightsim::simulate(script, profile, faults, config.interval_sec);
            write_text_file(
                (fs::path(config.out_dir) / "samples" / (script.name + ".jsonl")).string(),
                flightsim::to_jsonl(samples));
            sets.push_back(std::move(samples));
        }
        return sets;
    });

    // Render + record.
    std::string frames_dir = (fs::path(config.out_dir) / "frames").string();
    std::vector<record::FrameRef> refs = stage("record", [&] {
        record::FrameRecorder recorder(frames_dir);
        for (const std::vector<flightsim::Sample>& samples : sample_sets) {
            recorder.record(model, samples);
        }
        recorder.write_manifest();
        return recorder.frames();
    });

    // Extract, populate, evaluate — one frame at a time, ordered by seq.
    std::string observations_jsonl;
    std::string records_jsonl;
    std::map<std::string, long long> frame_counts;
    std::map<std::string, double> eval_ms;
    std::vector<EvaluationRecord> all_records;
    // Frame t_sec is recoverable from the manifest's millisecond column.
    for (const record::FrameRef& ref : refs) {
        frame_counts[ref.state]++;
        std::vector<extract::Observation> observations = stage("extract", [&] {
            pgm::Image image = pgm::read_file((fs::path(frames_dir) / ref.path).string());
            return extract::extract_frame(image, model, ref.seq, ref.state);
        });
        observations_jsonl += extract::to_jsonl(observations);
        InstanceModel instance = stage("populate", [&] {
            return populate(model, observations, ref.state, ref.seq, ref.t_ms / 1000.0);
        });
        auto started = std::chrono::steady_clock::now();
        std::vector<EvaluationRecord> records = stage("evaluate", [&] {
            return evaluate_frame(constraints, widget_lists, instance);
        });
        auto finished = std::chrono::steady_clock::now();
        eval_ms[ref.state] +=
            std::chrono::duration<double, std::milli>(finished - started).count();
        records_jsonl += to_jsonl(records);
        all_records.insert(all_records.end(), records.begin(), records.end());
    }
    write_text_file((fs::path(config.out_dir) / "observations.jsonl").string(), observations_jsonl);
    write_text_file((fs::path(config.out_dir) / "records.jsonl").string(), records_jsonl);

    // Report.
    result.report = stage("report", [&] {
        TestReport report = compile_report(all_records, frame_counts, eval_ms, machine.states);
        write_text_file((fs::path(config.out_dir) / "report.json").string(),
                        report_to_json(report, false));
        write_text_file((fs::path(config.out_dir) / "report.txt").string(),
                        report_to_text(report));
        return report;
    });
    return result;
}

std::vector<ValidationIssue> validate_constraints(const ocl::ConstraintSet& set,
                                                  const std::vector<std::string>& machine_states,
                                                  const display::DisplayModel& model) {
    std::vector<ValidationIssue> issues;
    WidgetIndex index = build_widget_index(model);
    for (const ocl::Constraint& constraint : set.constraints) {
        std::set<std::string> states;
        auto walk = [&states](const ocl::Expr& e, auto&& self) -> void {
            if (e.kind == ocl::ExprKind::IsInState) {
                states.insert(e.name);
            }
            if (e.left) self(*e.left, self);
            if (e.right) self(*e.right, self);
        };
        walk(*constraint.body, walk);
        for (const std::string& state : states) {
            if (std::find(machine_states.begin(), machine_states.end(), state) ==
                machine_states.end()) {
                issues.push_back(
                    {constraint.name, "unknown state '" + state + "'", ErrorKind::UnknownState});
            }
        }
        for (const std::string& property : ocl::property_refs(*constraint.body)) {
            if (!index.widget_by_property.count(property)) {
                issues.push_back({constraint.name,
                                  "property '" + property + "' has no owning widget",
                                  ErrorKind::UnresolvableWidget});
            }
        }
    }
    return issues;
}

} // namespace cdtk::harness
