#include "cdtk/behavior_model.hpp"
#include "cdtk/constraints.hpp"
#include "cdtk/display_model.hpp"
#include "cdtk/errors.hpp"
#include "cdtk/extract.hpp"
#include "cdtk/flightsim.hpp"
#include "cdtk/harness.hpp"
#include "cdtk/pathgen.hpp"
#include "cdtk/pgm.hpp"
#include "cdtk/recorder.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <set>

namespace fs = std::filesystem;
using namespace cdtk;

namespace {

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        harness::write_text_file(out_path, content);
    }
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& warning : warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
}

int verdict_exit(const harness::TestReport& report) {
    long long not_passing =
        report.totals.failed_evaluations + report.totals.extraction_errors;
    return not_passing > 0 ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cdtk — cockpit display testing toolkit"};
    app.require_subcommand(1);
    int exit_code = 0;

    // gen-model
    std::string display_path, map_path, model_out;
    auto* gen_model = app.add_subcommand("gen-model", "Generate the display model");
    gen_model->add_option("display", display_path, "Display-definition XML")->required();
    gen_model->add_option("mapping", map_path, "Mapping file")->required();
    gen_model->add_option("-o,--out", model_out, "Write the model JSON here instead of stdout");
    gen_model->callback([&] {
        auto def = display::parse_display_xml(harness::read_text_file(display_path));
        auto mapping = display::parse_mapping(harness::read_text_file(map_path));
        auto generated = display::generate_model(def, mapping);
        print_warnings(generated.warnings);
        emit(display::to_json(generated.model), model_out);
    });

    // gen-paths
    std::string machine_path, paths_out, tree_out;
    auto* gen_paths = app.add_subcommand("gen-paths", "Derive test paths from the state machine");
    gen_paths->add_option("machine", machine_path, "State machine JSON")->required();
    gen_paths->add_option("-o,--out", paths_out, "Write the path list here instead of stdout");
    gen_paths->add_option("--tree", tree_out, "Also write the transition tree JSON here");
    gen_paths->callback([&] {
        auto machine = behavior::parse_state_machine(harness::read_text_file(machine_path));
        auto tree = pathgen::build_transition_tree(machine);
        auto paths = pathgen::extract_paths(tree, machine);
        if (!tree_out.empty()) {
            harness::write_text_file(tree_out, pathgen::to_json(tree));
        }
        emit(pathgen::to_json(paths), paths_out);
    });

    // gen-scripts
    std::string paths_path, tables_path, scripts_dir = ".";
    auto* gen_scripts = app.add_subcommand("gen-scripts", "Emit simulator scripts for final paths");
    gen_scripts->add_option("paths", paths_path, "Path list JSON")->required();
    gen_scripts->add_option("tables", tables_path, "Duration/action tables JSON")->required();
    gen_scripts->add_option("-d,--dir", scripts_dir, "Output directory (default .)");
    gen_scripts->callback([&] {
        auto paths = pathgen::paths_from_json(harness::read_text_file(paths_path));
        auto tables = pathgen::tables_from_json(harness::read_text_file(tables_path));
        auto result = pathgen::generate_scripts(paths, tables);
        print_warnings(result.warnings);
        fs::create_directories(scripts_dir);
        for (const auto& script : result.scripts) {
            std::string file = (fs::path(scripts_dir) / (script.name + ".xml")).string();
            harness::write_text_file(file, pathgen::to_runscript_xml(script));
            std::cout << file << "\n";
        }
    });

    // simulate
    std::string script_path, profile_path, faults_path, samples_out;
    double interval_sec = 1.0;
    auto* simulate = app.add_subcommand("simulate", "Run the flight-dynamics stub on a script");
    simulate->add_option("script", script_path, "Runscript XML")->required();
    simulate->add_option("profile", profile_path, "Flight profile JSON")->required();
    simulate->add_option("--faults", faults_path, "Fault specs JSON");
    simulate->add_option("--interval", interval_sec, "Sampling interval in seconds (default 1)");
    simulate->add_option("-o,--out", samples_out, "Write samples JSONL here instead of stdout");
    simulate->callback([&] {
        auto script = pathgen::parse_runscript_xml(harness::read_text_file(script_path));
        auto profile = flightsim::profile_from_json(harness::read_text_file(profile_path));
        std::vector<flightsim::FaultSpec> faults;
        if (!faults_path.empty()) {
            faults = flightsim::faults_from_json(harness::read_text_file(faults_path));
        }
        auto samples = flightsim::simulate(script, profile, faults, interval_sec);
        emit(flightsim::to_jsonl(samples), samples_out);
    });

    // record
    std::string record_model_path, frames_dir;
    std::vector<std::string> sample_files;
    auto* record_cmd = app.add_subcommand("record", "Render samples into PGM frames + manifest");
    record_cmd->add_option("model", record_model_path, "Display model JSON")->required();
    record_cmd->add_option("dir", frames_dir, "Output directory")->required();
    record_cmd->add_option("samples", sample_files, "Sample JSONL files, in order")->required();
    record_cmd->callback([&] {
        auto model = display::model_from_json(harness::read_text_file(record_model_path));
        record::FrameRecorder recorder(frames_dir);
        for (const std::string& file : sample_files) {
            recorder.record(model, flightsim::samples_from_jsonl(harness::read_text_file(file)));
        }
        recorder.write_manifest();
        std::cout << recorder.frames().size() << " frames -> " << frames_dir << "\n";
    });

    // extract
    std::string extract_frames_dir, extract_model_path, obs_out;
    auto* extract_cmd = app.add_subcommand("extract", "OCR widget values out of recorded frames");
    extract_cmd->add_option("frames", extract_frames_dir, "Frames directory with manifest.csv")
        ->required();
    extract_cmd->add_option("model", extract_model_path, "Display model JSON")->required();
    extract_cmd->add_option("-o,--out", obs_out, "Write observations JSONL here instead of stdout");
    extract_cmd->callback([&] {
        auto model = display::model_from_json(harness::read_text_file(extract_model_path));
        auto refs = record::load_manifest((fs::path(extract_frames_dir) / "manifest.csv").string());
        std::string jsonl;
        for (const auto& ref : refs) {
            auto image = pgm::read_file((fs::path(extract_frames_dir) / ref.path).string());
            jsonl += extract::to_jsonl(extract::extract_frame(image, model, ref.seq, ref.state));
        }
        emit(jsonl, obs_out);
    });

    // check-constraints
    std::string cc_constraints, cc_machine, cc_model;
    auto* check = app.add_subcommand("check-constraints",
                                     "Validate a constraint file against machine and model");
    check->add_option("constraints", cc_constraints, "Constraint file")->required();
    check->add_option("machine", cc_machine, "State machine JSON")->required();
    check->add_option("model", cc_model, "Display model JSON")->required();
    check->callback([&] {
        auto set = ocl::parse_constraints(harness::read_text_file(cc_constraints));
        auto machine = behavior::parse_state_machine(harness::read_text_file(cc_machine));
        auto model = display::model_from_json(harness::read_text_file(cc_model));
        auto issues = harness::validate_constraints(set, machine.states, model);
        if (!issues.empty()) {
            for (const auto& issue : issues) {
                std::cerr << "constraint '" << issue.constraint << "': " << issue.message << "\n";
            }
            exit_code = 2;
            return;
        }
        std::cout << "OK: " << set.constraints.size() << " constraints\n";
    });

    // evaluate
    std::string eval_obs, eval_constraints, eval_model_path, records_out;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate constraints over observations");
    evaluate->add_option("observations", eval_obs, "Observations JSONL")->required();
    evaluate->add_option("constraints", eval_constraints, "Constraint file")->required();
    evaluate->add_option("--model", eval_model_path,
                         "Display model JSON (enables widget localization)");
    evaluate->add_option("-o,--out", records_out, "Write records JSONL here instead of stdout");
    evaluate->callback([&] {
        auto observations = extract::observations_from_jsonl(harness::read_text_file(eval_obs));
        auto set = ocl::parse_constraints(harness::read_text_file(eval_constraints));
        display::DisplayModel model;
        std::vector<std::vector<std::string>> widget_lists(set.constraints.size());
        if (!eval_model_path.empty()) {
            model = display::model_from_json(harness::read_text_file(eval_model_path));
            auto index = harness::build_widget_index(model);
            widget_lists.clear();
            for (const auto& constraint : set.constraints) {
                widget_lists.push_back(harness::resolve_widgets(constraint, index));
            }
        }
        std::map<long long, std::vector<extract::Observation>> frames;
        for (auto& obs : observations) {
            frames[obs.seq].push_back(std::move(obs));
        }
        std::string jsonl;
        long long not_passing = 0;
        for (const auto& [seq, frame_obs] : frames) {
            auto instance =
                harness::populate(model, frame_obs, frame_obs.front().state, seq, 0.0);
            auto records = harness::evaluate_frame(set, widget_lists, instance);
            for (const auto& record : records) {
                if (record.verdict != ocl::Verdict::Pass) {
                    not_passing++;
                }
            }
            jsonl += harness::to_jsonl(records);
        }
        emit(jsonl, records_out);
        exit_code = not_passing > 0 ? 1 : 0;
    });

    // report
    std::string report_records, report_machine, report_manifest, report_json_out, report_text_out;
    auto* report_cmd = app.add_subcommand("report", "Compile the per-state test report");
    report_cmd->add_option("records", report_records, "Evaluation records JSONL")->required();
    report_cmd->add_option("--machine", report_machine,
                           "State machine JSON fixing the row order");
    report_cmd->add_option("--manifest", report_manifest,
                           "Frame manifest supplying per-state frame counts");
    report_cmd->add_option("--json", report_json_out, "Write the report JSON here");
    report_cmd->add_option("--text", report_text_out, "Write the plain-text table here");
    report_cmd->callback([&] {
        auto records = harness::records_from_jsonl(harness::read_text_file(report_records));
        std::vector<std::string> state_order;
        if (!report_machine.empty()) {
            state_order =
                behavior::parse_state_machine(harness::read_text_file(report_machine)).states;
        }
        std::map<std::string, long long> frame_counts;
        if (!report_manifest.empty()) {
            for (const auto& ref : record::load_manifest(report_manifest)) {
                frame_counts[ref.state]++;
            }
        } else {
            std::set<std::pair<std::string, long long>> seen;
            for (const auto& record : records) {
                if (seen.insert({record.state, record.seq}).second) {
                    frame_counts[record.state]++;
                }
            }
        }
        auto report = harness::compile_report(records, frame_counts, {}, state_order);
        if (!report_json_out.empty()) {
            harness::write_text_file(report_json_out, harness::report_to_json(report, false));
        }
        if (!report_text_out.empty()) {
            harness::write_text_file(report_text_out, harness::report_to_text(report));
        }
        std::cout << harness::report_to_text(report);
        exit_code = verdict_exit(report);
    });

    // run
    std::string config_path, out_override;
    auto* run = app.add_subcommand("run", "Execute the whole pipeline from a config file");
    run->add_option("config", config_path, "Run config JSON")->required();
    run->add_option("--out", out_override, "Override the config's output directory");
    run->callback([&] {
        auto config = harness::RunConfig::from_file(config_path);
        if (!out_override.empty()) {
            config.out_dir = out_override;
        }
        auto result = harness::run_pipeline(config);
        print_warnings(result.warnings);
        std::cout << harness::report_to_text(result.report);
        exit_code = verdict_exit(result.report);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
