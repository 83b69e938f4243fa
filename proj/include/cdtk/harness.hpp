#pragma once

#include "cdtk/constraints.hpp"
#include "cdtk/display_model.hpp"
#include "cdtk/errors.hpp"
#include "cdtk/extract.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::harness {

struct InstanceModel {
    std::string current_state;
    long long seq = 0;
    double t_sec = 0.0;
    std::map<std::string, ocl::TypedValue> properties;

    ocl::EvalContext eval_context() const { return {current_state, properties}; }
};

/// Builds the typed snapshot for one frame from its observations. Rejected
/// observations contribute nothing, so their properties stay absent and the
/// affected constraints verdict `error` downstream.
InstanceModel populate(const display::DisplayModel& model,
                       const std::vector<extract::Observation>& observations,
                       const std::string& state,
                       long long seq,
                       double t_sec);

/// targetProperty -> widget kind name, for fault localization.
struct WidgetIndex {
    std::map<std::string, std::string> widget_by_property;
};

WidgetIndex build_widget_index(const display::DisplayModel& model);

/// Kind names of the widgets owning the constraint's referenced properties,
/// in first-reference order. Throws UnresolvableWidget for an unowned
/// property.
std::vector<std::string> resolve_widgets(const ocl::Constraint& constraint,
                                         const WidgetIndex& index);

struct EvaluationRecord {
    long long seq = 0;
    std::string state;
    std::string constraint;
    ocl::Verdict verdict = ocl::Verdict::Pass;
    std::string detail;                 // error verdicts only
    std::vector<std::string> widgets;   // resolved kind names; may be empty

    bool operator==(const EvaluationRecord&) const = default;
};

/// One record per constraint, in declaration order. widget_lists must be
/// pre-resolved per constraint (parallel to the set).
std::vector<EvaluationRecord> evaluate_frame(
    const ocl::ConstraintSet& set,
    const std::vector<std::vector<std::string>>& widget_lists,
    const InstanceModel& instance);

std::string to_jsonl(const std::vector<EvaluationRecord>& records);
std::vector<EvaluationRecord> records_from_jsonl(std::string_view bytes);

struct StateRow {
    std::string state;
    long long frames = 0;
    long long failed_evaluations = 0;
    long long unique_constraints_failed = 0;
    long long extraction_errors = 0;
    double eval_time_ms = 0.0;

    bool operator==(const StateRow&) const = default;
};

struct Localization {
    std::string widget;
    std::vector<std::string> failed_constraints;   // sorted by name
    std::vector<long long> example_seqs;           // up to 5 lowest

    bool operator==(const Localization&) const = default;
};

struct TestReport {
    std::vector<StateRow> states;
    StateRow totals;   // per-column sums; state label "total"
    std::vector<std::string> distinct_failed_constraints;
    std::vector<Localization> fault_localization;
};

/// Rows follow state_order (extra states seen only in the data are appended in
/// first-appearance order); totals are exact column sums.
TestReport compile_report(const std::vector<EvaluationRecord>& records,
                          const std::map<std::string, long long>& frame_counts,
                          const std::map<std::string, double>& eval_ms,
                          const std::vector<std::string>& state_order);

std::string report_to_json(const TestReport& report, bool mask_timings);
std::string report_to_text(const TestReport& report);

struct RunConfig {
    std::string display_path;
    std::string mapping_path;
    std::string machine_path;
    std::string constraints_path;
    std::string tables_path;
    std::string profile_path;
    std::optional<std::string> faults_path;
    double interval_sec = 1.0;
    std::string out_dir;

    /// Parses the config JSON; relative paths resolve against the file's
    /// directory.
    static RunConfig from_file(const std::string& path);
};

struct RunResult {
    TestReport report;
    std::vector<std::string> warnings;
};

/// The full pipeline: model -> tree/paths -> scripts -> simulate -> record ->
/// extract -> populate -> evaluate -> report, persisting every intermediate
/// artifact under out_dir.
RunResult run_pipeline(const RunConfig& config);

struct ValidationIssue {
    std::string constraint;
    std::string message;
    ErrorKind kind = ErrorKind::UnresolvableWidget;
};

/// check-constraints: unknown states and unresolvable properties, per
/// constraint.
std::vector<ValidationIssue> validate_constraints(const ocl::ConstraintSet& set,
                                                  const std::vector<std::string>& machine_states,
                                                  const display::DisplayModel& model);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

} // namespace cdtk::harness
