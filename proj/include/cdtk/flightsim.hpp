#pragma once

#include "cdtk/display_model.hpp"
#include "cdtk/pathgen.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::flightsim {

/// Per-state envelopes: state -> property -> (value on entry, value on exit).
/// Values interpolate linearly over the state's dwell time.
struct FlightProfile {
    std::map<std::string, std::map<std::string, std::pair<double, double>>> per_state;
};

FlightProfile profile_from_json(std::string_view bytes);

enum class FaultMode { Offset, Stuck, Scale };

struct FaultSpec {
    display::WidgetKind widget = display::WidgetKind::Altimeter;
    bool all_states = false;
    std::vector<std::string> states;   // ignored when all_states
    FaultMode mode = FaultMode::Offset;
    double value = 0.0;                // delta, stuck value, or factor

    bool active_in(std::string_view state) const;
};

std::vector<FaultSpec> faults_from_json(std::string_view bytes);

struct Sample {
    double t_sec = 0.0;
    std::string state;
    std::map<std::string, double> true_values;
    std::map<std::string, double> displayed_values;

    bool operator==(const Sample&) const = default;
};

/// Samples the script at t = 0, interval, 2*interval, ... < totalSec. A sample
/// exactly on a state boundary belongs to the state being entered. Faults
/// perturb only displayed values, in declaration order, in their active states.
std::vector<Sample> simulate(const pathgen::SimScript& script,
                             const FlightProfile& profile,
                             const std::vector<FaultSpec>& faults,
                             double interval_sec);

std::string to_jsonl(const std::vector<Sample>& samples);
std::vector<Sample> samples_from_jsonl(std::string_view bytes);

} // namespace cdtk::flightsim
