#include "cdtk/flightsim.hpp"

#include "cdtk/errors.hpp"

#include <nlohmann/json.hpp>

#include <set>

namespace cdtk::flightsim {

using nlohmann::json;

FlightProfile profile_from_json(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SyntaxError, std::string("profile JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorKind::SchemaError, "profile must be a JSON object keyed by state");
    }
    FlightProfile profile;
    for (const auto& [state, table] : doc.items()) {
        if (!table.is_object()) {
            throw Error(ErrorKind::SchemaError, "profile entry for '" + state + "' must be an object");
        }
        auto& per_property = profile.per_state[state];
        for (const auto& [property, range] : table.items()) {
            if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
                !range[1].is_number()) {
                throw Error(ErrorKind::SchemaError, "profile range for '" + state + "." + property +
                                                        "' must be [start, end]");
            }
            per_property[property] = {range[0].get<double>(), range[1].get<double>()};
        }
    }
    return profile;
}

bool FaultSpec::active_in(std::string_view state) const {
    if (all_states) {
        return true;
    }
    for (const std::string& s : states) {
        if (s == state) {
            return true;
        }
    }
    return false;
}

std::vector<FaultSpec> faults_from_json(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SyntaxError, std::string("faults JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw Error(ErrorKind::SchemaError, "faults file must be a JSON array");
    }
    std::vector<FaultSpec> faults;
    for (const json& item : doc) {
        if (!item.is_object() || !item.contains("widget") || !item.contains("states") ||
            !item.contains("mode")) {
            throw Error(ErrorKind::SchemaError, "fault needs widget, states, and mode");
        }
        FaultSpec fault;
        std::string widget = item["widget"].get<std::string>();
        auto kind = display::widget_kind_from(widget);
        if (!kind) {
            throw Error(ErrorKind::UnknownWidgetKind, "'" + widget + "'");
        }
        fault.widget = *kind;
        const json& states = item["states"];
        if (states.is_string() && states.get<std::string>() == "ALL") {
            fault.all_states = true;
        } else if (states.is_array()) {
            for (const json& s : states) {
                fault.states.push_back(s.get<std::string>());
            }
        } else {
            throw Error(ErrorKind::SchemaError, "fault states must be a list or \"ALL\"");
        }
        const json& mode = item["mode"];
        if (!mode.is_object() || mode.size() != 1) {
            throw Error(ErrorKind::SchemaError, "fault mode must be one of offset/stuck/scale");
        }
        if (mode.contains("offset")) {
            fault.mode = FaultMode::Offset;
            fault.value = mode["offset"].get<double>();
        } else if (mode.contains("stuck")) {
            fault.mode = FaultMode::Stuck;
            fault.value = mode["stuck"].get<double>();
        } else if (mode.contains("scale")) {
            fault.mode = FaultMode::Scale;
            fault.value = mode["scale"].get<double>();
            if (fault.value == 0.0) {
                throw Error(ErrorKind::SchemaError, "scale factor must be nonzero");
            }
        } else {
            throw Error(ErrorKind::SchemaError, "fault mode must be one of offset/stuck/scale");
        }
        faults.push_back(std::move(fault));
    }
    return faults;
}

std::vector<Sample> simulate(const pathgen::SimScript& script,
                             const FlightProfile& profile,
                             const std::vector<FaultSpec>& faults,
                             double interval_sec) {
    if (script.schedule.empty()) {
        throw Error(ErrorKind::EmptySchedule, "script '" + script.name + "' has no states");
    }
    if (interval_sec <= 0.0) {
        throw Error(ErrorKind::ConfigError, "sampling interval must be positive");
    }

    // The schedule's states must share one property set; a hole anywhere would
    // make downstream instances structurally different between states.
    std::set<std::string> property_names;
    for (const pathgen::ScheduleEntry& entry : script.schedule) {
        auto it = profile.per_state.find(entry.state);
        if (it == profile.per_state.end()) {
            throw Error(ErrorKind::ProfileGap, "no profile entry for state '" + entry.state + "'");
        }
        for (const auto& [property, range] : it->second) {
            property_names.insert(property);
        }
    }
    for (const pathgen::ScheduleEntry& entry : script.schedule) {
        const auto& table = profile.per_state.at(entry.state);
        for (const std::string& property : property_names) {
            if (!table.count(property)) {
                throw Error(ErrorKind::ProfileGap,
                            "profile misses '" + property + "' for state '" + entry.state + "'");
            }
        }
    }

    std::vector<Sample> samples;
    std::size_t segment = 0;
    for (long long step = 0;; ++step) {
        double t = step * interval_sec;
        if (t >= script.total_sec) {
            break;
        }
        // A sample exactly at a boundary belongs to the state being entered.
        while (segment + 1 < script.schedule.size() &&
               t >= script.schedule[segment + 1].start_sec) {
            segment++;
        }
        const pathgen::ScheduleEntry& entry = script.schedule[segment];
        Sample sample;
        sample.t_sec = t;
        sample.state = entry.state;
        const auto& table = profile.per_state.at(entry.state);
        for (const auto& [property, range] : table) {
            double progress = (t - entry.start_sec) / entry.duration_sec;
            sample.true_values[property] = range.first + (range.second - range.first) * progress;
        }
        sample.displayed_values = sample.true_values;
        for (const FaultSpec& fault : faults) {
            if (!fault.active_in(sample.state)) {
                continue;
            }
            std::string property(display::target_property(fault.widget));
            auto it = sample.displayed_values.find(property);
            if (it == sample.displayed_values.end()) {
                continue;
            }
            switch (fault.mode) {
            case FaultMode::Offset: it->second += fault.value; break;
            case FaultMode::Stuck: it->second = fault.value; break;
            case FaultMode::Scale: it->second *= fault.value; break;
            }
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

std::string to_jsonl(const std::vector<Sample>& samples) {
    std::string out;
    for (const Sample& sample : samples) {
        json line;
        line["t"] = sample.t_sec;
        line["state"] = sample.state;
        line["true"] = sample.true_values;
        line["displayed"] = sample.displayed_values;
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::vector<Sample> samples_from_jsonl(std::string_view bytes) {
    std::vector<Sample> samples;
    std::size_t start = 0;
    while (start < bytes.size()) {
        std::size_t end = bytes.find('\n', start);
        if (end == std::string_view::npos) {
            end = bytes.size();
        }
        std::string_view line = bytes.substr(start, end - start);
        start = end + 1;
        if (line.empty()) {
            continue;
        }
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::SyntaxError, std::string("sample line: ") + e.what());
        }
        Sample sample;
        sample.t_sec = doc.at("t").get<double>();
        sample.state = doc.at("state").get<std::string>();
        for (const auto& [property, value] : doc.at("true").items()) {
            sample.true_values[property] = value.get<double>();
        }
        for (const auto& [property, value] : doc.at("displayed").items()) {
            sample.displayed_values[property] = value.get<double>();
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

} // namespace cdtk::flightsim
