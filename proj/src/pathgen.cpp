#include "cdtk/pathgen.hpp"

#include "cdtk/errors.hpp"
#include "cdtk/xml.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace cdtk::pathgen {

using nlohmann::json;

namespace {

void expand(TreeNode& node, std::vector<std::string>& path_states, const behavior::StateMachine& sm) {
    for (const behavior::Transition* transition : sm.outgoing(node.state)) {
        TreeNode child;
        child.state = transition->target;
        child.via_event = transition->event;
        bool seen = std::find(path_states.begin(), path_states.end(), child.state) != path_states.end();
        if (seen) {
            child.is_repeat_leaf = true;
        } else {
            path_states.push_back(child.state);
            expand(child, path_states, sm);
            path_states.pop_back();
        }
        node.children.push_back(std::move(child));
    }
}

} // namespace

TransitionTree build_transition_tree(const behavior::StateMachine& sm) {
    TransitionTree tree;
    tree.root.state = sm.initial;
    std::vector<std::string> path_states{sm.initial};
    expand(tree.root, path_states, sm);
    return tree;
}

namespace {

void collect_paths(const TreeNode& node, TestPath& current, std::vector<TestPath>& out,
                   const behavior::StateMachine& sm) {
    current.states.push_back(node.state);
    if (!node.via_event.empty()) {
        current.events.push_back(node.via_event);
    }
    if (node.children.empty()) {
        TestPath path = current;
        path.reaches_final = sm.is_final(node.state);
        out.push_back(std::move(path));
    } else {
        for (const TreeNode& child : node.children) {
            collect_paths(child, current, out, sm);
        }
    }
    current.states.pop_back();
    if (!node.via_event.empty()) {
        current.events.pop_back();
    }
}

} // namespace

std::vector<TestPath> extract_paths(const TransitionTree& tree, const behavior::StateMachine& sm) {
    std::vector<TestPath> paths;
    TestPath scratch;
    collect_paths(tree.root, scratch, paths, sm);
    return paths;
}

ScriptGenResult generate_scripts(const std::vector<TestPath>& paths, const Tables& tables) {
    ScriptGenResult result;
    for (std::size_t index = 0; index < paths.size(); ++index) {
        const TestPath& path = paths[index];
        if (!path.reaches_final) {
            continue;
        }
        SimScript script;
        char name[32];
        std::snprintf(name, sizeof(name), "path_%03zu", index);
        script.name = name;

        int clock = 0;
        for (const std::string& state : path.states) {
            auto duration = tables.durations.find(state);
            if (duration == tables.durations.end()) {
                throw Error(ErrorKind::MissingDuration, "no duration for state '" + state + "'");
            }
            script.schedule.push_back({state, clock, duration->second});
            clock += duration->second;

            auto actions = tables.actions.find(state);
            if (actions == tables.actions.end()) {
                result.warnings.push_back("state '" + state + "' has no actions");
            } else {
                script.actions[state] = actions->second;
            }
        }
        script.total_sec = clock;
        result.scripts.push_back(std::move(script));
    }
    return result;
}

namespace {

json node_to_json(const TreeNode& node) {
    json children = json::array();
    for (const TreeNode& child : node.children) {
        children.push_back(node_to_json(child));
    }
    json doc = {{"state", node.state}, {"repeat", node.is_repeat_leaf}, {"children", children}};
    if (!node.via_event.empty()) {
        doc["viaEvent"] = node.via_event;
    }
    return doc;
}

} // namespace

std::string to_json(const TransitionTree& tree) {
    return node_to_json(tree.root).dump(2) + "\n";
}

std::string to_json(const std::vector<TestPath>& paths) {
    json doc = json::array();
    for (const TestPath& path : paths) {
        doc.push_back({{"states", path.states},
                       {"events", path.events},
                       {"reachesFinal", path.reaches_final}});
    }
    return doc.dump(2) + "\n";
}

std::vector<TestPath> paths_from_json(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SyntaxError, std::string("path list JSON: ") + e.what());
    }
    std::vector<TestPath> paths;
    try {
        for (const json& p : doc) {
            TestPath path;
            path.states = p.at("states").get<std::vector<std::string>>();
            path.events = p.at("events").get<std::vector<std::string>>();
            path.reaches_final = p.at("reachesFinal").get<bool>();
            if (path.states.empty() || path.events.size() + 1 != path.states.size()) {
                throw Error(ErrorKind::SyntaxError, "path states/events lengths are inconsistent");
            }
            paths.push_back(std::move(path));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SyntaxError, std::string("path list JSON: ") + e.what());
    }
    return paths;
}

Tables tables_from_json(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SyntaxError, std::string("tables JSON: ") + e.what());
    }
    Tables tables;
    try {
        for (const auto& [state, value] : doc.at("durations").items()) {
            int seconds = value.get<int>();
            if (seconds <= 0) {
                throw Error(ErrorKind::SchemaError, "duration for '" + state + "' must be positive");
            }
            tables.durations[state] = seconds;
        }
        const json actions_doc = doc.value("actions", json::object());
        for (const auto& [state, list] : actions_doc.items()) {
            std::vector<StateAction> actions;
            for (const json& entry : list) {
                actions.push_back({entry.at("prop").get<std::string>(), entry.at("value").get<double>()});
            }
            tables.actions[state] = std::move(actions);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SyntaxError, std::string("tables JSON: ") + e.what());
    }
    return tables;
}

namespace {

std::string number_text(double value) {
    return json(value).dump();
}

constexpr std::string_view kClockProperty = "simulation/sim-time-sec";

} // namespace

std::string to_runscript_xml(const SimScript& script) {
    xml::Element root;
    root.name = "runscript";
    root.attributes = {{"name", script.name}};

    xml::Element use;
    use.name = "use";
    use.attributes = {{"aircraft", "c172x"}, {"initialize", "reset00"}};
    root.children.push_back(std::move(use));

    xml::Element run;
    run.name = "run";
    run.attributes = {{"start", "0"}, {"end", std::to_string(script.total_sec)}, {"dt", "0.0083"}};
    for (const ScheduleEntry& entry : script.schedule) {
        xml::Element event;
        event.name = "event";
        event.attributes = {{"name", "enter_" + entry.state}};

        xml::Element condition;
        condition.name = "condition";
        condition.text = std::string(kClockProperty) + " >= " + std::to_string(entry.start_sec);
        event.children.push_back(std::move(condition));

        auto actions = script.actions.find(entry.state);
        if (actions != script.actions.end()) {
            for (const StateAction& action : actions->second) {
                xml::Element set;
                set.name = "set";
                set.attributes = {{"name", action.property}, {"value", number_text(action.value)}};
                event.children.push_back(std::move(set));
            }
        }
        xml::Element notify;
        notify.name = "notify";
        event.children.push_back(std::move(notify));
        run.children.push_back(std::move(event));
    }
    root.children.push_back(std::move(run));
    return xml::serialize(root);
}

namespace {

int parse_int_text(const std::string& text, const std::string& context) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::SyntaxError, context + ": \"" + text + "\" is not an integer");
    }
    return value;
}

double parse_double_text(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        double value = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw Error(ErrorKind::SyntaxError, context + ": \"" + text + "\" is not a number");
    }
}

} // namespace

SimScript parse_runscript_xml(std::string_view bytes) {
    xml::Element root = xml::parse(bytes);
    if (root.name != "runscript") {
        throw Error(ErrorKind::SchemaError, "expected <runscript>, got <" + root.name + ">");
    }
    SimScript script;
    if (const std::string* name = root.attribute("name")) {
        script.name = *name;
    }

    const xml::Element* run = nullptr;
    for (const xml::Element& child : root.children) {
        if (child.name == "run") {
            run = &child;
        }
    }
    if (run == nullptr) {
        throw Error(ErrorKind::SchemaError, "runscript has no <run> element");
    }
    const std::string* end_attr = run->attribute("end");
    if (end_attr == nullptr) {
        throw Error(ErrorKind::SchemaError, "<run> has no 'end' attribute");
    }
    script.total_sec = parse_int_text(*end_attr, "run end");

    for (const xml::Element& event : run->children) {
        if (event.name != "event") {
            continue;
        }
        const std::string* event_name = event.attribute("name");
        if (event_name == nullptr || event_name->rfind("enter_", 0) != 0) {
            throw Error(ErrorKind::SchemaError, "event is not an enter_<State> event");
        }
        std::string state = event_name->substr(6);

        int start = -1;
        std::vector<StateAction> actions;
        for (const xml::Element& part : event.children) {
            if (part.name == "condition") {
                std::string text = part.text;
                auto clock_pos = text.find(kClockProperty);
                auto ge_pos = text.find(">=");
                if (clock_pos == std::string::npos || ge_pos == std::string::npos) {
                    throw Error(ErrorKind::SchemaError,
                                "unsupported condition \"" + text + "\" in event '" + *event_name + "'");
                }
                std::string number = text.substr(ge_pos + 2);
                number.erase(0, number.find_first_not_of(" \t"));
                start = parse_int_text(number, "event '" + *event_name + "' condition");
            } else if (part.name == "set") {
                const std::string* prop = part.attribute("name");
                const std::string* value = part.attribute("value");
                if (prop == nullptr || value == nullptr) {
                    throw Error(ErrorKind::SchemaError, "<set> needs 'name' and 'value' attributes");
                }
                actions.push_back({*prop, parse_double_text(*value, "set " + *prop)});
            }
        }
        if (start < 0) {
            throw Error(ErrorKind::SchemaError, "event '" + *event_name + "' has no start condition");
        }
        script.schedule.push_back({state, start, 0});
        if (!actions.empty()) {
            script.actions[state] = std::move(actions);
        }
    }

    if (script.schedule.empty()) {
        throw Error(ErrorKind::EmptySchedule, "runscript schedules no states");
    }
    for (std::size_t i = 0; i < script.schedule.size(); ++i) {
        int next_start = i + 1 < script.schedule.size() ? script.schedule[i + 1].start_sec
                                                        : script.total_sec;
        script.schedule[i].duration_sec = next_start - script.schedule[i].start_sec;
        if (script.schedule[i].duration_sec <= 0) {
            throw Error(ErrorKind::SchemaError,
                        "event start times must be strictly increasing and end after the last event");
        }
    }
    if (script.schedule.front().start_sec != 0) {
        throw Error(ErrorKind::SchemaError, "first event must start at 0");
    }
    return script;
}

} // namespace cdtk::pathgen
