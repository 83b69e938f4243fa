#include "cdtk/behavior_model.hpp"

#include "cdtk/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <deque>

namespace cdtk::behavior {

using nlohmann::json;

bool StateMachine::has_state(std::string_view state) const {
    return std::find(states.begin(), states.end(), state) != states.end();
}

bool StateMachine::is_final(std::string_view state) const {
    return std::find(finals.begin(), finals.end(), state) != finals.end();
}

std::vector<const Transition*> StateMachine::outgoing(std::string_view state) const {
    std::vector<const Transition*> result;
    for (const Transition& transition : transitions) {
        if (transition.source == state) {
            result.push_back(&transition);
        }
    }
    return result;
}

namespace {

bool valid_state_name(const std::string& name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) {
        return false;
    }
    return std::all_of(name.begin(), name.end(),
                       [](unsigned char c) { return std::isalnum(c); });
}

} // namespace

StateMachine parse_state_machine(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SyntaxError, std::string("state machine JSON: ") + e.what());
    }

    StateMachine sm;
    try {
        sm.name = doc.value("name", "");
        for (const json& state : doc.at("states")) {
            std::string name = state.get<std::string>();
            if (!valid_state_name(name)) {
                throw Error(ErrorKind::SyntaxError, "invalid state name \"" + name + "\"");
            }
            if (sm.has_state(name)) {
                throw Error(ErrorKind::DuplicateName, "state '" + name + "' declared twice");
            }
            sm.states.push_back(std::move(name));
        }
        if (!doc.contains("initial") || doc.at("initial").get<std::string>().empty()) {
            throw Error(ErrorKind::NoInitial, "machine declares no initial state");
        }
        sm.initial = doc.at("initial").get<std::string>();
        if (!sm.has_state(sm.initial)) {
            throw Error(ErrorKind::UnknownState, "initial state '" + sm.initial + "' is not declared");
        }
        for (const json& final_state : doc.value("finals", json::array())) {
            std::string name = final_state.get<std::string>();
            if (!sm.has_state(name)) {
                throw Error(ErrorKind::UnknownState, "final state '" + name + "' is not declared");
            }
            sm.finals.push_back(std::move(name));
        }
        for (const json& t : doc.value("transitions", json::array())) {
            Transition transition;
            transition.source = t.at("source").get<std::string>();
            transition.event = t.at("event").get<std::string>();
            transition.target = t.at("target").get<std::string>();
            if (transition.event.empty()) {
                throw Error(ErrorKind::SyntaxError, "transition from '" + transition.source +
                                                        "' has an empty event");
            }
            for (const std::string& endpoint : {transition.source, transition.target}) {
                if (!sm.has_state(endpoint)) {
                    throw Error(ErrorKind::UnknownState,
                                "transition references undeclared state '" + endpoint + "'");
                }
            }
            for (const Transition& existing : sm.transitions) {
                if (existing.source == transition.source && existing.event == transition.event) {
                    throw Error(ErrorKind::NondeterministicMachine,
                                "duplicate (source, event) pair ('" + transition.source + "', '" +
                                    transition.event + "')");
                }
            }
            sm.transitions.push_back(std::move(transition));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SyntaxError, std::string("state machine JSON: ") + e.what());
    }
    return sm;
}

std::string to_json(const StateMachine& sm) {
    json transitions = json::array();
    for (const Transition& t : sm.transitions) {
        transitions.push_back({{"source", t.source}, {"event", t.event}, {"target", t.target}});
    }
    json doc = {{"name", sm.name},
                {"states", sm.states},
                {"initial", sm.initial},
                {"finals", sm.finals},
                {"transitions", transitions}};
    return doc.dump(2) + "\n";
}

std::set<std::string> reachable_states(const StateMachine& sm) {
    std::set<std::string> visited{sm.initial};
    std::deque<std::string> frontier{sm.initial};
    while (!frontier.empty()) {
        std::string state = std::move(frontier.front());
        frontier.pop_front();
        for (const Transition* transition : sm.outgoing(state)) {
            if (visited.insert(transition->target).second) {
                frontier.push_back(transition->target);
            }
        }
    }
    return visited;
}

} // namespace cdtk::behavior
