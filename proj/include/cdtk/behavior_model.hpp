#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::behavior {

struct Transition {
    std::string source;
    std::string event;
    std::string target;

    bool operator==(const Transition&) const = default;
};

/// A flattened, deterministic state machine. Transition order is exactly the
/// file order; it is the tie-breaker everywhere downstream.
struct StateMachine {
    std::string name;
    std::vector<std::string> states;
    std::string initial;
    std::vector<std::string> finals;
    std::vector<Transition> transitions;

    bool has_state(std::string_view state) const;
    bool is_final(std::string_view state) const;
    std::vector<const Transition*> outgoing(std::string_view state) const;

    bool operator==(const StateMachine&) const = default;
};

StateMachine parse_state_machine(std::string_view bytes);
std::string to_json(const StateMachine& sm);

std::set<std::string> reachable_states(const StateMachine& sm);

} // namespace cdtk::behavior
