#pragma once

#include "cdtk/behavior_model.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::pathgen {

struct TreeNode {
    std::string state;
    std::string via_event;      // empty at the root
    bool is_repeat_leaf = false;
    std::vector<TreeNode> children;

    bool operator==(const TreeNode&) const = default;
};

struct TransitionTree {
    TreeNode root;

    bool operator==(const TransitionTree&) const = default;
};

struct TestPath {
    std::vector<std::string> states;
    std::vector<std::string> events;
    bool reaches_final = false;

    bool operator==(const TestPath&) const = default;
};

struct StateAction {
    std::string property;
    double value = 0.0;

    bool operator==(const StateAction&) const = default;
};

struct ScheduleEntry {
    std::string state;
    int start_sec = 0;
    int duration_sec = 0;

    bool operator==(const ScheduleEntry&) const = default;
};

struct SimScript {
    std::string name;
    std::vector<ScheduleEntry> schedule;
    int total_sec = 0;
    std::map<std::string, std::vector<StateAction>> actions;

    bool operator==(const SimScript&) const = default;
};

struct Tables {
    std::map<std::string, int> durations;
    std::map<std::string, std::vector<StateAction>> actions;
};

/// Depth-first unrolling of the machine from its initial state. A child whose
/// state already occurs on the path from the root becomes a repeat leaf and is
/// not expanded further; children follow transition declaration order.
TransitionTree build_transition_tree(const behavior::StateMachine& sm);

/// One TestPath per root-to-leaf path, in left-to-right tree order.
std::vector<TestPath> extract_paths(const TransitionTree& tree, const behavior::StateMachine& sm);

struct ScriptGenResult {
    std::vector<SimScript> scripts;
    std::vector<std::string> warnings;
};

/// Emits one script per path that ends in a final state. Script names carry
/// the path's index in the full path list.
ScriptGenResult generate_scripts(const std::vector<TestPath>& paths, const Tables& tables);

std::string to_json(const TransitionTree& tree);
std::string to_json(const std::vector<TestPath>& paths);
std::vector<TestPath> paths_from_json(std::string_view bytes);

Tables tables_from_json(std::string_view bytes);

std::string to_runscript_xml(const SimScript& script);
SimScript parse_runscript_xml(std::string_view bytes);

} // namespace cdtk::pathgen
