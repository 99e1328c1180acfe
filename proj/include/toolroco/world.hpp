#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "toolroco/toolsys.hpp"

namespace toolroco {

enum class TaskId { Cabinet, Pack, Sort };

std::string to_string(TaskId t);
TaskId task_from_string(const std::string& s);

enum class ExecStatus { Ok, ExecInvalid };

enum class Violation { OutOfReach, PreconditionFailed, Conflict, FixtureBlocked };

std::string to_string(ExecStatus s);
std::string to_string(Violation v);
ExecStatus exec_status_from_string(const std::string& s);
Violation violation_from_string(const std::string& s);

struct ExecResult {
    ExecStatus status = ExecStatus::Ok;
    int reward = 0;  // nonnegative delta of satisfied goal predicates
    std::string message;
    std::optional<Violation> violation;

    static ExecResult ok(int reward, std::string message) {
        return {ExecStatus::Ok, reward, std::move(message), std::nullopt};
    }
    static ExecResult invalid(Violation v, std::string message) {
        return {ExecStatus::ExecInvalid, 0, std::move(message), v};
    }
};

struct RobotState {
    std::string name;
    std::optional<std::string> holding;          // object in the gripper
    std::optional<std::string> holding_fixture;  // e.g. the cabinet door
    std::set<std::string> reach;                 // immutable for the episode

    bool gripper_free() const { return !holding && !holding_fixture; }
};

// Objects held by a robot live at "gripper:<robot>".
std::string gripper_location(const std::string& robot);

struct WorldState {
    TaskId task_id = TaskId::Cabinet;
    std::map<std::string, std::string> objects;   // object -> location
    std::map<std::string, RobotState> robots;     // keyed by name; iteration is alphabetical
    std::map<std::string, std::string> fixtures;  // fixture -> state ("OPEN", "CLOSED", ...)
    int turn = 0;
    std::vector<bool> goal_satisfied;  // one flag per goal predicate, in task order

    // Stamped by the episode runner after each turn; feeds the next observation.
    std::map<std::string, std::vector<std::string>> feedback;  // robot -> messages
    std::vector<std::string> active_roster;
};

// Goal predicate: object is at the named location.
struct GoalSpec {
    std::string name;
    std::string object;
    std::string location;

    bool satisfied(const WorldState& s) const {
        auto it = s.objects.find(object);
        return it != s.objects.end() && it->second == location;
    }
};

// Static per-task rules the transition engine needs: the location vocabulary,
// capacity limits, door guards and the goal predicates.
struct WorldRules {
    std::set<std::string> locations;
    std::set<std::string> single_occupancy;            // at most one object
    std::set<std::string> containers;                  // rendered "in the X" instead of "on the X"
    std::map<std::string, std::string> guarded;        // location -> door fixture gating access
    std::vector<GoalSpec> goals;
    std::string brief;                                 // task description shown in every observation
    std::vector<std::string> location_order;           // display order
};

int satisfied_count(const WorldState& s, const WorldRules& rules);
std::vector<bool> evaluate_goals(const WorldState& s, const WorldRules& rules);

// Applies one already-validated call. Pure: returns a fresh state, never
// mutates the input. On EXEC_INVALID the returned state equals the input.
std::pair<WorldState, ExecResult> apply_tool(const WorldState& state, const std::string& robot,
                                             const ValidToolCall& call, const WorldRules& rules);

// Serializes one turn's simultaneous calls: fixed alphabetical robot order,
// first successful claim on an object / fixture / slot wins, later claimants
// get EXEC_INVALID(CONFLICT). finish() advances the turn counter.
class TurnResolver {
  public:
    TurnResolver(WorldState state, const WorldRules& rules);

    ExecResult apply(const std::string& robot, const ValidToolCall& call);
    const WorldState& current() const { return state_; }
    WorldState finish();

  private:
    WorldState state_;
    const WorldRules& rules_;
    std::set<std::string> claims_;
};

std::pair<WorldState, std::vector<ExecResult>> resolve_turn(
    const WorldState& state, const std::vector<std::pair<std::string, ValidToolCall>>& calls,
    const WorldRules& rules);

// Natural-language local view: task brief, active roster, reach, gripper,
// reach-visible object locations, fixture states and last turn's feedback.
// Deterministic: same state and robot give a byte-identical string.
std::string observe(const WorldState& state, const std::string& robot, const WorldRules& rules);

json to_json(const WorldState& s);
WorldState world_from_json(const json& j);

// Canonical serialization (sorted keys, no whitespace) and its FNV-1a hash.
std::string canonical_json(const WorldState& s);
std::uint64_t state_hash(const WorldState& s);

}  // namespace toolroco
