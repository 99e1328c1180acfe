#include "toolroco/world.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "toolroco/fixtures.hpp"
#include "toolroco/hash.hpp"

namespace toolroco {

std::string to_string(TaskId t) {
    switch (t) {
        case TaskId::Cabinet: return "cabinet";
        case TaskId::Pack: return "pack";
        case TaskId::Sort: return "sort";
    }
    return "?";
}

TaskId task_from_string(const std::string& s) {
    if (s == "cabinet") return TaskId::Cabinet;
    if (s == "pack") return TaskId::Pack;
    if (s == "sort") return TaskId::Sort;
    throw std::invalid_argument("unknown task: " + s);
}

std::string to_string(ExecStatus s) {
    return s == ExecStatus::Ok ? "OK" : "EXEC_INVALID";
}

ExecStatus exec_status_from_string(const std::string& s) {
    if (s == "OK") return ExecStatus::Ok;
    if (s == "EXEC_INVALID") return ExecStatus::ExecInvalid;
    throw std::invalid_argument("unknown exec status: " + s);
}

std::string to_string(Violation v) {
    switch (v) {
        case Violation::OutOfReach: return "OUT_OF_REACH";
        case Violation::PreconditionFailed: return "PRECONDITION_FAILED";
        case Violation::Conflict: return "CONFLICT";
        case Violation::FixtureBlocked: return "FIXTURE_BLOCKED";
    }
    return "?";
}

Violation violation_from_string(const std::string& s) {
    if (s == "OUT_OF_REACH") return Violation::OutOfReach;
    if (s == "PRECONDITION_FAILED") return Violation::PreconditionFailed;
    if (s == "CONFLICT") return Violation::Conflict;
    if (s == "FIXTURE_BLOCKED") return Violation::FixtureBlocked;
    throw std::invalid_argument("unknown violation: " + s);
}

std::string gripper_location(const std::string& robot) { return "gripper:" + robot; }

std::vector<bool> evaluate_goals(const WorldState& s, const WorldRules& rules) {
    std::vector<bool> out;
    out.reserve(rules.goals.size());
    for (const auto& g : rules.goals) out.push_back(g.satisfied(s));
    return out;
}

int satisfied_count(const WorldState& s, const WorldRules& rules) {
    int n = 0;
    for (const auto& g : rules.goals) {
        if (g.satisfied(s)) ++n;
    }
    return n;
}

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return s;
}

std::string display_fixture(std::string s) {
    std::replace(s.begin(), s.end(), '_', ' ');
    return s;
}

std::string prep_for(const WorldRules& rules, const std::string& loc) {
    return rules.containers.count(loc) ? "in" : "on";
}

// The single door fixture of the task, if any.
const std::string* door_fixture(const WorldRules& rules) {
    if (rules.guarded.empty()) return nullptr;
    return &rules.guarded.begin()->second;
}

const std::string* door_location(const WorldRules& rules) {
    if (rules.guarded.empty()) return nullptr;
    return &rules.guarded.begin()->first;
}

bool door_held_by_someone(const WorldState& s, const std::string& door) {
    for (const auto& [name, r] : s.robots) {
        if (r.holding_fixture && *r.holding_fixture == door) return true;
    }
    return false;
}

// Checks the door guard for access into `loc`. Returns an error, or nullopt.
std::optional<ExecResult> check_guard(const WorldState& s, const WorldRules& rules,
                                      const std::string& loc) {
    auto it = rules.guarded.find(loc);
    if (it == rules.guarded.end()) return std::nullopt;
    const std::string& door = it->second;
    auto st = s.fixtures.find(door);
    if (st == s.fixtures.end() || st->second != "OPEN") {
        return ExecResult::invalid(
            Violation::PreconditionFailed,
            feedback_message("err_door_closed", {{"fixture", display_fixture(door)}}));
    }
    if (!door_held_by_someone(s, door)) {
        return ExecResult::invalid(
            Violation::PreconditionFailed,
            feedback_message("err_door_not_held", {{"fixture", display_fixture(door)}}));
    }
    return std::nullopt;
}

const std::string* occupant_of(const WorldState& s, const std::string& loc,
                               const std::string& ignore_object) {
    for (const auto& [obj, at] : s.objects) {
        if (at == loc && obj != ignore_object) return &obj;
    }
    return nullptr;
}

std::optional<ExecResult> check_destination(const WorldState& s, const WorldRules& rules,
                                            const RobotState& robot, const std::string& to,
                                            const std::string& object) {
    if (!rules.locations.count(to)) {
        return ExecResult::invalid(Violation::PreconditionFailed,
                                   feedback_message("err_unknown_location", {{"location", to}}));
    }
    if (!robot.reach.count(to)) {
        return ExecResult::invalid(
            Violation::OutOfReach,
            feedback_message("err_out_of_reach", {{"location", to}, {"robot", robot.name}}));
    }
    if (auto err = check_guard(s, rules, to)) return err;
    if (rules.single_occupancy.count(to)) {
        if (const std::string* other = occupant_of(s, to, object)) {
            return ExecResult::invalid(
                Violation::FixtureBlocked,
                feedback_message("err_slot_occupied",
                                 {{"location", to}, {"other", upper(*other)}}));
        }
    }
    return std::nullopt;
}

// Checks that `object` sits at `from`, which must be reachable and unguarded
// or properly held open.
std::optional<ExecResult> check_source(const WorldState& s, const WorldRules& rules,
                                       const RobotState& robot, const std::string& object,
                                       const std::string& from) {
    auto it = s.objects.find(object);
    if (it == s.objects.end()) {
        return ExecResult::invalid(Violation::PreconditionFailed,
                                   feedback_message("err_unknown_object", {{"object", object}}));
    }
    if (it->second != from) {
        return ExecResult::invalid(
            Violation::PreconditionFailed,
            feedback_message("err_not_at_location", {{"object", upper(object)},
                                                     {"prep", prep_for(rules, from)},
                                                     {"location", from}}));
    }
    if (!robot.reach.count(from)) {
        return ExecResult::invalid(
            Violation::OutOfReach,
            feedback_message("err_out_of_reach", {{"location", from}, {"robot", robot.name}}));
    }
    return check_guard(s, rules, from);
}

ExecResult finish_ok(WorldState& next, const WorldRules& rules, int before,
                     std::string message) {
    next.goal_satisfied = evaluate_goals(next, rules);
    int after = satisfied_count(next, rules);
    int reward = std::max(0, after - before);
    return ExecResult::ok(reward, std::move(message));
}

}  // namespace

std::pair<WorldState, ExecResult> apply_tool(const WorldState& state, const std::string& robot,
                                             const ValidToolCall& call,
                                             const WorldRules& rules) {
    auto rit = state.robots.find(robot);
    if (rit == state.robots.end()) {
        throw std::out_of_range("apply_tool: unknown robot '" + robot + "'");
    }
    const RobotState& self = rit->second;
    const int before = satisfied_count(state, rules);
    WorldState next = state;

    auto fail = [&](ExecResult r) { return std::make_pair(state, std::move(r)); };

    if (call.name == "WAIT") {
        next.goal_satisfied = evaluate_goals(next, rules);
        return {std::move(next),
                ExecResult::ok(0, feedback_message("wait_ok", {{"robot", self.name}}))};
    }

    if (call.name == "PICK") {
        const auto& object = call.str("object");
        const auto& from = call.str("from");
        if (!self.gripper_free()) {
            return fail(ExecResult::invalid(
                Violation::PreconditionFailed,
                feedback_message("err_gripper_occupied", {{"robot", self.name}})));
        }
        if (auto err = check_source(state, rules, self, object, from)) return fail(*err);
        next.objects[object] = gripper_location(self.name);
        next.robots[self.name].holding = object;
        return {std::move(next),
                finish_ok(next, rules, before,
                          feedback_message("pick_ok", {{"robot", self.name},
                                                       {"object", upper(object)},
                                                       {"location", from}}))};
    }

    if (call.name == "PLACE") {
        const auto& object = call.str("object");
        const auto& to = call.str("to");
        if (!self.holding || *self.holding != object) {
            return fail(ExecResult::invalid(
                Violation::PreconditionFailed,
                feedback_message("err_not_holding",
                                 {{"robot", self.name}, {"object", upper(object)}})));
        }
        if (auto err = check_destination(state, rules, self, to, object)) return fail(*err);
        next.objects[object] = to;
        next.robots[self.name].holding.reset();
        return {std::move(next),
                finish_ok(next, rules, before,
                          feedback_message("place_ok", {{"robot", self.name},
                                                        {"object", upper(object)},
                                                        {"prep", prep_for(rules, to)},
                                                        {"location", to}}))};
    }

    if (call.name == "MOVE") {
        const auto& object = call.str("object");
        const auto& to = call.str("to");
        if (!self.gripper_free()) {
            return fail(ExecResult::invalid(
                Violation::PreconditionFailed,
                feedback_message("err_gripper_occupied", {{"robot", self.name}})));
        }
        auto at = state.objects.find(object);
        if (at == state.objects.end()) {
            return fail(ExecResult::invalid(
                Violation::PreconditionFailed,
                feedback_message("err_unknown_object", {{"object", object}})));
        }
        if (auto err = check_source(state, rules, self, object, at->second)) return fail(*err);
        if (auto err = check_destination(state, rules, self, to, object)) return fail(*err);
        next.objects[object] = to;
        return {std::move(next),
                finish_ok(next, rules, before,
                          feedback_message("move_ok", {{"robot", self.name},
                                                       {"object", upper(object)},
                                                       {"location", to}}))};
    }

    if (call.name == "PLACE_IN_BIN") {
        const auto& object = call.str("object");
        if (!self.holding || *self.holding != object) {
            return fail(ExecResult::invalid(
                Violation::PreconditionFailed,
                feedback_message("err_not_holding",
                                 {{"robot", self.name}, {"object", upper(object)}})));
        }
        if (!self.reach.count("bin")) {
            return fail(ExecResult::invalid(
                Violation::OutOfReach,
                feedback_message("err_out_of_reach", {{"location", "bin"}, {"robot", self.name}})));
        }
        next.objects[object] = "bin";
        next.robots[self.name].holding.reset();
        return {std::move(next),
                finish_ok(next, rules, before,
                          feedback_message("bin_ok",
                                           {{"robot", self.name}, {"object", upper(object)}}))};
    }

    if (call.name == "INSPECT") {
        const auto& object = call.str("object");
        auto at = state.objects.find(object);
        if (at == state.objects.end()) {
            return fail(ExecResult::invalid(
                Violation::PreconditionFailed,
                feedback_message("err_unknown_object", {{"object", object}})));
        }
        std::string msg;
        if (at->second.rfind("gripper:", 0) == 0) {
            msg = feedback_message("inspect_held", {{"object", upper(object)},
                                                    {"holder", at->second.substr(8)}});
        } else {
            msg = feedback_message("inspect_ok", {{"object", upper(object)},
                                                  {"prep", prep_for(rules, at->second)},
                                                  {"location", at->second}});
        }
        next.goal_satisfied = evaluate_goals(next, rules);
        return {std::move(next), ExecResult::ok(0, std::move(msg))};
    }

    if (call.name == "SCAN") {
        std::ostringstream contents;
        bool first = true;
        for (const auto& loc : rules.location_order) {
            if (!self.reach.count(loc)) continue;
            if (!first) contents << "; ";
            first = false;
            contents << loc << ": ";
            if (const std::string* obj = occupant_of(state, loc, "")) {
                contents << upper(*obj);
            } else {
                contents << "empty";
            }
        }
        next.goal_satisfied = evaluate_goals(next, rules);
        return {std::move(next),
                ExecResult::ok(0, feedback_message("scan_ok", {{"robot", self.name},
                                                               {"contents", contents.str()}}))};
    }

    if (call.name == "OPEN_DOOR" || call.name == "HOLD_DOOR" || call.name == "RELEASE_DOOR") {
        const std::string* door = door_fixture(rules);
        const std::string* door_loc = door_location(rules);
        if (door == nullptr) {
            return fail(ExecResult::invalid(Violation::PreconditionFailed,
                                            feedback_message("err_no_door", {})));
        }
        const std::string fixture_name = display_fixture(*door);
        if (call.name == "RELEASE_DOOR") {
            if (!self.holding_fixture || *self.holding_fixture != *door) {
                return fail(ExecResult::invalid(
                    Violation::PreconditionFailed,
                    feedback_message("err_not_holding_door", {{"robot", self.name}})));
            }
            next.robots[self.name].holding_fixture.reset();
            return {std::move(next),
                    finish_ok(next, rules, before,
                              feedback_message("release_door_ok",
                                               {{"robot", self.name}, {"fixture", fixture_name}}))};
        }
        if (!self.reach.count(*door_loc)) {
            return fail(ExecResult::invalid(
                Violation::OutOfReach,
                feedback_message("err_out_of_reach",
                                 {{"location", *door_loc}, {"robot", self.name}})));
        }
        if (!self.gripper_free()) {
            return fail(ExecResult::invalid(
                Violation::PreconditionFailed,
                feedback_message("err_gripper_occupied", {{"robot", self.name}})));
        }
        const std::string& door_state = state.fixtures.at(*door);
        if (call.name == "OPEN_DOOR") {
            if (door_state != "CLOSED") {
                return fail(ExecResult::invalid(
                    Violation::PreconditionFailed,
                    feedback_message("err_door_already_open", {{"fixture", fixture_name}})));
            }
            next.fixtures[*door] = "OPEN";
            return {std::move(next),
                    finish_ok(next, rules, before,
                              feedback_message("open_door_ok",
                                               {{"robot", self.name}, {"fixture", fixture_name}}))};
        }
        // HOLD_DOOR
        if (door_state != "OPEN") {
            return fail(ExecResult::invalid(
                Violation::PreconditionFailed,
                feedback_message("err_door_not_open", {{"fixture", fixture_name}})));
        }
        if (door_held_by_someone(state, *door)) {
            return fail(ExecResult::invalid(
                Violation::PreconditionFailed,
                feedback_message("err_door_already_held", {{"fixture", fixture_name}})));
        }
        next.robots[self.name].holding_fixture = *door;
        return {std::move(next),
                finish_ok(next, rules, before,
                          feedback_message("hold_door_ok",
                                           {{"robot", self.name}, {"fixture", fixture_name}}))};
    }

    return fail(ExecResult::invalid(Violation::PreconditionFailed,
                                    "tool '" + call.name + "' has no effect in this task"));
}

namespace {

// Identifiers a call mutates; first successful claimant per turn wins.
std::vector<std::string> claims_for(const ValidToolCall& call, const WorldRules& rules) {
    std::vector<std::string> out;
    auto claim_slot = [&](const std::string& loc) {
        if (rules.single_occupancy.count(loc)) out.push_back("slot:" + loc);
    };
    if (call.name == "PICK" || call.name == "PLACE_IN_BIN") {
        out.push_back("obj:" + call.str("object"));
    } else if (call.name == "PLACE" || call.name == "MOVE") {
        out.push_back("obj:" + call.str("object"));
        claim_slot(call.str("to"));
    } else if (call.name == "OPEN_DOOR" || call.name == "HOLD_DOOR" ||
               call.name == "RELEASE_DOOR") {
        if (const std::string* door = door_fixture(rules)) out.push_back("fix:" + *door);
    }
    return out;
}

std::string claim_display(const std::string& claim) {
    auto pos = claim.find(':');
    return display_fixture(claim.substr(pos + 1));
}

}  // namespace

TurnResolver::TurnResolver(WorldState state, const WorldRules& rules)
    : state_(std::move(state)), rules_(rules) {}

ExecResult TurnResolver::apply(const std::string& robot, const ValidToolCall& call) {
    auto claims = claims_for(call, rules_);
    for (const auto& c : claims) {
        if (claims_.count(c)) {
            return ExecResult::invalid(
                Violation::Conflict,
                feedback_message("err_conflict", {{"target", claim_display(c)}}));
        }
    }
    auto [next, result] = apply_tool(state_, robot, call, rules_);
    if (result.status == ExecStatus::Ok) {
        state_ = std::move(next);
        claims_.insert(claims.begin(), claims.end());
    }
    return result;
}

WorldState TurnResolver::finish() {
    WorldState out = std::move(state_);
    out.turn += 1;
    return out;
}

std::pair<WorldState, std::vector<ExecResult>> resolve_turn(
    const WorldState& state, const std::vector<std::pair<std::string, ValidToolCall>>& calls,
    const WorldRules& rules) {
    std::vector<std::size_t> order(calls.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return calls[a].first < calls[b].first;
    });

    TurnResolver resolver(state, rules);
    std::vector<ExecResult> results(calls.size());
    for (std::size_t i : order) {
        results[i] = resolver.apply(calls[i].first, calls[i].second);
    }
    return {resolver.finish(), std::move(results)};
}

std::string observe(const WorldState& state, const std::string& robot,
                    const WorldRules& rules) {
    auto rit = state.robots.find(robot);
    if (rit == state.robots.end()) {
        throw std::out_of_range("observe: unknown robot '" + robot + "'");
    }
    const RobotState& self = rit->second;

    std::ostringstream out;
    out << "You are " << self.name << ". Task: " << upper(to_string(state.task_id))
        << ". Turn " << state.turn << ".\n";
    out << rules.brief << "\n";

    out << "Active agents:";
    if (state.active_roster.empty()) {
        out << " (unknown)";
    } else {
        for (std::size_t i = 0; i < state.active_roster.size(); ++i) {
            out << (i ? ", " : " ") << state.active_roster[i];
        }
    }
    out << ".\n";

    out << "Your reachable locations:";
    bool first = true;
    for (const auto& loc : self.reach) {
        out << (first ? " " : ", ") << loc;
        first = false;
    }
    out << ".\n";

    out << "Your gripper: ";
    if (self.holding) {
        out << "holding the " << upper(*self.holding);
    } else if (self.holding_fixture) {
        out << "holding the " << display_fixture(*self.holding_fixture) << " open";
    } else {
        out << "empty";
    }
    out << ".\n";

    out << "Visible objects:\n";
    bool any = false;
    for (const auto& [obj, loc] : state.objects) {
        if (loc.rfind("gripper:", 0) == 0) continue;  // grippers are private
        if (!self.reach.count(loc)) continue;
        out << "- the " << upper(obj) << " is " << prep_for(rules, loc) << " the " << loc
            << ".\n";
        any = true;
    }
    if (!any) out << "- none.\n";

    for (const auto& [loc, door] : rules.guarded) {
        if (!self.reach.count(loc)) continue;
        auto st = state.fixtures.find(door);
        if (st != state.fixtures.end()) {
            out << "The " << display_fixture(door) << " is " << st->second;
            if (st->second == "OPEN") {
                out << (door_held_by_someone(state, door) ? " and held" : " but not held");
            }
            out << ".\n";
        }
    }

    out << "Feedback from last turn:\n";
    auto fb = state.feedback.find(robot);
    if (fb == state.feedback.end() || fb->second.empty()) {
        out << "- none.\n";
    } else {
        for (const auto& msg : fb->second) out << "- " << msg << "\n";
    }
    return out.str();
}

json to_json(const WorldState& s) {
    json robots = json::object();
    for (const auto& [name, r] : s.robots) {
        robots[name] = {
            {"holding", r.holding ? json(*r.holding) : json(nullptr)},
            {"holding_fixture", r.holding_fixture ? json(*r.holding_fixture) : json(nullptr)},
            {"reach", r.reach},
        };
    }
    return {
        {"task", to_string(s.task_id)},
        {"turn", s.turn},
        {"objects", s.objects},
        {"robots", robots},
        {"fixtures", s.fixtures},
        {"goal_satisfied", s.goal_satisfied},
        {"feedback", s.feedback},
        {"active", s.active_roster},
    };
}

WorldState world_from_json(const json& j) {
    WorldState s;
    s.task_id = task_from_string(j.at("task").get<std::string>());
    s.turn = j.at("turn").get<int>();
    s.objects = j.at("objects").get<std::map<std::string, std::string>>();
    for (const auto& [name, jr] : j.at("robots").items()) {
        RobotState r;
        r.name = name;
        if (!jr.at("holding").is_null()) r.holding = jr.at("holding").get<std::string>();
        if (!jr.at("holding_fixture").is_null()) {
            r.holding_fixture = jr.at("holding_fixture").get<std::string>();
        }
        r.reach = jr.at("reach").get<std::set<std::string>>();
        s.robots.emplace(name, std::move(r));
    }
    s.fixtures = j.at("fixtures").get<std::map<std::string, std::string>>();
    s.goal_satisfied = j.at("goal_satisfied").get<std::vector<bool>>();
    s.feedback = j.at("feedback").get<std::map<std::string, std::vector<std::string>>>();
    s.active_roster = j.at("active").get<std::vector<std::string>>();
    return s;
}

std::string canonical_json(const WorldState& s) { return to_json(s).dump(); }

std::uint64_t state_hash(const WorldState& s) { return fnv1a64(canonical_json(s)); }

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace toolroco
