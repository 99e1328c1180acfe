#include "toolroco/tasks.hpp"

#include <fstream>
#include <mutex>
#include <stdexcept>

#include "toolroco/fixtures.hpp"

namespace toolroco {

std::vector<std::string> TaskDefinition::roster() const {
    std::vector<std::string> out;
    for (const auto& [name, r] : initial_state.robots) out.push_back(name);
    return out;
}

bool TaskDefinition::is_success(const WorldState& state) const {
    for (const auto& g : rules.goals) {
        if (!g.satisfied(state)) return false;
    }
    return true;
}

std::string TaskDefinition::observe(const WorldState& state, const std::string& robot) const {
    return toolroco::observe(state, robot, rules);
}

std::vector<std::string> TaskDefinition::object_names() const {
    std::vector<std::string> out;
    for (const auto& [obj, loc] : initial_state.objects) out.push_back(obj);
    return out;
}

std::vector<std::string> TaskDefinition::location_names() const {
    return {rules.locations.begin(), rules.locations.end()};
}

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error("task fixture invalid: " + what);
}

TaskDefinition parse_task(const json& j) {
    TaskDefinition def;
    def.fixture_version = j.at("version").get<int>();
    def.task_id = task_from_string(j.at("task").get<std::string>());
    def.rules.brief = j.at("brief").get<std::string>();

    for (const auto& loc : j.at("locations")) {
        def.rules.locations.insert(loc.get<std::string>());
        def.rules.location_order.push_back(loc.get<std::string>());
    }
    if (j.contains("single_occupancy")) {
        for (const auto& loc : j.at("single_occupancy")) {
            def.rules.single_occupancy.insert(loc.get<std::string>());
        }
    }
    if (j.contains("containers")) {
        for (const auto& loc : j.at("containers")) {
            def.rules.containers.insert(loc.get<std::string>());
        }
    }
    if (j.contains("guarded")) {
        for (const auto& [loc, door] : j.at("guarded").items()) {
            def.rules.guarded[loc] = door.get<std::string>();
        }
    }
    for (const auto& jg : j.at("goals")) {
        def.rules.goals.push_back(GoalSpec{jg.at("name").get<std::string>(),
                                           jg.at("object").get<std::string>(),
                                           jg.at("location").get<std::string>()});
    }
    for (const auto& jt : j.at("tools")) {
        def.common_tools.push_back(tool_spec_from_json(jt));
    }

    WorldState& s = def.initial_state;
    s.task_id = def.task_id;
    s.turn = 0;
    s.objects = j.at("objects").get<std::map<std::string, std::string>>();
    if (j.contains("fixtures")) {
        s.fixtures = j.at("fixtures").get<std::map<std::string, std::string>>();
    }
    for (const auto& jr : j.at("robots")) {
        RobotState r;
        r.name = jr.at("name").get<std::string>();
        for (const auto& loc : jr.at("reach")) r.reach.insert(loc.get<std::string>());
        s.robots.emplace(r.name, std::move(r));
    }
    s.goal_satisfied = evaluate_goals(s, def.rules);
    for (const auto& [name, r] : s.robots) s.active_roster.push_back(name);
    return def;
}

void validate_task(const TaskDefinition& def) {
    const std::size_t robots = def.initial_state.robots.size();
    switch (def.task_id) {
        case TaskId::Cabinet: require(robots == 3, "cabinet needs 3 robots"); break;
        case TaskId::Pack: require(robots == 2, "pack needs 2 robots"); break;
        case TaskId::Sort: require(robots == 3, "sort needs 3 robots"); break;
    }
    if (def.task_id == TaskId::Sort) {
        int panels = 0;
        for (const auto& loc : def.rules.locations) {
            if (loc.rfind("panel", 0) == 0) ++panels;
        }
        require(panels == 7, "sort needs 7 panels");
        require(def.initial_state.objects.size() == 3, "sort needs 3 cubes");
    }
    // Candidate set size: common tools plus the two cooperative tools.
    const std::size_t candidate = def.common_tools.size() + 2;
    require(candidate == 8 || candidate == 9, "candidate tool set must have 8 or 9 tools");

    for (const auto& [obj, loc] : def.initial_state.objects) {
        require(def.rules.locations.count(loc) > 0, "object '" + obj + "' at unknown location");
    }
    for (const auto& [name, r] : def.initial_state.robots) {
        for (const auto& loc : r.reach) {
            require(def.rules.locations.count(loc) > 0,
                    "robot '" + name + "' reaches unknown location");
        }
    }
    for (const auto& g : def.rules.goals) {
        require(def.initial_state.objects.count(g.object) > 0,
                "goal '" + g.name + "' references unknown object");
        require(def.rules.locations.count(g.location) > 0,
                "goal '" + g.name + "' references unknown location");
    }
    for (const auto& [loc, door] : def.rules.guarded) {
        require(def.initial_state.fixtures.count(door) > 0,
                "guard on '" + loc + "' references unknown fixture");
    }
}

TaskDefinition load_from_file(TaskId id) {
    auto path = fixture_dir() / "tasks" / (to_string(id) + ".json");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open task fixture: " + path.string());
    TaskDefinition def = parse_task(json::parse(in));
    require(def.task_id == id, "task id mismatch in " + path.string());
    validate_task(def);
    return def;
}

}  // namespace

const TaskDefinition& load_task(TaskId id) {
    static std::mutex mu;
    static std::map<TaskId, TaskDefinition> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(id);
    if (it == cache.end()) {
        it = cache.emplace(id, load_from_file(id)).first;
    }
    return it->second;
}

}  // namespace toolroco
