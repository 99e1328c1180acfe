#pragma once

#include <string>
#include <vector>

#include "toolroco/toolsys.hpp"
#include "toolroco/world.hpp"

namespace toolroco {

// Frozen description of one task instance, loaded from fixtures/tasks/*.json
// and validated against the structural invariants at load time. Immutable
// after load and freely shareable.
struct TaskDefinition {
    TaskId task_id = TaskId::Cabinet;
    WorldState initial_state;
    WorldRules rules;
    std::vector<ToolSpec> common_tools;
    int fixture_version = 0;

    std::vector<std::string> roster() const;
    bool is_success(const WorldState& state) const;
    std::string observe(const WorldState& state, const std::string& robot) const;

    std::vector<std::string> object_names() const;
    std::vector<std::string> location_names() const;
};

// Returns the cached canonical definition; repeated calls are identical.
const TaskDefinition& load_task(TaskId id);

inline constexpr std::array<TaskId, 3> kAllTasks = {TaskId::Cabinet, TaskId::Pack,
                                                    TaskId::Sort};

}  // namespace toolroco
