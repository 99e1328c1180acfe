#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toolroco/paradigm.hpp"
#include "toolroco/tasks.hpp"
#include "toolroco/toolsys.hpp"

namespace toolroco {

enum class PolicyRole { Central, Local };

enum class PolicyKind { Oracle, Random, Remote };

std::string to_string(PolicyKind k);
PolicyKind policy_kind_from_string(const std::string& s);

struct HistoryEntry {
    int turn = 0;
    std::string agent;
    RawResponse response;
    ValidationStage stage = ValidationStage::UnknownTool;
    std::string exec_summary;
    int reward = 0;
};

// Everything a policy may condition on for one invocation. For the Central
// role the registries map covers every active agent and the observation is
// the concatenation of all active agents' local views.
struct PolicyContext {
    PolicyRole role = PolicyRole::Local;
    std::string agent;  // deciding robot; "central" for the coordinator
    TaskId task_id = TaskId::Cabinet;
    ParadigmId paradigm = ParadigmId::Centralized;
    int turn = 0;
    std::uint64_t episode_seed = 0;
    std::string initial_agent;  // seeded first agent (self-organization)
    int retry_attempt = 0;      // 0 = first attempt, 1 = re-plan
    std::optional<std::string> retry_for;

    std::string observation;
    std::map<std::string, std::vector<ToolSpec>> registries;  // actor -> candidate set
    std::vector<HistoryEntry> history;
    std::vector<std::string> roster;
    std::vector<std::string> active;
    std::vector<std::string> objects;
    std::vector<std::string> locations;
};

struct PolicyDecision {
    std::string target;  // robot this call is for
    RawResponse response;
    bool transport_failed = false;
    std::optional<json> transcript;  // request/response pair (remote only)
};

// Central role: one decision per active agent. Local role: a single decision
// targeting the deciding agent itself.
using PolicyResponse = std::vector<PolicyDecision>;

class Policy {
  public:
    virtual ~Policy() = default;
    virtual PolicyResponse decide(const PolicyContext& ctx) = 0;
    virtual std::string name() const = 0;
};

struct PolicySet {
    std::shared_ptr<Policy> central;
    std::map<std::string, std::shared_ptr<Policy>> locals;
};

// Deterministic plan playback from fixtures/plans/<task>.json. Plans include
// the ACTIVATE steps needed when only one agent starts active; agents without
// a plan entry for a turn fall back to WAIT.
class ScriptedPolicy : public Policy {
  public:
    static std::shared_ptr<ScriptedPolicy> load(TaskId task);

    PolicyResponse decide(const PolicyContext& ctx) override;
    std::string name() const override { return "oracle"; }

    // Hand-counted per-episode step totals for the self-organization plan,
    // used to cross-check the cooperation metrics.
    struct SelfOrgExpected {
        int n_tools = 0;
        int n_cooperative = 0;
        int n_activate = 0;
    };
    const std::optional<SelfOrgExpected>& self_org_expected() const { return expected_; }

  private:
    struct Plan {
        // turns[t][robot] -> scripted response
        std::vector<std::map<std::string, RawResponse>> turns;
    };

    RawResponse lookup(const Plan& plan, int turn, const std::string& agent) const;
    const Plan& plan_for(const PolicyContext& ctx) const;

    Plan joint_;
    std::map<std::string, Plan> by_initial_;
    std::optional<SelfOrgExpected> expected_;
};

// Uniform baseline: picks a uniformly random tool from the offered registry
// and fills parameters from the task vocabulary. Fully determined by
// (episode seed, agent, turn, attempt).
class RandomPolicy : public Policy {
  public:
    PolicyResponse decide(const PolicyContext& ctx) override;
    std::string name() const override { return "random"; }
};

PolicySet make_builtin_policy_set(PolicyKind kind, TaskId task);

// Deterministic prompt rendering. The Central prompt embeds every active
// agent's candidate set and observation; a Local prompt only its own.
std::string render_prompt(const PolicyContext& ctx);
std::uint64_t prompt_template_hash();

}  // namespace toolroco
