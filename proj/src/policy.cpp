#include "toolroco/policy.hpp"

#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "toolroco/fixtures.hpp"
#include "toolroco/hash.hpp"

namespace toolroco {

std::string to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::Oracle: return "oracle";
        case PolicyKind::Random: return "random";
        case PolicyKind::Remote: return "remote";
    }
    return "?";
}

PolicyKind policy_kind_from_string(const std::string& s) {
    if (s == "oracle") return PolicyKind::Oracle;
    if (s == "random") return PolicyKind::Random;
    if (s == "remote") return PolicyKind::Remote;
    throw std::invalid_argument("unknown policy: " + s);
}

namespace {

RawResponse wait_response() {
    RawResponse r;
    r.tool_name = "WAIT";
    r.raw_params = json::object();
    return r;
}

RawResponse response_from_json(const json& j) {
    RawResponse r;
    if (j.contains("reasoning")) r.reasoning = j.at("reasoning").get<std::string>();
    r.tool_name = j.at("tool").get<std::string>();
    r.raw_params = j.contains("params") ? j.at("params") : json::object();
    return r;
}

ScriptedPolicy::Plan parse_plan(const json& j) {
    ScriptedPolicy::Plan plan;
    for (const auto& jturn : j.at("turns")) {
        std::map<std::string, RawResponse> calls;
        for (const auto& [robot, jcall] : jturn.items()) {
            calls.emplace(robot, response_from_json(jcall));
        }
        plan.turns.push_back(std::move(calls));
    }
    return plan;
}

}  // namespace

std::shared_ptr<ScriptedPolicy> ScriptedPolicy::load(TaskId task) {
    static std::mutex mu;
    static std::map<TaskId, std::shared_ptr<ScriptedPolicy>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(task);
    if (it != cache.end()) return it->second;

    auto path = fixture_dir() / "plans" / (to_string(task) + ".json");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan fixture: " + path.string());
    json j = json::parse(in);

    auto policy = std::make_shared<ScriptedPolicy>();
    policy->joint_ = parse_plan(j.at("joint"));
    for (const auto& [initial, jplan] : j.at("self_org").at("by_initial").items()) {
        policy->by_initial_.emplace(initial, parse_plan(jplan));
    }
    if (j.at("self_org").contains("expected")) {
        const auto& e = j.at("self_org").at("expected");
        policy->expected_ = SelfOrgExpected{e.at("n_tools").get<int>(),
                                            e.at("n_cooperative").get<int>(),
                                            e.at("n_activate").get<int>()};
    }
    cache.emplace(task, policy);
    return policy;
}

const ScriptedPolicy::Plan& ScriptedPolicy::plan_for(const PolicyContext& ctx) const {
    if (ctx.paradigm == ParadigmId::SelfOrganization) {
        auto it = by_initial_.find(ctx.initial_agent);
        if (it == by_initial_.end()) {
            throw std::runtime_error("plan fixture has no variant for initial agent '" +
                                     ctx.initial_agent + "'");
        }
        return it->second;
    }
    return joint_;
}

RawResponse ScriptedPolicy::lookup(const Plan& plan, int turn, const std::string& agent) const {
    if (turn < static_cast<int>(plan.turns.size())) {
        auto it = plan.turns[turn].find(agent);
        if (it != plan.turns[turn].end()) return it->second;
    }
    return wait_response();
}

PolicyResponse ScriptedPolicy::decide(const PolicyContext& ctx) {
    const Plan& plan = plan_for(ctx);
    PolicyResponse out;
    if (ctx.retry_for) {
        out.push_back({*ctx.retry_for, lookup(plan, ctx.turn, *ctx.retry_for)});
        return out;
    }
    if (ctx.role == PolicyRole::Central) {
        for (const auto& [actor, registry] : ctx.registries) {
            out.push_back({actor, lookup(plan, ctx.turn, actor)});
        }
    } else {
        out.push_back({ctx.agent, lookup(plan, ctx.turn, ctx.agent)});
    }
    return out;
}

namespace {

RawResponse random_response(const PolicyContext& ctx, const std::string& target,
                            const std::vector<ToolSpec>& registry) {
    std::uint64_t seed = ctx.episode_seed;
    seed = fnv1a64(target, seed);
    seed = fnv1a64_mix(seed, static_cast<std::uint64_t>(ctx.turn));
    seed = fnv1a64_mix(seed, static_cast<std::uint64_t>(ctx.retry_attempt));
    std::mt19937_64 rng(mix64(seed));

    std::vector<std::string> pool = ctx.objects;
    pool.insert(pool.end(), ctx.locations.begin(), ctx.locations.end());

    auto pick = [&rng](const std::vector<std::string>& v) -> std::string {
        if (v.empty()) return "none";
        std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
        return v[d(rng)];
    };

    RawResponse r;
    if (registry.empty()) return wait_response();
    std::uniform_int_distribution<std::size_t> d(0, registry.size() - 1);
    const ToolSpec& spec = registry[d(rng)];
    r.tool_name = spec.name;
    r.raw_params = json::object();
    for (const auto& p : spec.params) {
        switch (p.type) {
            case ParamType::String:
                r.raw_params[p.name] = pick(pool);
                break;
            case ParamType::StringList:
                r.raw_params[p.name] = json::array({pick(pool)});
                break;
            case ParamType::AgentName:
                r.raw_params[p.name] = pick(p.domain.empty() ? ctx.roster : p.domain);
                break;
            case ParamType::AgentNameList:
                r.raw_params[p.name] =
                    json::array({pick(p.domain.empty() ? ctx.roster : p.domain)});
                break;
        }
    }
    return r;
}

}  // namespace

PolicyResponse RandomPolicy::decide(const PolicyContext& ctx) {
    PolicyResponse out;
    if (ctx.retry_for) {
        auto it = ctx.registries.find(*ctx.retry_for);
        if (it != ctx.registries.end()) {
            out.push_back({*ctx.retry_for, random_response(ctx, *ctx.retry_for, it->second)});
        }
        return out;
    }
    if (ctx.role == PolicyRole::Central) {
        for (const auto& [actor, registry] : ctx.registries) {
            out.push_back({actor, random_response(ctx, actor, registry)});
        }
    } else {
        auto it = ctx.registries.find(ctx.agent);
        out.push_back({ctx.agent, random_response(ctx, ctx.agent,
                                                  it != ctx.registries.end()
                                                      ? it->second
                                                      : std::vector<ToolSpec>{})});
    }
    return out;
}

PolicySet make_builtin_policy_set(PolicyKind kind, TaskId task) {
    PolicySet set;
    std::shared_ptr<Policy> policy;
    switch (kind) {
        case PolicyKind::Oracle: policy = ScriptedPolicy::load(task); break;
        case PolicyKind::Random: policy = std::make_shared<RandomPolicy>(); break;
        case PolicyKind::Remote:
            throw std::invalid_argument("remote policies need endpoint options");
    }
    set.central = policy;
    for (const auto& robot : load_task(task).roster()) set.locals[robot] = policy;
    return set;
}

}  // namespace toolroco
