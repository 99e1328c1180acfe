#include "toolroco/toolsys.hpp"

#include <algorithm>
#include <stdexcept>

#include "toolroco/tasks.hpp"

namespace toolroco {

std::string to_string(ParamType t) {
    switch (t) {
        case ParamType::String: return "string";
        case ParamType::StringList: return "string_list";
        case ParamType::AgentName: return "agent_name";
        case ParamType::AgentNameList: return "agent_name_list";
    }
    return "?";
}

ParamType param_type_from_string(const std::string& s) {
    if (s == "string") return ParamType::String;
    if (s == "string_list") return ParamType::StringList;
    if (s == "agent_name") return ParamType::AgentName;
    if (s == "agent_name_list") return ParamType::AgentNameList;
    throw std::invalid_argument("unknown param type: " + s);
}

std::string to_string(ToolKind k) {
    switch (k) {
        case ToolKind::Common: return "COMMON";
        case ToolKind::CooperativeActivate: return "COOPERATIVE_ACTIVATE";
        case ToolKind::CooperativeDisconnect: return "COOPERATIVE_DISCONNECT";
    }
    return "?";
}

ToolKind tool_kind_from_string(const std::string& s) {
    if (s == "COMMON") return ToolKind::Common;
    if (s == "COOPERATIVE_ACTIVATE") return ToolKind::CooperativeActivate;
    if (s == "COOPERATIVE_DISCONNECT") return ToolKind::CooperativeDisconnect;
    throw std::invalid_argument("unknown tool kind: " + s);
}

std::string to_string(ValidationStage s) {
    switch (s) {
        case ValidationStage::UnknownTool: return "UNKNOWN_TOOL";
        case ValidationStage::BadParams: return "BAD_PARAMS";
        case ValidationStage::Valid: return "VALID";
    }
    return "?";
}

ValidationStage stage_from_string(const std::string& s) {
    if (s == "UNKNOWN_TOOL") return ValidationStage::UnknownTool;
    if (s == "BAD_PARAMS") return ValidationStage::BadParams;
    if (s == "VALID") return ValidationStage::Valid;
    throw std::invalid_argument("unknown validation stage: " + s);
}

const std::string& ValidToolCall::str(const std::string& key) const {
    return std::get<std::string>(params.at(key));
}

const std::vector<std::string>& ValidToolCall::list(const std::string& key) const {
    return std::get<std::vector<std::string>>(params.at(key));
}

namespace {

bool in_domain(const std::vector<std::string>& domain, const std::string& v) {
    return domain.empty() || std::find(domain.begin(), domain.end(), v) != domain.end();
}

// Returns an error description, or nullopt and fills `out` on success.
std::optional<std::string> check_param(const ToolParam& spec, const json& value,
                                       ParamValue& out) {
    switch (spec.type) {
        case ParamType::String:
        case ParamType::AgentName: {
            if (!value.is_string()) {
                return "param '" + spec.name + "': expected " + to_string(spec.type) +
                       ", got " + std::string(value.type_name());
            }
            auto s = value.get<std::string>();
            if (!in_domain(spec.domain, s)) {
                return "param '" + spec.name + "': '" + s + "' not a legal value";
            }
            out = std::move(s);
            return std::nullopt;
        }
        case ParamType::StringList:
        case ParamType::AgentNameList: {
            if (!value.is_array()) {
                return "param '" + spec.name + "': expected " + to_string(spec.type) +
                       ", got " + std::string(value.type_name());
            }
            std::vector<std::string> items;
            for (const auto& el : value) {
                if (!el.is_string()) {
                    return "param '" + spec.name + "': list element of type " +
                           std::string(el.type_name()) + ", expected string";
                }
                auto s = el.get<std::string>();
                if (!in_domain(spec.domain, s)) {
                    return "param '" + spec.name + "': '" + s + "' not a legal value";
                }
                items.push_back(std::move(s));
            }
            out = std::move(items);
            return std::nullopt;
        }
    }
    return "param '" + spec.name + "': unhandled type";
}

}  // namespace

ValidationOutcome validate(const RawResponse& raw, const std::vector<ToolSpec>& registry) {
    const ToolSpec* spec = nullptr;
    for (const auto& s : registry) {
        if (s.name == raw.tool_name) {
            spec = &s;
            break;
        }
    }
    if (spec == nullptr) {
        return {ValidationStage::UnknownTool, std::nullopt,
                "unknown tool '" + raw.tool_name + "'"};
    }

    if (!raw.raw_params.is_object()) {
        return {ValidationStage::BadParams, std::nullopt,
                "params: expected object, got " + std::string(raw.raw_params.type_name())};
    }

    ValidToolCall call;
    call.name = spec->name;
    call.kind = spec->kind;
    for (const auto& p : spec->params) {
        auto it = raw.raw_params.find(p.name);
        if (it == raw.raw_params.end()) {
            return {ValidationStage::BadParams, std::nullopt, "missing param '" + p.name + "'"};
        }
        ParamValue value;
        if (auto err = check_param(p, *it, value)) {
            return {ValidationStage::BadParams, std::nullopt, *err};
        }
        call.params.emplace(p.name, std::move(value));
    }
    // Unknown extras are rejected rather than ignored.
    for (auto it = raw.raw_params.begin(); it != raw.raw_params.end(); ++it) {
        bool declared = std::any_of(spec->params.begin(), spec->params.end(),
                                    [&](const ToolParam& p) { return p.name == it.key(); });
        if (!declared) {
            return {ValidationStage::BadParams, std::nullopt,
                    "unexpected param '" + it.key() + "'"};
        }
    }
    return {ValidationStage::Valid, std::move(call), "ok"};
}

std::optional<RawResponse> parse_raw_response(const std::string& text) {
    auto try_parse = [](const std::string& s) -> std::optional<RawResponse> {
        json j = json::parse(s, nullptr, false);
        if (j.is_discarded() || !j.is_object()) return std::nullopt;
        auto tool = j.find("tool");
        auto params = j.find("params");
        if (tool == j.end() || !tool->is_string()) return std::nullopt;
        if (params == j.end() || !params->is_object()) return std::nullopt;
        RawResponse r;
        if (auto reasoning = j.find("reasoning");
            reasoning != j.end() && reasoning->is_string()) {
            r.reasoning = reasoning->get<std::string>();
        }
        r.tool_name = tool->get<std::string>();
        r.raw_params = *params;
        return r;
    };

    if (auto r = try_parse(text)) return r;
    // Models often wrap the object in prose or a markdown fence.
    auto first = text.find('{');
    auto last = text.rfind('}');
    if (first != std::string::npos && last != std::string::npos && first < last) {
        return try_parse(text.substr(first, last - first + 1));
    }
    return std::nullopt;
}

std::vector<ToolSpec> registry_for(const std::string& agent, ParadigmId paradigm,
                                   const TaskDefinition& task) {
    std::vector<ToolSpec> out = task.common_tools;
    if (is_agent_as_tool(paradigm)) {
        std::vector<std::string> others;
        std::vector<std::string> roster = task.roster();
        for (const auto& name : roster) {
            if (name != agent) others.push_back(name);
        }
        out.push_back(ToolSpec{"ACTIVATE",
                               ToolKind::CooperativeActivate,
                               {ToolParam{"agent", ParamType::AgentName, others}}});
        out.push_back(ToolSpec{"DISCONNECT",
                               ToolKind::CooperativeDisconnect,
                               {ToolParam{"agents", ParamType::AgentNameList, roster}}});
    }
    return out;
}

json to_json(const ToolSpec& spec) {
    json params = json::array();
    for (const auto& p : spec.params) {
        json jp = {{"name", p.name}, {"type", to_string(p.type)}};
        if (!p.domain.empty()) jp["domain"] = p.domain;
        params.push_back(jp);
    }
    return {{"name", spec.name}, {"kind", to_string(spec.kind)}, {"params", params}};
}

ToolSpec tool_spec_from_json(const json& j) {
    ToolSpec spec;
    spec.name = j.at("name").get<std::string>();
    spec.kind = j.contains("kind") ? tool_kind_from_string(j.at("kind").get<std::string>())
                                   : ToolKind::Common;
    for (const auto& jp : j.at("params")) {
        ToolParam p;
        p.name = jp.at("name").get<std::string>();
        p.type = param_type_from_string(jp.at("type").get<std::string>());
        if (jp.contains("domain")) p.domain = jp.at("domain").get<std::vector<std::string>>();
        spec.params.push_back(std::move(p));
    }
    return spec;
}

}  // namespace toolroco
