#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "toolroco/paradigm.hpp"

namespace toolroco {

using json = nlohmann::json;

struct TaskDefinition;  // tasks.hpp

enum class ParamType { String, StringList, AgentName, AgentNameList };

enum class ToolKind { Common, CooperativeActivate, CooperativeDisconnect };

std::string to_string(ParamType t);
std::string to_string(ToolKind k);
ParamType param_type_from_string(const std::string& s);
ToolKind tool_kind_from_string(const std::string& s);

struct ToolParam {
    std::string name;
    ParamType type = ParamType::String;
    // Legal values; empty means unrestricted. Agent-typed params always carry
    // a domain (the roster, minus self for ACTIVATE).
    std::vector<std::string> domain;
};

struct ToolSpec {
    std::string name;  // canonical, case sensitive
    ToolKind kind = ToolKind::Common;
    std::vector<ToolParam> params;
};

// One typed parameter value after validation.
using ParamValue = std::variant<std::string, std::vector<std::string>>;

struct ValidToolCall {
    std::string name;
    ToolKind kind = ToolKind::Common;
    std::map<std::string, ParamValue> params;

    const std::string& str(const std::string& key) const;
    const std::vector<std::string>& list(const std::string& key) const;
};

// What a policy emitted, before any checking. Deliberately admits garbage.
struct RawResponse {
    std::string reasoning;
    std::string tool_name;
    json raw_params = json::object();
};

enum class ValidationStage { UnknownTool, BadParams, Valid };

std::string to_string(ValidationStage s);
ValidationStage stage_from_string(const std::string& s);

struct ValidationOutcome {
    ValidationStage stage = ValidationStage::UnknownTool;
    std::optional<ValidToolCall> call;  // present iff stage == Valid
    std::string detail;
};

// Strictly sequential staging: unknown name short-circuits before any
// parameter inspection; any missing / extra / ill-typed / out-of-domain
// parameter is BadParams. Names match exactly, no fuzzy repair.
ValidationOutcome validate(const RawResponse& raw, const std::vector<ToolSpec>& registry);

// Wire shape of a policy reply: {"reasoning": str, "tool": str, "params": object}.
// Returns nullopt when the text does not contain such an object (the caller
// scores that as UNKNOWN_TOOL with detail "unparseable"). A JSON object
// embedded in surrounding prose or markdown fencing is accepted.
std::optional<RawResponse> parse_raw_response(const std::string& text);

// Candidate tool set offered to `agent` under `paradigm`: the task's common
// tools, plus ACTIVATE / DISCONNECT when the paradigm treats agents as tools.
std::vector<ToolSpec> registry_for(const std::string& agent, ParadigmId paradigm,
                                   const TaskDefinition& task);

json to_json(const ToolSpec& spec);
ToolSpec tool_spec_from_json(const json& j);

}  // namespace toolroco
