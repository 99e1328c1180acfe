#include <sstream>

#include "toolroco/hash.hpp"
#include "toolroco/policy.hpp"

namespace toolroco {

namespace {

constexpr const char* kTemplateVersion = "prompt-v1";

constexpr const char* kLocalFormat =
    "Reply with exactly one JSON object: "
    "{\"reasoning\": string, \"tool\": string, \"params\": object}.";

constexpr const char* kCentralFormat =
    "Reply with exactly one JSON object: "
    "{\"calls\": [{\"agent\": string, \"reasoning\": string, \"tool\": string, "
    "\"params\": object}]} with one entry per active agent.";

void render_registry(std::ostringstream& out, const std::vector<ToolSpec>& registry) {
    for (const auto& spec : registry) {
        out << "- " << spec.name << "(";
        for (std::size_t i = 0; i < spec.params.size(); ++i) {
            const auto& p = spec.params[i];
            out << (i ? ", " : "") << p.name << ": " << to_string(p.type);
            if (!p.domain.empty()) {
                out << " in [";
                for (std::size_t k = 0; k < p.domain.size(); ++k) {
                    out << (k ? ", " : "") << p.domain[k];
                }
                out << "]";
            }
        }
        out << ")\n";
    }
}

}  // namespace

std::string render_prompt(const PolicyContext& ctx) {
    std::ostringstream out;
    out << "=== SYSTEM ===\n";
    if (ctx.role == PolicyRole::Central) {
        out << "You are the central coordinator of a robot team. On every turn you select "
               "one tool for each active agent.\n"
            << kCentralFormat << "\n";
    } else {
        out << "You are the robot " << ctx.agent
            << " in a cooperative team. On every turn you select one tool for yourself.\n"
            << kLocalFormat << "\n";
    }
    out << "Only the tools listed below exist. Tool names and parameters must match "
           "exactly.\n";

    out << "=== TOOLS ===\n";
    for (const auto& [actor, registry] : ctx.registries) {
        if (ctx.role == PolicyRole::Central) out << "Tools for " << actor << ":\n";
        render_registry(out, registry);
    }

    out << "=== STATE ===\n" << ctx.observation;

    out << "=== HISTORY ===\n";
    if (ctx.history.empty()) {
        out << "(none)\n";
    } else {
        for (const auto& h : ctx.history) {
            out << "- turn " << h.turn << " | " << h.agent << " | " << h.response.tool_name
                << " | " << to_string(h.stage);
            if (!h.exec_summary.empty()) out << " | " << h.exec_summary;
            out << " | reward " << h.reward << "\n";
        }
    }

    if (ctx.retry_attempt > 0) {
        out << "=== RE-PLAN ===\n"
            << "Your previous selection this turn failed; pick a different tool or fix the "
               "parameters.\n";
    }
    return out.str();
}

std::uint64_t prompt_template_hash() {
    std::uint64_t h = fnv1a64(kTemplateVersion);
    h = fnv1a64(kLocalFormat, h);
    h = fnv1a64(kCentralFormat, h);
    return h;
}

}  // namespace toolroco
