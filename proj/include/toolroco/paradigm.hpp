#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace toolroco {

// Decision topology of a run. The two *_SELF_ORG variants treat other agents
// as callable tools (ACTIVATE / DISCONNECT appear in the candidate set).
enum class ParadigmId {
    Centralized,
    CentralizedSelfOrg,
    Decentralized,
    SelfOrganization,
};

inline constexpr std::array<ParadigmId, 4> kAllParadigms = {
    ParadigmId::Centralized,
    ParadigmId::CentralizedSelfOrg,
    ParadigmId::Decentralized,
    ParadigmId::SelfOrganization,
};

constexpr bool is_agent_as_tool(ParadigmId p) {
    return p == ParadigmId::CentralizedSelfOrg || p == ParadigmId::SelfOrganization;
}

constexpr bool is_centralized(ParadigmId p) {
    return p == ParadigmId::Centralized || p == ParadigmId::CentralizedSelfOrg;
}

constexpr std::string_view to_string(ParadigmId p) {
    switch (p) {
        case ParadigmId::Centralized: return "centralized";
        case ParadigmId::CentralizedSelfOrg: return "centralized-self-org";
        case ParadigmId::Decentralized: return "decentralized";
        case ParadigmId::SelfOrganization: return "self-org";
    }
    return "?";
}

inline ParadigmId paradigm_from_string(std::string_view s) {
    for (ParadigmId p : kAllParadigms) {
        if (s == to_string(p)) return p;
    }
    throw std::invalid_argument("unknown paradigm: " + std::string(s));
}

}  // namespace toolroco
