#include "toolroco/trace.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include "toolroco/hash.hpp"
#include "toolroco/version.hpp"

namespace toolroco {

std::string to_string(PoolEventKind k) {
    return k == PoolEventKind::Activated ? "ACTIVATED" : "DEACTIVATED";
}

PoolEventKind pool_event_from_string(const std::string& s) {
    if (s == "ACTIVATED") return PoolEventKind::Activated;
    if (s == "DEACTIVATED") return PoolEventKind::Deactivated;
    throw std::invalid_argument("unknown pool event: " + s);
}

namespace {

json header_to_json(const EpisodeHeader& h) {
    return {
        {"type", "header"},
        {"schema_version", h.schema_version},
        {"config", h.config},
        {"config_hash", hash_hex(h.config_hash)},
        {"task", h.task},
        {"paradigm", h.paradigm},
        {"policy", h.policy},
        {"model", h.model},
        {"seed", h.seed},
        {"episode_index", h.episode_index},
        {"episode_seed", h.episode_seed},
        {"template_hash", hash_hex(h.template_hash)},
        {"harness_version", h.harness_version},
    };
}

EpisodeHeader header_from_json(const json& j) {
    EpisodeHeader h;
    h.schema_version = j.at("schema_version").get<int>();
    h.config = j.at("config");
    h.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
    h.task = j.at("task").get<std::string>();
    h.paradigm = j.at("paradigm").get<std::string>();
    h.policy = j.at("policy").get<std::string>();
    h.model = j.at("model").get<std::string>();
    h.seed = j.at("seed").get<std::uint64_t>();
    h.episode_index = j.at("episode_index").get<int>();
    h.episode_seed = j.at("episode_seed").get<std::uint64_t>();
    h.template_hash = std::stoull(j.at("template_hash").get<std::string>(), nullptr, 16);
    h.harness_version = j.at("harness_version").get<std::string>();
    return h;
}

json step_to_json(const StepRecord& s) {
    json j = {
        {"type", "step"},
        {"turn", s.turn},
        {"agent", s.agent},
        {"stage", to_string(s.stage)},
        {"tool", s.tool_name_selected},
        {"reward", s.reward},
        {"replan", s.was_replan},
        {"detail", s.detail},
    };
    if (s.exec_status) j["exec"] = to_string(*s.exec_status);
    if (s.tool_kind) j["kind"] = to_string(*s.tool_kind);
    if (s.transcript) j["transcript"] = *s.transcript;
    return j;
}

StepRecord step_from_json(const json& j) {
    StepRecord s;
    s.turn = j.at("turn").get<int>();
    s.agent = j.at("agent").get<std::string>();
    s.stage = stage_from_string(j.at("stage").get<std::string>());
    s.tool_name_selected = j.at("tool").get<std::string>();
    s.reward = j.at("reward").get<int>();
    s.was_replan = j.at("replan").get<bool>();
    s.detail = j.at("detail").get<std::string>();
    if (j.contains("exec")) s.exec_status = exec_status_from_string(j.at("exec").get<std::string>());
    if (j.contains("kind")) s.tool_kind = tool_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("transcript")) s.transcript = j.at("transcript");
    return s;
}

json pool_to_json(const PoolEvent& e) {
    return {{"type", "pool"},
            {"turn", e.turn},
            {"event", to_string(e.event)},
            {"subject", e.subject},
            {"actor", e.actor}};
}

PoolEvent pool_from_json(const json& j) {
    return PoolEvent{j.at("turn").get<int>(),
                     pool_event_from_string(j.at("event").get<std::string>()),
                     j.at("subject").get<std::string>(), j.at("actor").get<std::string>()};
}

json snapshot_to_json(const TurnSnapshot& s) {
    return {{"type", "snapshot"}, {"turn", s.turn}, {"state_hash", hash_hex(s.state_hash)}};
}

TurnSnapshot snapshot_from_json(const json& j) {
    return TurnSnapshot{j.at("turn").get<int>(),
                        std::stoull(j.at("state_hash").get<std::string>(), nullptr, 16)};
}

json result_to_json(const EpisodeResult& r) {
    return {{"type", "result"},
            {"win", r.win},
            {"turns_used", r.turns_used},
            {"replans_used", r.replans_used}};
}

EpisodeResult result_from_json(const json& j) {
    return EpisodeResult{j.at("win").get<int>(), j.at("turns_used").get<int>(),
                         j.at("replans_used").get<int>()};
}

}  // namespace

std::string serialize_trace(const EpisodeTrace& trace) {
    std::ostringstream out;
    out << header_to_json(trace.header).dump() << "\n";

    // Chronological grouping per turn: steps, then pool events, then the
    // snapshot. Snapshot turn T is the state hash *after* turn T-1 resolved
    // (turn 0 is the initial state), so it is emitted before turn T's steps.
    std::size_t si = 0, pi = 0, ki = 0;
    int max_turn = 0;
    for (const auto& s : trace.steps) max_turn = std::max(max_turn, s.turn);
    for (const auto& e : trace.pool_events) max_turn = std::max(max_turn, e.turn);
    for (const auto& k : trace.snapshots) max_turn = std::max(max_turn, k.turn);
    for (int turn = 0; turn <= max_turn; ++turn) {
        while (ki < trace.snapshots.size() && trace.snapshots[ki].turn == turn) {
            out << snapshot_to_json(trace.snapshots[ki++]).dump() << "\n";
        }
        while (si < trace.steps.size() && trace.steps[si].turn == turn) {
            out << step_to_json(trace.steps[si++]).dump() << "\n";
        }
        while (pi < trace.pool_events.size() && trace.pool_events[pi].turn == turn) {
            out << pool_to_json(trace.pool_events[pi++]).dump() << "\n";
        }
    }
    if (trace.result) out << result_to_json(*trace.result).dump() << "\n";
    return out.str();
}

EpisodeTrace parse_trace(const std::string& text) {
    EpisodeTrace trace;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    bool have_result = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("type")) {
            throw TraceError("malformed trace line", line_no);
        }
        try {
            const auto type = j.at("type").get<std::string>();
            if (type == "header") {
                if (have_header) throw TraceError("duplicate header", line_no);
                trace.header = header_from_json(j);
                if (trace.header.schema_version != kTraceSchemaVersion) {
                    throw TraceError("trace schema version " +
                                         std::to_string(trace.header.schema_version) +
                                         " does not match supported version " +
                                         std::to_string(kTraceSchemaVersion),
                                     line_no);
                }
                have_header = true;
            } else if (!have_header) {
                throw TraceError("first line must be the header", line_no);
            } else if (have_result) {
                throw TraceError("content after result line", line_no);
            } else if (type == "step") {
                trace.steps.push_back(step_from_json(j));
            } else if (type == "pool") {
                trace.pool_events.push_back(pool_from_json(j));
            } else if (type == "snapshot") {
                trace.snapshots.push_back(snapshot_from_json(j));
            } else if (type == "result") {
                trace.result = result_from_json(j);
                have_result = true;
            } else {
                throw TraceError("unknown line type '" + type + "'", line_no);
            }
        } catch (const json::exception& e) {
            throw TraceError(std::string("bad trace line: ") + e.what(), line_no);
        }
    }
    if (!have_header) throw TraceError("empty trace: no header line", line_no);
    return trace;
}

void write_trace(const EpisodeTrace& trace, const std::filesystem::path& path) {
    static std::atomic<unsigned> counter{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write trace: " + tmp.string());
        out << serialize_trace(trace);
    }
    std::filesystem::rename(tmp, path);
}

EpisodeTrace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TraceError("cannot open trace: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

}  // namespace toolroco
