#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "toolroco/toolsys.hpp"
#include "toolroco/world.hpp"

namespace toolroco {

// One agent-turn outcome: which validation stage the response reached and,
// when it executed, how it went.
struct StepRecord {
    int turn = 0;
    std::string agent;
    ValidationStage stage = ValidationStage::UnknownTool;
    std::optional<ExecStatus> exec_status;  // present iff stage == Valid
    std::string tool_name_selected;         // canonical name, or raw text on UNKNOWN_TOOL
    std::optional<ToolKind> tool_kind;      // known once the name resolved
    int reward = 0;
    bool was_replan = false;
    std::string detail;
    std::optional<json> transcript;  // request/response pair, when transcript logging is on
};

enum class PoolEventKind { Activated, Deactivated };

std::string to_string(PoolEventKind k);
PoolEventKind pool_event_from_string(const std::string& s);

struct PoolEvent {
    int turn = 0;
    PoolEventKind event = PoolEventKind::Activated;
    std::string subject;
    std::string actor;

    bool operator==(const PoolEvent&) const = default;
};

struct TurnSnapshot {
    int turn = 0;
    std::uint64_t state_hash = 0;

    bool operator==(const TurnSnapshot&) const = default;
};

struct EpisodeResult {
    int win = 0;
    int turns_used = 0;
    int replans_used = 0;

    bool operator==(const EpisodeResult&) const = default;
};

struct EpisodeHeader {
    int schema_version = 0;
    json config;  // the full episode config, canonical form
    std::uint64_t config_hash = 0;
    std::string task;
    std::string paradigm;
    std::string policy;  // oracle | random | remote
    std::string model;   // model identifier shown in reports
    std::uint64_t seed = 0;
    int episode_index = 0;
    std::uint64_t episode_seed = 0;
    std::uint64_t template_hash = 0;
    std::string harness_version;
};

// The ordered log of one episode. Line-delimited JSON on disk: header first,
// then chronological step / pool / snapshot lines, result last.
struct EpisodeTrace {
    EpisodeHeader header;
    std::vector<StepRecord> steps;
    std::vector<PoolEvent> pool_events;
    std::vector<TurnSnapshot> snapshots;
    std::optional<EpisodeResult> result;  // absent = incomplete trace

    bool complete() const { return result.has_value(); }
};

// Thrown on malformed or truncated trace files; carries the offending line.
class TraceError : public std::runtime_error {
  public:
    TraceError(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    explicit TraceError(const std::string& what) : std::runtime_error(what), line_(0) {}
    int line() const { return line_; }

  private:
    int line_;
};

std::string serialize_trace(const EpisodeTrace& trace);
EpisodeTrace parse_trace(const std::string& text);

// Atomic write (temp file + rename), so concurrent writers never interleave.
void write_trace(const EpisodeTrace& trace, const std::filesystem::path& path);
EpisodeTrace read_trace(const std::filesystem::path& path);

enum class ReplayStatus { Match, Mismatch, NotReplayable };

struct ReplayReport {
    ReplayStatus status = ReplayStatus::Match;
    int first_divergent_turn = -1;
    std::string detail;
};

// Re-simulates a scripted-policy trace from its header and compares snapshot
// hashes, pool history and the final result. Remote-model traces cannot be
// re-simulated and report NotReplayable.
ReplayReport replay_verify(const std::filesystem::path& path);
ReplayReport replay_verify(const EpisodeTrace& trace);

}  // namespace toolroco
