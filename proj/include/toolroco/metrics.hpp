#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toolroco/trace.hpp"

namespace toolroco {

// Aggregated scores for one (model, task, paradigm) cell. Ratio fields are
// percentages in [0, 100]; win is the fraction of winning episodes.
struct MetricsReport {
    std::string model;
    std::string task;
    std::string paradigm;
    int episodes = 0;

    double tool_calling = 0.0;
    double param_val = 0.0;
    double exec_val = 0.0;
    double reflection_rate = 0.0;
    double modification_rate = 0.0;
    double win = 0.0;
    double ct = 0.0;
    double so = 0.0;

    // Raw counters; the ratios above derive from these.
    std::uint64_t n_tools = 0;
    std::uint64_t n_known = 0;
    std::uint64_t n_valid = 0;
    std::uint64_t n_exec_ok = 0;
    std::uint64_t n_reflect = 0;
    std::uint64_t n_modify = 0;
    std::uint64_t n_cooperative = 0;
    std::uint64_t n_activate = 0;
    std::uint64_t wins = 0;

    json to_json() const;
};

inline constexpr double kSoEpsilon = 1e-9;

// Computes all nine metrics over the traces of one cell. All traces must be
// complete and share the same (task, paradigm, model) triple.
MetricsReport compute(const std::vector<EpisodeTrace>& traces);

// Merges reports cell-wise (exact counter sums) and emits one row per
// (model, task, paradigm), sorted.
std::vector<MetricsReport> aggregate(const std::vector<MetricsReport>& reports);

// Round-half-even at two decimals; used for display only, machine output
// keeps full precision.
double round2(double value);

std::string render_table(const std::vector<MetricsReport>& rows);
std::string render_csv(const std::vector<MetricsReport>& rows);

}  // namespace toolroco
