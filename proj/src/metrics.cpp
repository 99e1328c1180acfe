#include "toolroco/metrics.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace toolroco {

json MetricsReport::to_json() const {
    return {
        {"model", model},
        {"task", task},
        {"paradigm", paradigm},
        {"episodes", episodes},
        {"tool_calling_pct", tool_calling},
        {"param_val_pct", param_val},
        {"exec_val_pct", exec_val},
        {"reflection_rate_pct", reflection_rate},
        {"modification_rate_pct", modification_rate},
        {"win", win},
        {"ct_pct", ct},
        {"so_pct", so},
        {"counters",
         {{"n_tools", n_tools},
          {"n_known", n_known},
          {"n_valid", n_valid},
          {"n_exec_ok", n_exec_ok},
          {"n_reflect", n_reflect},
          {"n_modify", n_modify},
          {"n_cooperative", n_cooperative},
          {"n_activate", n_activate},
          {"wins", wins}}},
    };
}

namespace {

bool is_cooperative(const StepRecord& s) {
    return s.tool_kind && (*s.tool_kind == ToolKind::CooperativeActivate ||
                           *s.tool_kind == ToolKind::CooperativeDisconnect);
}

void derive_ratios(MetricsReport& r) {
    const double n = static_cast<double>(r.n_tools);
    if (r.n_tools > 0) {
        r.tool_calling = 100.0 * static_cast<double>(r.n_known) / n;
        r.param_val = 100.0 * static_cast<double>(r.n_valid) / n;
        r.exec_val = 100.0 * static_cast<double>(r.n_exec_ok) / n;
        r.reflection_rate = 100.0 * static_cast<double>(r.n_reflect) / n;
        r.modification_rate = 100.0 * static_cast<double>(r.n_modify) / n;
        r.ct = 100.0 * static_cast<double>(r.n_cooperative) / n;
    }
    // SO uses the epsilon-guarded ratio, with an explicit zero when there were
    // no cooperative calls at all.
    r.so = r.n_cooperative == 0
               ? 0.0
               : 100.0 * static_cast<double>(r.n_activate) /
                     (static_cast<double>(r.n_cooperative) + kSoEpsilon);
    r.win = r.episodes > 0 ? static_cast<double>(r.wins) / r.episodes : 0.0;
}

}  // namespace

MetricsReport compute(const std::vector<EpisodeTrace>& traces) {
    if (traces.empty()) throw std::invalid_argument("compute: no traces");
    MetricsReport r;
    r.model = traces.front().header.model;
    r.task = traces.front().header.task;
    r.paradigm = traces.front().header.paradigm;

    for (const auto& trace : traces) {
        if (trace.header.model != r.model || trace.header.task != r.task ||
            trace.header.paradigm != r.paradigm) {
            throw std::invalid_argument(
                "compute: traces mix (task, paradigm, model) triples: (" + r.task + ", " +
                r.paradigm + ", " + r.model + ") vs (" + trace.header.task + ", " +
                trace.header.paradigm + ", " + trace.header.model + ")");
        }
        if (!trace.complete()) {
            throw std::invalid_argument("compute: incomplete trace (no result line)");
        }

        r.episodes += 1;
        r.wins += static_cast<std::uint64_t>(trace.result->win);

        // Per-agent previous step within this episode, for the two
        // consecutive-step metrics. First steps contribute nothing.
        std::map<std::string, const StepRecord*> prev;
        for (const auto& step : trace.steps) {
            r.n_tools += 1;
            if (step.stage != ValidationStage::UnknownTool) r.n_known += 1;
            if (step.stage == ValidationStage::Valid) r.n_valid += 1;
            if (step.exec_status && *step.exec_status == ExecStatus::Ok) r.n_exec_ok += 1;
            if (is_cooperative(step)) {
                r.n_cooperative += 1;
                if (*step.tool_kind == ToolKind::CooperativeActivate) r.n_activate += 1;
            }
            auto it = prev.find(step.agent);
            if (it != prev.end()) {
                if (it->second->tool_name_selected != step.tool_name_selected) {
                    r.n_reflect += 1;
                }
                if (step.reward > it->second->reward) r.n_modify += 1;
            }
            prev[step.agent] = &step;
        }
    }

    derive_ratios(r);
    return r;
}

std::vector<MetricsReport> aggregate(const std::vector<MetricsReport>& reports) {
    std::map<std::tuple<std::string, std::string, std::string>, MetricsReport> cells;
    for (const auto& rep : reports) {
        auto key = std::make_tuple(rep.model, rep.task, rep.paradigm);
        auto it = cells.find(key);
        if (it == cells.end()) {
            cells.emplace(key, rep);
            continue;
        }
        MetricsReport& acc = it->second;
        acc.episodes += rep.episodes;
        acc.n_tools += rep.n_tools;
        acc.n_known += rep.n_known;
        acc.n_valid += rep.n_valid;
        acc.n_exec_ok += rep.n_exec_ok;
        acc.n_reflect += rep.n_reflect;
        acc.n_modify += rep.n_modify;
        acc.n_cooperative += rep.n_cooperative;
        acc.n_activate += rep.n_activate;
        acc.wins += rep.wins;
    }
    std::vector<MetricsReport> rows;
    rows.reserve(cells.size());
    for (auto& [key, rep] : cells) {
        derive_ratios(rep);
        rows.push_back(std::move(rep));
    }
    return rows;
}

double round2(double value) {
    const int saved = std::fegetround();
    std::fesetround(FE_TONEAREST);  // ties to even
    double r = std::nearbyint(value * 100.0) / 100.0;
    std::fesetround(saved);
    return r;
}

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", round2(v));
    return buf;
}

constexpr const char* kColumns[] = {
    "model",       "task",         "paradigm", "episodes", "tool_calling",
    "param_val",   "exec_val",     "reflection_rate", "modification_rate",
    "win",         "ct",           "so",       "n_tools",  "n_cooperative",
    "n_activate",
};

std::vector<std::string> row_cells(const MetricsReport& r) {
    return {r.model,
            r.task,
            r.paradigm,
            std::to_string(r.episodes),
            fmt2(r.tool_calling),
            fmt2(r.param_val),
            fmt2(r.exec_val),
            fmt2(r.reflection_rate),
            fmt2(r.modification_rate),
            fmt2(r.win),  // fraction of winning episodes, not a percentage
            fmt2(r.ct),
            fmt2(r.so),
            std::to_string(r.n_tools),
            std::to_string(r.n_cooperative),
            std::to_string(r.n_activate)};
}

}  // namespace

std::string render_table(const std::vector<MetricsReport>& rows) {
    constexpr std::size_t ncols = std::size(kColumns);
    std::vector<std::size_t> width(ncols);
    for (std::size_t c = 0; c < ncols; ++c) width[c] = std::string(kColumns[c]).size();
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        cells.push_back(row_cells(r));
        for (std::size_t c = 0; c < ncols; ++c) width[c] = std::max(width[c], cells.back()[c].size());
    }
    std::ostringstream out;
    for (std::size_t c = 0; c < ncols; ++c) {
        out << (c ? "  " : "");
        out << kColumns[c] << std::string(width[c] - std::string(kColumns[c]).size(), ' ');
    }
    out << "\n";
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < ncols; ++c) {
            out << (c ? "  " : "") << row[c] << std::string(width[c] - row[c].size(), ' ');
        }
        out << "\n";
    }
    return out.str();
}

std::string render_csv(const std::vector<MetricsReport>& rows) {
    std::ostringstream out;
    constexpr std::size_t ncols = std::size(kColumns);
    for (std::size_t c = 0; c < ncols; ++c) out << (c ? "," : "") << kColumns[c];
    out << "\n";
    for (const auto& r : rows) {
        auto cells = row_cells(r);
        for (std::size_t c = 0; c < ncols; ++c) out << (c ? "," : "") << cells[c];
        out << "\n";
    }
    return out.str();
}

}  // namespace toolroco
