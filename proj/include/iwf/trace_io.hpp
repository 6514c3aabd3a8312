#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "iwf/analysis.hpp"
#include "iwf/engine.hpp"

namespace iwf {

/// Shortest-faithful decimal with 12 significant digits.
std::string format_g12(double v);

/// One row per (iteration, user, channel) with columns
/// iter,user,channel,power,sup_delta,rate_user. Row 0 carries the start
/// profile with sup_delta 0; row t carries sup_deltas[t-1].
void write_trace_csv(const RunTrace& trace, std::ostream& out);
void write_trace_csv(const RunTrace& trace, const std::filesystem::path& file);

nlohmann::json analysis_report_to_json(const AnalysisReport& rep);

/// One sweep measurement: a parameter value run under one schedule.
struct SweepRow {
    std::string param;
    double value = 0.0;
    std::string schedule;
    double rho_hmax = 0.0;
    Verdict verdict = Verdict::max_iters_exceeded;
    int iterations = 0;
    double beta = 0.0;
};

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);
void write_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& file);

} // namespace iwf
