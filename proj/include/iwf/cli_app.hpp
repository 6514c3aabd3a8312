#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace iwf {

struct RunOptions {
    std::string scenario_path;
    std::string schedule = "sim"; // seq | sim | async
    double alpha = 1.0;
    double tol = 1e-8;
    int max_iters = 500;
    int cycle_window = 8;
    std::uint64_t seed = 1;
    int delay_bound = 1;
    double activation_prob = 0.5;
    int starvation_bound = 5;
    std::string init = "zero"; // zero | uniform | file
    std::string init_file;
    std::string output_path = "trace.csv";
};

struct AnalyzeOptions {
    std::string scenario_path;
    std::string output_path; // empty = stdout only
};

struct SweepOptions {
    std::string scenario_path;
    std::string param = "h"; // h | budget | noise
    std::vector<double> values;
    double alpha = 1.0;
    double tol = 1e-8;
    int max_iters = 500;
    int cycle_window = 8;
    std::uint64_t seed = 1;
    int delay_bound = 1;
    double activation_prob = 0.5;
    int starvation_bound = 5;
    std::string output_path = "sweep.csv";
};

/// Exit codes: 0 converged (or success for analyze/sweep), 1 input error,
/// 2 max_iters_exceeded, 3 cycle_detected.
int cmd_run(const RunOptions& opt);
int cmd_analyze(const AnalyzeOptions& opt);
int cmd_sweep(const SweepOptions& opt);

/// Full argv-level entry point used by the iwfsim binary and the tests.
int run_cli(int argc, const char* const* argv);

} // namespace iwf
