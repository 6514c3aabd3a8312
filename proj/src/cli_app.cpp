#include "iwf/cli_app.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "iwf/analysis.hpp"
#include "iwf/engine.hpp"
#include "iwf/perturb.hpp"
#include "iwf/scenario_io.hpp"
#include "iwf/trace_io.hpp"

namespace iwf {

namespace {

ScheduleKind parse_kind(const std::string& name) {
    if (name == "seq")
        return ScheduleKind::sequential;
    if (name == "sim")
        return ScheduleKind::simultaneous;
    if (name == "async")
        return ScheduleKind::asynchronous;
    throw std::invalid_argument("unknown schedule '" + name + "' (expected seq, sim, or async)");
}

int verdict_exit(Verdict v) {
    switch (v) {
    case Verdict::converged: return 0;
    case Verdict::max_iters_exceeded: return 2;
    case Verdict::cycle_detected: return 3;
    }
    return 1;
}

PowerProfile make_start(const Scenario& s, const std::string& init, const std::string& init_file) {
    PowerProfile p(s.num_users, s.num_channels);
    if (init == "zero")
        return p;
    if (init == "uniform") {
        for (int i = 0; i < s.num_users; ++i)
            for (int k = 0; k < s.num_channels; ++k)
                p.at(i, k) = s.power_budget[static_cast<std::size_t>(i)] / s.num_channels;
        return project_to_feasible(s, p);
    }
    if (init == "file") {
        if (init_file.empty())
            throw std::invalid_argument("--init file requires --init-file PATH");
        return project_to_feasible(s, load_profile(init_file, s.num_users, s.num_channels));
    }
    throw std::invalid_argument("unknown init mode '" + init + "'");
}

ScheduleSpec schedule_from(const std::string& name, double alpha, std::uint64_t seed,
                           int delay_bound, double activation_prob, int starvation_bound) {
    ScheduleSpec spec;
    spec.kind = parse_kind(name);
    spec.alpha = alpha;
    spec.rng_seed = seed;
    spec.delay_bound = delay_bound;
    spec.activation_probability = activation_prob;
    spec.starvation_bound = starvation_bound;
    return spec;
}

Scenario scenario_with_param(Scenario s, const std::string& param, double value) {
    if (param == "h") {
        for (int j = 0; j < s.num_users; ++j)
            for (int i = 0; i < s.num_users; ++i)
                if (j != i)
                    for (int k = 0; k < s.num_channels; ++k)
                        s.gain_at(j, i, k) = value;
    } else if (param == "budget") {
        for (double& b : s.power_budget)
            b = value;
    } else if (param == "noise") {
        for (double& nz : s.noise)
            nz = value;
    } else {
        throw std::invalid_argument("unknown sweep parameter '" + param +
                                    "' (expected h, budget, or noise)");
    }
    const auto violations = validate_scenario(s);
    if (!violations.empty())
        throw std::invalid_argument("sweep value " + format_g12(value) +
                                    " makes the scenario invalid: " + violations.front());
    return s;
}

} // namespace

int cmd_run(const RunOptions& opt) {
    const Scenario s = load_scenario(opt.scenario_path);
    const ScheduleSpec schedule =
        schedule_from(opt.schedule, opt.alpha, opt.seed, opt.delay_bound, opt.activation_prob,
                      opt.starvation_bound);
    StopSpec stop;
    stop.tol = opt.tol;
    stop.max_iters = opt.max_iters;
    stop.cycle_window = opt.cycle_window;

    const PowerProfile start = make_start(s, opt.init, opt.init_file);
    const RunTrace trace = run(s, start, schedule, stop);
    write_trace_csv(trace, std::filesystem::path(opt.output_path));

    std::cout << "schedule: " << to_string(schedule.kind) << '\n';
    std::cout << "verdict: " << to_string(trace.verdict) << '\n';
    std::cout << "iterations: " << trace.iterations_used << '\n';
    for (int i = 0; i < s.num_users; ++i)
        std::cout << "rate[" << i << "]: "
                  << format_g12(trace.per_user_rates.back()[static_cast<std::size_t>(i)]) << '\n';
    for (int i = 0; i < s.num_users; ++i) {
        std::cout << "final_power[" << i << "]:";
        for (int k = 0; k < s.num_channels; ++k)
            std::cout << ' ' << format_g12(trace.final_profile.at(i, k));
        std::cout << '\n';
    }
    std::cout << "trace: " << opt.output_path << '\n';
    return verdict_exit(trace.verdict);
}

int cmd_analyze(const AnalyzeOptions& opt) {
    const Scenario s = load_scenario(opt.scenario_path);
    const AnalysisReport rep = analyze(s);

    for (int i = 0; i < rep.hmax.m.rows; ++i) {
        std::cout << "hmax[" << i << "]:";
        for (int j = 0; j < rep.hmax.m.cols; ++j)
            std::cout << ' ' << format_g12(rep.hmax.m.at(i, j));
        std::cout << '\n';
    }
    std::cout << "spectral_radius: " << format_g12(rep.hmax_spectral_radius) << '\n';
    std::cout << "contraction_certified: " << (rep.contraction_certified ? "true" : "false")
              << '\n';
    std::cout << "row_dominance:";
    for (bool b : rep.row_dominance)
        std::cout << ' ' << (b ? "true" : "false");
    std::cout << '\n';

    if (!opt.output_path.empty()) {
        std::ofstream out(opt.output_path);
        if (!out)
            throw std::runtime_error(opt.output_path + ": cannot open file for writing");
        out << analysis_report_to_json(rep).dump(2) << '\n';
        std::cout << "report: " << opt.output_path << '\n';
    }
    return 0;
}

int cmd_sweep(const SweepOptions& opt) {
    if (opt.values.empty())
        throw std::invalid_argument("sweep needs at least one value (--values)");
    const Scenario base = load_scenario(opt.scenario_path);

    const char* schedules[] = {"seq", "sim", "async"};
    std::vector<SweepRow> rows;
    for (double value : opt.values) {
        const Scenario s = scenario_with_param(base, opt.param, value);
        const AnalysisReport rep = analyze(s);
        for (const char* sched : schedules) {
            const ScheduleSpec spec =
                schedule_from(sched, opt.alpha, opt.seed, opt.delay_bound, opt.activation_prob,
                              opt.starvation_bound);
            StopSpec stop;
            stop.tol = opt.tol;
            stop.max_iters = opt.max_iters;
            stop.cycle_window = opt.cycle_window;
            const RunTrace trace = run(s, PowerProfile(s.num_users, s.num_channels), spec, stop);

            SweepRow row;
            row.param = opt.param;
            row.value = value;
            row.schedule = sched;
            row.rho_hmax = rep.hmax_spectral_radius;
            row.verdict = trace.verdict;
            row.iterations = trace.iterations_used;
            row.beta = trace.iterates.size() >= 3 ? empirical_beta(trace) : 0.0;
            rows.push_back(std::move(row));
        }
    }
    write_sweep_csv(rows, std::filesystem::path(opt.output_path));
    std::cout << "rows: " << rows.size() << '\n';
    std::cout << "sweep: " << opt.output_path << '\n';
    return 0;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Multi-user water-filling power control: run, analyze, sweep"};
    app.require_subcommand(1);

    RunOptions ropt;
    CLI::App* runc = app.add_subcommand("run", "Iterate a schedule on a scenario");
    runc->add_option("scenario", ropt.scenario_path, "Scenario JSON file")->required();
    runc->add_option("--schedule", ropt.schedule, "Update schedule")
        ->check(CLI::IsMember({"seq", "sim", "async"}));
    runc->add_option("--alpha", ropt.alpha, "Relaxation step in (0, 2]");
    runc->add_option("--tol", ropt.tol, "Sup-norm convergence tolerance");
    runc->add_option("--max-iters", ropt.max_iters, "Iteration cap");
    runc->add_option("--cycle-window", ropt.cycle_window, "Cycle lookback (0 disables)");
    runc->add_option("--seed", ropt.seed, "Async schedule RNG seed");
    runc->add_option("--delay-bound", ropt.delay_bound, "Async max staleness D");
    runc->add_option("--activation-prob", ropt.activation_prob, "Async activation probability");
    runc->add_option("--starvation-bound", ropt.starvation_bound, "Async forced-update bound B");
    runc->add_option("--init", ropt.init, "Start profile")
        ->check(CLI::IsMember({"zero", "uniform", "file"}));
    runc->add_option("--init-file", ropt.init_file, "Profile JSON for --init file");
    runc->add_option("--output,-o", ropt.output_path, "Trace CSV path");

    AnalyzeOptions aopt;
    CLI::App* analyzec = app.add_subcommand("analyze", "Contraction certificate for a scenario");
    analyzec->add_option("scenario", aopt.scenario_path, "Scenario JSON file")->required();
    analyzec->add_option("--output,-o", aopt.output_path, "Analysis report JSON path");

    SweepOptions sopt;
    CLI::App* sweepc = app.add_subcommand("sweep", "Sweep a scalar and run every schedule");
    sweepc->add_option("scenario", sopt.scenario_path, "Scenario JSON file")->required();
    sweepc->add_option("--param", sopt.param, "Scalar to vary: h, budget, or noise");
    sweepc->add_option("--values", sopt.values, "Values to sweep")->delimiter(',');
    sweepc->add_option("--alpha", sopt.alpha, "Relaxation step in (0, 2]");
    sweepc->add_option("--tol", sopt.tol, "Sup-norm convergence tolerance");
    sweepc->add_option("--max-iters", sopt.max_iters, "Iteration cap");
    sweepc->add_option("--cycle-window", sopt.cycle_window, "Cycle lookback (0 disables)");
    sweepc->add_option("--seed", sopt.seed, "Async schedule RNG seed");
    sweepc->add_option("--delay-bound", sopt.delay_bound, "Async max staleness D");
    sweepc->add_option("--activation-prob", sopt.activation_prob, "Async activation probability");
    sweepc->add_option("--starvation-bound", sopt.starvation_bound, "Async forced-update bound B");
    sweepc->add_option("--output,-o", sopt.output_path, "Summary CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (runc->parsed())
            return cmd_run(ropt);
        if (analyzec->parsed())
            return cmd_analyze(aopt);
        if (sweepc->parsed())
            return cmd_sweep(sopt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace iwf
