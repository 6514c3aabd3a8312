#include "iwf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iwf {

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::max_iters_exceeded: return "max_iters_exceeded";
    case Verdict::cycle_detected: return "cycle_detected";
    }
    return "unknown";
}

const char* to_string(ScheduleKind k) {
    switch (k) {
    case ScheduleKind::sequential: return "sequential";
    case ScheduleKind::simultaneous: return "simultaneous";
    case ScheduleKind::asynchronous: return "asynchronous";
    }
    return "unknown";
}

namespace {

void validate_schedule(const ScheduleSpec& spec, int num_users) {
    if (!(spec.alpha > 0.0) || spec.alpha > 2.0)
        throw std::invalid_argument("alpha must lie in (0, 2]");
    if (spec.delay_bound < 0)
        throw std::invalid_argument("delay_bound must be nonnegative");
    if (!(spec.activation_probability > 0.0) || spec.activation_probability > 1.0)
        throw std::invalid_argument("activation_probability must lie in (0, 1]");
    if (spec.starvation_bound < 1)
        throw std::invalid_argument("starvation_bound must be at least 1");
    if (!spec.order.empty()) {
        if (spec.order.size() != static_cast<std::size_t>(num_users))
            throw std::invalid_argument("order must list every user exactly once");
        std::vector<bool> seen(static_cast<std::size_t>(num_users), false);
        for (int u : spec.order) {
            if (u < 0 || u >= num_users || seen[static_cast<std::size_t>(u)])
                throw std::invalid_argument("order must be a permutation of 0..N-1");
            seen[static_cast<std::size_t>(u)] = true;
        }
    }
}

void validate_stop(const StopSpec& stop) {
    if (!(stop.tol > 0.0))
        throw std::invalid_argument("tol must be positive");
    if (stop.max_iters < 1)
        throw std::invalid_argument("max_iters must be at least 1");
    if (stop.cycle_window < 0)
        throw std::invalid_argument("cycle_window must be nonnegative");
}

void check_shape(const Scenario& s, const PowerProfile& p) {
    if (p.num_users != s.num_users || p.num_channels != s.num_channels)
        throw std::invalid_argument("profile shape does not match scenario");
}

void project_row(const Scenario& s, int i, std::span<double> row) {
    double sum = 0.0;
    for (int k = 0; k < s.num_channels; ++k) {
        row[static_cast<std::size_t>(k)] =
            std::clamp(row[static_cast<std::size_t>(k)], 0.0, s.mask_at(i, k));
        sum += row[static_cast<std::size_t>(k)];
    }
    const double budget = s.power_budget[static_cast<std::size_t>(i)];
    if (sum > budget) {
        const double scale = budget / sum; // sum > budget >= 0, so sum > 0
        for (int k = 0; k < s.num_channels; ++k)
            row[static_cast<std::size_t>(k)] *= scale;
    }
}

using RowProvider = std::function<std::span<const double>(int)>;

/// Solve user i's best response against the rows served by `row_of`,
/// relax it against own_prev, and write the projected result into out.
void update_user(const Scenario& s, const NormalizedView& view, int i, double alpha,
                 const RowProvider& row_of, std::span<const double> own_prev, PowerProfile& out,
                 const RunHooks* hooks) {
    Floor floor = compose_floor_from(view, i, row_of);
    if (hooks && hooks->floor_hook)
        hooks->floor_hook(i, floor, view.nnoise_row(i));
    const WaterfillResult wf =
        best_response(floor, s.power_budget[static_cast<std::size_t>(i)], s.mask_row(i));
    auto row = out.row(i);
    for (int k = 0; k < s.num_channels; ++k)
        row[static_cast<std::size_t>(k)] =
            (1.0 - alpha) * own_prev[static_cast<std::size_t>(k)] +
            alpha * wf.allocation[static_cast<std::size_t>(k)];
    project_row(s, i, row);
}

/// history may be null when no delayed reads are possible (public one-step
/// calls); it must be non-null whenever delay > 0.
std::span<const double> delayed_row(const std::vector<PowerProfile>* history,
                                    const PowerProfile& live, int j, int delay) {
    if (delay <= 0 || history == nullptr)
        return live.row(j);
    const int t = static_cast<int>(history->size()) - 1;
    const int idx = t - std::min(delay, t);
    return (*history)[static_cast<std::size_t>(idx)].row(j);
}

PowerProfile sequential_next(const Scenario& s, const NormalizedView& view,
                             const PowerProfile& cur, const ScheduleSpec& spec,
                             const std::vector<PowerProfile>* history, const RunHooks* hooks) {
    const int extra = hooks ? hooks->extra_delay : 0;
    PowerProfile next = cur;
    std::vector<int> order = spec.order;
    if (order.empty()) {
        order.resize(static_cast<std::size_t>(s.num_users));
        for (int i = 0; i < s.num_users; ++i)
            order[static_cast<std::size_t>(i)] = i;
    }
    for (int i : order) {
        const RowProvider row_of = [&](int j) { return delayed_row(history, next, j, extra); };
        update_user(s, view, i, spec.alpha, row_of, next.row(i), next, hooks);
    }
    return next;
}

PowerProfile simultaneous_next(const Scenario& s, const NormalizedView& view,
                               const PowerProfile& cur, const ScheduleSpec& spec,
                               const std::vector<PowerProfile>* history, const RunHooks* hooks) {
    const int extra = hooks ? hooks->extra_delay : 0;
    PowerProfile next = cur;
    for (int i = 0; i < s.num_users; ++i) {
        const RowProvider row_of = [&](int j) { return delayed_row(history, cur, j, extra); };
        update_user(s, view, i, spec.alpha, row_of, cur.row(i), next, hooks);
    }
    return next;
}

/// One asynchronous step over externally owned state. Draw order is fixed:
/// one activation draw per user in ascending order, then for each active
/// user in ascending order one staleness draw per other user in ascending
/// order. Forced activation (idle for starvation_bound - 1 steps) replaces
/// the user's own draw result but the draw is still consumed.
void async_advance(const Scenario& s, const NormalizedView& view, const ScheduleSpec& spec,
                   std::vector<PowerProfile>& history, std::vector<int>& idle, Rng& rng,
                   const RunHooks* hooks) {
    const int n = s.num_users;
    const int t = static_cast<int>(history.size()) - 1;
    const PowerProfile& cur = history.back();
    const int extra = hooks ? hooks->extra_delay : 0;

    std::vector<bool> active(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const bool drawn = rng.bernoulli(spec.activation_probability);
        active[static_cast<std::size_t>(i)] =
            drawn || idle[static_cast<std::size_t>(i)] >= spec.starvation_bound - 1;
    }

    PowerProfile next = cur;
    for (int i = 0; i < n; ++i) {
        if (!active[static_cast<std::size_t>(i)])
            continue;
        // Staleness per (updater, source) pair, drawn before composing.
        std::vector<int> stale(static_cast<std::size_t>(n), 0);
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            stale[static_cast<std::size_t>(j)] =
                rng.uniform_int(0, std::min(spec.delay_bound, t));
        }
        const RowProvider row_of = [&](int j) {
            const int eff = std::min(stale[static_cast<std::size_t>(j)] + extra, t);
            return history[static_cast<std::size_t>(t - eff)].row(j);
        };
        update_user(s, view, i, spec.alpha, row_of, cur.row(i), next, hooks);
    }
    for (int i = 0; i < n; ++i)
        idle[static_cast<std::size_t>(i)] = active[static_cast<std::size_t>(i)]
                                                ? 0
                                                : idle[static_cast<std::size_t>(i)] + 1;
    history.push_back(std::move(next));
}

} // namespace

PowerProfile project_to_feasible(const Scenario& s, PowerProfile p) {
    check_shape(s, p);
    for (int i = 0; i < s.num_users; ++i)
        project_row(s, i, p.row(i));
    return p;
}

PowerProfile step_sequential(const Scenario& s, const NormalizedView& view,
                             const PowerProfile& p, const ScheduleSpec& spec) {
    validate_schedule(spec, s.num_users);
    check_shape(s, p);
    return sequential_next(s, view, p, spec, nullptr, nullptr);
}

PowerProfile step_simultaneous(const Scenario& s, const NormalizedView& view,
                               const PowerProfile& p, const ScheduleSpec& spec) {
    validate_schedule(spec, s.num_users);
    check_shape(s, p);
    return simultaneous_next(s, view, p, spec, nullptr, nullptr);
}

AsyncState make_async_state(const PowerProfile& start, const ScheduleSpec& spec) {
    AsyncState st{{start}, std::vector<int>(static_cast<std::size_t>(start.num_users), 0),
                  Rng(spec.rng_seed)};
    return st;
}

void step_asynchronous(const Scenario& s, const NormalizedView& view, AsyncState& state,
                       const ScheduleSpec& spec) {
    validate_schedule(spec, s.num_users);
    if (state.history.empty())
        throw std::invalid_argument("async state has no starting profile");
    check_shape(s, state.history.back());
    async_advance(s, view, spec, state.history, state.idle, state.rng, nullptr);
}

RunTrace run(const Scenario& s, const PowerProfile& start, const ScheduleSpec& schedule,
             const StopSpec& stop) {
    return run(s, start, schedule, stop, RunHooks{});
}

RunTrace run(const Scenario& s, const PowerProfile& start, const ScheduleSpec& schedule,
             const StopSpec& stop, const RunHooks& hooks) {
    validate_schedule(schedule, s.num_users);
    validate_stop(stop);
    if (hooks.extra_delay < 0)
        throw std::invalid_argument("extra_delay must be nonnegative");
    check_shape(s, start);
    const NormalizedView view = normalize(s);

    RunTrace trace;
    trace.stop_tol = stop.tol;
    trace.iterates.push_back(project_to_feasible(s, start));

    const auto record_rates = [&](const PowerProfile& p) {
        std::vector<double> rates(static_cast<std::size_t>(s.num_users), 0.0);
        for (int i = 0; i < s.num_users; ++i)
            rates[static_cast<std::size_t>(i)] = rate(s, p, i);
        trace.per_user_rates.push_back(std::move(rates));
    };
    record_rates(trace.iterates.front());

    std::vector<int> idle(static_cast<std::size_t>(s.num_users), 0);
    Rng rng(schedule.rng_seed);
    // The quiet window must outlast both idleness and staleness: within
    // starvation_bound steps every user has updated, but that update may
    // have validated against rows up to delay_bound (plus any hook delay)
    // steps older. A shorter window can declare convergence off the fixed
    // point when a user confirms its row against pre-move data.
    const int window = schedule.kind == ScheduleKind::asynchronous
                           ? schedule.starvation_bound + schedule.delay_bound +
                                 hooks.extra_delay
                           : 1;

    trace.verdict = Verdict::max_iters_exceeded;
    for (int step = 0; step < stop.max_iters; ++step) {
        const PowerProfile cur = trace.iterates.back();
        switch (schedule.kind) {
        case ScheduleKind::sequential:
            trace.iterates.push_back(
                sequential_next(s, view, cur, schedule, &trace.iterates, &hooks));
            break;
        case ScheduleKind::simultaneous:
            trace.iterates.push_back(
                simultaneous_next(s, view, cur, schedule, &trace.iterates, &hooks));
            break;
        case ScheduleKind::asynchronous:
            async_advance(s, view, schedule, trace.iterates, idle, rng, &hooks);
            break;
        }
        const PowerProfile& next = trace.iterates.back();
        const double delta = sup_distance(next, cur);
        trace.sup_deltas.push_back(delta);
        record_rates(next);

        if (trace.sup_deltas.size() >= static_cast<std::size_t>(window)) {
            double worst = 0.0;
            for (std::size_t w = trace.sup_deltas.size() - static_cast<std::size_t>(window);
                 w < trace.sup_deltas.size(); ++w)
                worst = std::max(worst, trace.sup_deltas[w]);
            if (worst < stop.tol) {
                trace.verdict = Verdict::converged;
                break;
            }
        }
        if (delta >= stop.tol && stop.cycle_window >= 2) {
            const int tnew = static_cast<int>(trace.iterates.size()) - 1;
            bool cycled = false;
            for (int m = 2; m <= std::min(stop.cycle_window, tnew); ++m) {
                if (sup_distance(next, trace.iterates[static_cast<std::size_t>(tnew - m)]) <
                    stop.tol) {
                    cycled = true;
                    break;
                }
            }
            if (cycled) {
                trace.verdict = Verdict::cycle_detected;
                break;
            }
        }
    }

    trace.iterations_used = static_cast<int>(trace.iterates.size()) - 1;
    trace.final_profile = trace.iterates.back();
    return trace;
}

} // namespace iwf
