#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "iwf/core_model.hpp"
#include "iwf/rng.hpp"
#include "iwf/waterfill.hpp"

namespace iwf {

enum class ScheduleKind { sequential, simultaneous, asynchronous };

enum class Verdict { converged, max_iters_exceeded, cycle_detected };

const char* to_string(Verdict v);
const char* to_string(ScheduleKind k);

/// Which users update when, and how aggressively.
///
/// sequential: users apply best responses one at a time, in `order` (or
///   ascending index if empty), each seeing the updates already made this
///   sweep. One sweep over all users is one iteration.
/// simultaneous: all users respond to the same previous profile at once.
/// asynchronous: each step, every user independently activates with
///   probability `activation_probability`; a user idle for
///   starvation_bound - 1 consecutive steps is forced to update. Active
///   users read each other's rows with a random staleness drawn uniformly
///   from [0, min(delay_bound, age)] per (updater, source) pair per step.
struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::simultaneous;
    std::vector<int> order;            // sequential only; empty = ascending
    double alpha = 1.0;                // relaxation step in (0, 2]
    int delay_bound = 0;               // asynchronous only, >= 0
    double activation_probability = 1.0; // asynchronous only, in (0, 1]
    int starvation_bound = 5;          // asynchronous only, >= 1
    std::uint64_t rng_seed = 1;        // asynchronous only
};

/// Stopping rules. cycle_window = 0 disables cycle detection.
struct StopSpec {
    double tol = 1e-8;
    int max_iters = 500;
    int cycle_window = 8;
};

/// Complete record of one run. iterates[0] is the (projected) start;
/// sup_deltas[t] = sup_distance(iterates[t+1], iterates[t]);
/// per_user_rates[t][i] is user i's rate at iterates[t].
struct RunTrace {
    std::vector<PowerProfile> iterates;
    std::vector<double> sup_deltas;
    std::vector<std::vector<double>> per_user_rates;
    Verdict verdict = Verdict::max_iters_exceeded;
    int iterations_used = 0;
    PowerProfile final_profile;
    double stop_tol = 0.0;
};

/// Extension points used by the perturbation study. extra_delay forces
/// every cross-user read (any schedule) back by that many extra steps;
/// floor_hook may rewrite a user's composed floor before the best response
/// is solved (it receives the user's normalized noise row to tell noise
/// from interference).
struct RunHooks {
    int extra_delay = 0;
    std::function<void(int user, Floor& floor, std::span<const double> nnoise_row)> floor_hook;
};

/// Clamp every entry to [0, mask] and, for each user whose row then still
/// exceeds its budget, scale the row down proportionally onto the budget.
PowerProfile project_to_feasible(const Scenario& s, PowerProfile p);

/// One full sweep of in-place best responses (relaxed by spec.alpha).
PowerProfile step_sequential(const Scenario& s, const NormalizedView& view,
                             const PowerProfile& p, const ScheduleSpec& spec);

/// One round of best responses against the common previous profile.
PowerProfile step_simultaneous(const Scenario& s, const NormalizedView& view,
                               const PowerProfile& p, const ScheduleSpec& spec);

/// Evolving state of an asynchronous run: the iterate history (newest
/// last), per-user idle counters, and the schedule's RNG stream.
struct AsyncState {
    std::vector<PowerProfile> history;
    std::vector<int> idle;
    Rng rng;
};

AsyncState make_async_state(const PowerProfile& start, const ScheduleSpec& spec);

/// Advance the asynchronous schedule by one step, appending the new
/// profile to state.history.
void step_asynchronous(const Scenario& s, const NormalizedView& view, AsyncState& state,
                       const ScheduleSpec& spec);

/// Iterate the chosen schedule from `start` until the stop rules fire.
///
/// converged: sup-norm step below stop.tol (for the asynchronous schedule,
///   the last starvation_bound deltas must all be below stop.tol, so a
///   quiet stretch of idle steps cannot end the run early).
/// cycle_detected: the new profile matches an iterate m in [2,
///   cycle_window] steps back within stop.tol while the current step is
///   still at least stop.tol (so a genuine non-convergent orbit, not a
///   slow crawl, is flagged).
/// max_iters_exceeded: stop.max_iters steps without either of the above.
RunTrace run(const Scenario& s, const PowerProfile& start, const ScheduleSpec& schedule,
             const StopSpec& stop);
RunTrace run(const Scenario& s, const PowerProfile& start, const ScheduleSpec& schedule,
             const StopSpec& stop, const RunHooks& hooks);

} // namespace iwf
