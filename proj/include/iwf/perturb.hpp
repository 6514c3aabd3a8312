#pragma once

#include <cstdint>
#include <span>

#include "iwf/core_model.hpp"
#include "iwf/engine.hpp"
#include "iwf/rng.hpp"
#include "iwf/waterfill.hpp"

namespace iwf {

/// Imperfections applied to every best-response solve: multiplicative
/// measurement noise on the interference part of each floor entry, and a
/// fixed extra staleness on every cross-user read.
struct PerturbSpec {
    double noise_magnitude = 0.0; // epsilon in [0, 1)
    int extra_delay = 0;          // steps, >= 0
    std::uint64_t rng_seed = 1;   // noise stream, separate from the schedule's
};

/// Scale the interference component of each floor entry by an independent
/// uniform factor in [1 - eps, 1 + eps]; the noise component (the
/// caller's normalized noise row) is left untouched. eps == 0 returns the
/// floor unchanged without consuming randomness.
Floor perturb_floor(const Floor& floor, std::span<const double> nnoise_row,
                    const PerturbSpec& spec, Rng& rng);

/// Where the perturbed run settled relative to the unperturbed fixed
/// point: sup-norm distances of the last quarter of the iterates, and
/// their maximum.
struct NeighborhoodReport {
    std::vector<double> tail_distances;
    double max_tail_distance = 0.0;
    PowerProfile reference;
};

struct PerturbedRun {
    RunTrace trace;
    NeighborhoodReport neighborhood;
};

/// Run the schedule twice: once clean to obtain the reference fixed
/// point, once with the perturbations wired into every floor composition
/// and read. With noise_magnitude == 0 and extra_delay == 0 the perturbed
/// trace is bitwise identical to the clean one.
PerturbedRun run_perturbed(const Scenario& s, const PowerProfile& start,
                           const ScheduleSpec& schedule, const StopSpec& stop,
                           const PerturbSpec& pspec);

} // namespace iwf
