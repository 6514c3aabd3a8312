#include "iwf/perturb.hpp"

#include <cmath>
#include <stdexcept>

namespace iwf {

namespace {

void validate_spec(const PerturbSpec& spec) {
    if (std::isnan(spec.noise_magnitude) || spec.noise_magnitude < 0.0 ||
        spec.noise_magnitude >= 1.0)
        throw std::invalid_argument("noise_magnitude must lie in [0, 1)");
    if (spec.extra_delay < 0)
        throw std::invalid_argument("extra_delay must be nonnegative");
}

} // namespace

Floor perturb_floor(const Floor& floor, std::span<const double> nnoise_row,
                    const PerturbSpec& spec, Rng& rng) {
    validate_spec(spec);
    if (nnoise_row.size() != floor.level.size())
        throw std::invalid_argument("noise row and floor channel counts differ");
    if (spec.noise_magnitude == 0.0)
        return floor;
    Floor out = floor;
    for (std::size_t k = 0; k < out.level.size(); ++k) {
        const double interference = floor.level[k] - nnoise_row[k];
        const double u = rng.uniform(1.0 - spec.noise_magnitude, 1.0 + spec.noise_magnitude);
        out.level[k] = nnoise_row[k] + interference * u;
    }
    return out;
}

PerturbedRun run_perturbed(const Scenario& s, const PowerProfile& start,
                           const ScheduleSpec& schedule, const StopSpec& stop,
                           const PerturbSpec& pspec) {
    validate_spec(pspec);

    PerturbedRun out;
    const RunTrace clean = run(s, start, schedule, stop);
    out.neighborhood.reference = clean.final_profile;

    RunHooks hooks;
    hooks.extra_delay = pspec.extra_delay;
    Rng noise_rng(pspec.rng_seed);
    if (pspec.noise_magnitude > 0.0) {
        hooks.floor_hook = [&pspec, &noise_rng](int, Floor& floor,
                                                std::span<const double> nnoise_row) {
            floor = perturb_floor(floor, nnoise_row, pspec, noise_rng);
        };
    }
    out.trace = run(s, start, schedule, stop, hooks);

    const std::size_t total = out.trace.iterates.size();
    std::size_t tail = (total + 3) / 4; // last quarter, at least one iterate
    if (tail == 0)
        tail = 1;
    for (std::size_t t = total - tail; t < total; ++t)
        out.neighborhood.tail_distances.push_back(
            sup_distance(out.trace.iterates[t], out.neighborhood.reference));
    for (double d : out.neighborhood.tail_distances)
        out.neighborhood.max_tail_distance = std::max(out.neighborhood.max_tail_distance, d);
    return out;
}

} // namespace iwf
