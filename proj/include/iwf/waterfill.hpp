#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "iwf/core_model.hpp"

namespace iwf {

/// Per-channel effective floor seen by one user: normalized noise plus
/// normalized interference. Every entry must be strictly positive.
struct Floor {
    std::vector<double> level;
};

/// Output of the single-user water-filling problem.
struct WaterfillResult {
    std::vector<double> allocation;
    double water_level = 0.0;
    bool budget_active = false; // true iff budget < sum of masks
};

/// Thrown when budget > 0 but every mask entry is zero: no power can be
/// placed anywhere, so the problem has no feasible allocation of positive
/// total power.
struct DegenerateMaskError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Smallest water level sigma such that sum_k clamp(sigma - floor_k, 0,
/// mask_k) meets the effective budget min(budget, sum_k mask_k). When the
/// masks saturate (their sum is at most the budget) the clamp is constant
/// beyond max_k(floor_k + mask_k) and that point, the infimum of the
/// solution set, is returned.
double solve_water_level(const Floor& floor, double budget, std::span<const double> mask);

/// Water-filling allocation: clamp(sigma - floor_k, 0, mask_k) with sigma
/// from solve_water_level. budget == 0 yields the zero allocation.
WaterfillResult best_response(const Floor& floor, double budget, std::span<const double> mask);

/// Floor of `user` under profile p: normalized noise plus sum over other
/// users of normalized cross gain times their power.
Floor compose_floor(const NormalizedView& view, const PowerProfile& p, int user);

/// Same composition, but each other user's power row is supplied by a
/// callback. This is the one summation used everywhere, so schedules that
/// read stale rows produce bitwise-identical floors when the rows match.
Floor compose_floor_from(const NormalizedView& view, int user,
                         const std::function<std::span<const double>(int)>& row_of_user);

} // namespace iwf
