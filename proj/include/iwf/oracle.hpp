#pragma once

#include <span>
#include <vector>

#include "iwf/core_model.hpp"
#include "iwf/waterfill.hpp"

namespace iwf {

/// Exhaustive-search resolution: each user's budget is divided into
/// points_per_channel - 1 equal quanta per channel.
struct GridSpec {
    int points_per_channel = 101;
};

/// Exhaustive single-user allocation: maximize sum_k log(1 + p_k /
/// floor_k) over all grid allocations with sum_k p_k <= budget and p_k <=
/// mask_k. Ties resolve to the lexicographically smallest allocation.
/// Guards against grids with more than 1e7 nominal points.
std::vector<double> grid_waterfill(const Floor& floor, double budget,
                                   std::span<const double> mask, const GridSpec& grid);

/// Grid maximizer of user `user`'s rate with every other row of p frozen.
std::vector<double> grid_best_response(const Scenario& s, const NormalizedView& view,
                                       const PowerProfile& p, int user, const GridSpec& grid);

/// Largest one-user rate improvement (in nats) available on the grid at
/// profile p. Zero means no user can gain by a grid deviation.
double grid_residual(const Scenario& s, const PowerProfile& p, const GridSpec& grid);

struct BruteforceResult {
    PowerProfile profile;
    double residual = 0.0; // grid_residual at the returned profile
    int rounds = 0;
    bool exact = false;    // a full round left every row unchanged
};

/// Discrete equilibrium search: sequential grid best responses from the
/// zero profile until a full round changes nothing (then residual is
/// exactly zero) or 10000 rounds pass. Limited to at most three users.
BruteforceResult find_ne_bruteforce(const Scenario& s, const GridSpec& grid);

} // namespace iwf
