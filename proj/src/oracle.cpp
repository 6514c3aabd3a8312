#include "iwf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iwf {

namespace {

void validate_grid(const GridSpec& grid, std::size_t channels) {
    if (grid.points_per_channel < 2)
        throw std::invalid_argument("grid needs at least two points per channel");
    if (std::pow(double(grid.points_per_channel), double(channels)) > 1e7)
        throw std::invalid_argument("grid too large: points_per_channel^K exceeds 1e7");
}

struct GridSearch {
    const Floor& floor;
    std::span<const double> mask;
    double step;
    int units; // points_per_channel - 1
    std::vector<int> caps;
    std::vector<int> counts;
    std::vector<int> best_counts;
    double best_value = -1.0;

    GridSearch(const Floor& f, std::span<const double> m, double step_, int units_)
        : floor(f), mask(m), step(step_), units(units_),
          caps(f.level.size()), counts(f.level.size(), 0), best_counts(f.level.size(), 0) {
        for (std::size_t k = 0; k < f.level.size(); ++k) {
            if (std::isinf(m[k]))
                caps[k] = units;
            else
                caps[k] = std::min(units, static_cast<int>(std::floor(m[k] / step + 1e-9)));
        }
    }

    double value_of(int c, std::size_t k) const {
        return std::log1p(double(c) * step / floor.level[k]);
    }

    /// Descend channel by channel in lexicographic order; the objective is
    /// strictly increasing per channel, so the last channel takes its
    /// feasible maximum. Strict improvement keeps the first (hence
    /// lexicographically smallest) maximizer.
    void descend(std::size_t k, int used, double value) {
        if (k + 1 == counts.size()) {
            const int c = std::min(caps[k], units - used);
            const double v = value + value_of(c, k);
            if (v > best_value) {
                best_value = v;
                counts[k] = c;
                best_counts = counts;
            }
            return;
        }
        const int hi = std::min(caps[k], units - used);
        for (int c = 0; c <= hi; ++c) {
            counts[k] = c;
            descend(k + 1, used + c, value + value_of(c, k));
        }
    }
};

double user_value(const NormalizedView& view, const PowerProfile& p, int user,
                  std::span<const double> row) {
    const Floor floor = compose_floor(view, p, user);
    double v = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k)
        v += std::log1p(row[k] / floor.level[k]);
    return v;
}

} // namespace

std::vector<double> grid_waterfill(const Floor& floor, double budget,
                                   std::span<const double> mask, const GridSpec& grid) {
    if (floor.level.empty())
        throw std::invalid_argument("floor must cover at least one channel");
    if (mask.size() != floor.level.size())
        throw std::invalid_argument("mask and floor channel counts differ");
    for (double f : floor.level)
        if (!(f > 0.0) || !std::isfinite(f))
            throw std::invalid_argument("floor levels must be positive and finite");
    if (!(budget >= 0.0) || !std::isfinite(budget))
        throw std::invalid_argument("budget must be nonnegative and finite");
    for (double m : mask)
        if (std::isnan(m) || m < 0.0)
            throw std::invalid_argument("mask entries must be nonnegative");
    validate_grid(grid, floor.level.size());

    std::vector<double> out(floor.level.size(), 0.0);
    if (budget == 0.0)
        return out;

    const int units = grid.points_per_channel - 1;
    const double step = budget / double(units);
    GridSearch search(floor, mask, step, units);
    search.descend(0, 0, 0.0);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = double(search.best_counts[k]) * step;
    return out;
}

std::vector<double> grid_best_response(const Scenario& s, const NormalizedView& view,
                                       const PowerProfile& p, int user, const GridSpec& grid) {
    if (user < 0 || user >= s.num_users)
        throw std::out_of_range("user index out of range");
    const Floor floor = compose_floor(view, p, user);
    return grid_waterfill(floor, s.power_budget[static_cast<std::size_t>(user)],
                          s.mask_row(user), grid);
}

double grid_residual(const Scenario& s, const PowerProfile& p, const GridSpec& grid) {
    const NormalizedView view = normalize(s);
    double worst = 0.0;
    for (int i = 0; i < s.num_users; ++i) {
        const auto br = grid_best_response(s, view, p, i, grid);
        const double gain = user_value(view, p, i, br) - user_value(view, p, i, p.row(i));
        worst = std::max(worst, gain);
    }
    return worst;
}

BruteforceResult find_ne_bruteforce(const Scenario& s, const GridSpec& grid) {
    if (s.num_users > 3)
        throw std::invalid_argument("bruteforce search is limited to three users");
    const NormalizedView view = normalize(s);

    BruteforceResult res;
    res.profile = PowerProfile(s.num_users, s.num_channels);
    for (int round = 1; round <= 10000; ++round) {
        bool changed = false;
        for (int i = 0; i < s.num_users; ++i) {
            const auto br = grid_best_response(s, view, res.profile, i, grid);
            auto row = res.profile.row(i);
            for (int k = 0; k < s.num_channels; ++k) {
                if (row[static_cast<std::size_t>(k)] != br[static_cast<std::size_t>(k)]) {
                    row[static_cast<std::size_t>(k)] = br[static_cast<std::size_t>(k)];
                    changed = true;
                }
            }
        }
        res.rounds = round;
        if (!changed) {
            res.exact = true;
            break;
        }
    }
    res.residual = res.exact ? 0.0 : grid_residual(s, res.profile, grid);
    return res;
}

} // namespace iwf
