#include "iwf/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iwf {

namespace {

void validate_inputs(const Floor& floor, double budget, std::span<const double> mask) {
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
}

double mask_sum(std::span<const double> mask) {
    double s = 0.0;
    for (double m : mask)
        s += m; // infinity propagates
    return s;
}

double filled_total(const Floor& floor, std::span<const double> mask, double sigma) {
    double s = 0.0;
    for (std::size_t k = 0; k < mask.size(); ++k)
        s += std::clamp(sigma - floor.level[k], 0.0, mask[k]);
    return s;
}

} // namespace

double solve_water_level(const Floor& floor, double budget, std::span<const double> mask) {
    validate_inputs(floor, budget, mask);

    const double msum = mask_sum(mask);
    if (budget > 0.0 && !(msum > 0.0))
        throw DegenerateMaskError("positive budget but every mask entry is zero");

    const double target = std::min(budget, msum);
    if (target <= 0.0)
        return 0.0;

    if (msum <= budget) {
        // Masks saturate: the allocation equals the masks and the fill
        // function is constant at the target beyond the largest floor-plus-
        // mask corner, which is the infimum of the solution set.
        double sigma = 0.0;
        for (std::size_t k = 0; k < mask.size(); ++k)
            if (mask[k] > 0.0)
                sigma = std::max(sigma, floor.level[k] + mask[k]);
        return sigma;
    }

    double lo = 0.0;
    double hi = *std::max_element(floor.level.begin(), floor.level.end()) + target;
    // filled_total is nondecreasing in sigma, 0 at lo and >= target at hi;
    // bisect until the bracket collapses to adjacent doubles.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (filled_total(floor, mask, mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

WaterfillResult best_response(const Floor& floor, double budget, std::span<const double> mask) {
    WaterfillResult r;
    r.water_level = solve_water_level(floor, budget, mask);
    r.allocation.resize(mask.size());
    for (std::size_t k = 0; k < mask.size(); ++k)
        r.allocation[k] = std::clamp(r.water_level - floor.level[k], 0.0, mask[k]);
    r.budget_active = budget < mask_sum(mask);
    return r;
}

Floor compose_floor_from(const NormalizedView& view, int user,
                         const std::function<std::span<const double>(int)>& row_of_user) {
    if (user < 0 || user >= view.num_users)
        throw std::out_of_range("user index out of range");
    const auto nn = view.nnoise_row(user);
    Floor f;
    f.level.assign(nn.begin(), nn.end());
    for (int j = 0; j < view.num_users; ++j) {
        if (j == user)
            continue;
        const auto row = row_of_user(j);
        if (row.size() != static_cast<std::size_t>(view.num_channels))
            throw std::invalid_argument("power row has wrong channel count");
        for (int k = 0; k < view.num_channels; ++k)
            f.level[static_cast<std::size_t>(k)] += view.xgain_at(j, user, k) * row[k];
    }
    return f;
}

Floor compose_floor(const NormalizedView& view, const PowerProfile& p, int user) {
    if (p.num_users != view.num_users || p.num_channels != view.num_channels)
        throw std::invalid_argument("profile shape does not match normalized view");
    return compose_floor_from(view, user, [&p](int j) { return p.row(j); });
}

} // namespace iwf
