#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "iwf/engine.hpp"
#include "iwf/oracle.hpp"
#include "support/test_scenarios.hpp"

using namespace iwf;
using namespace iwf::testsupport;

namespace {

Floor make_floor(std::vector<double> levels) {
    Floor f;
    f.level = std::move(levels);
    return f;
}

} // namespace

TEST_CASE("grid search recovers easy closed forms") {
    GridSpec grid;
    const std::vector<double> open{unbounded_mask(), unbounded_mask()};

    SUBCASE("flat floors split the budget") {
        const auto a = grid_waterfill(make_floor({1.0, 1.0}), 10.0, open, grid);
        CHECK(a[0] == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(a[1] == doctest::Approx(5.0).epsilon(1e-12));
    }
    SUBCASE("tilted floors on a fine grid") {
        GridSpec fine;
        fine.points_per_channel = 2001; // 2001^2 states stays under the size cap
        const auto a = grid_waterfill(make_floor({1.0, 3.0}), 4.0, open, fine);
        const double step = 4.0 / 2000.0;
        CHECK(std::abs(a[0] - 3.0) <= step + 1e-12);
        CHECK(std::abs(a[1] - 1.0) <= step + 1e-12);
        CHECK(a[0] + a[1] == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("zero budget allocates nothing") {
        const auto a = grid_waterfill(make_floor({1.0, 3.0}), 0.0, open, grid);
        CHECK(a == std::vector<double>{0.0, 0.0});
    }
    SUBCASE("masks cap the grid") {
        const std::vector<double> m{2.0, unbounded_mask()};
        const auto a = grid_waterfill(make_floor({1.0, 1.0}), 10.0, m, grid);
        CHECK(a[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(a[1] == doctest::Approx(8.0).epsilon(1e-12));
    }
}

TEST_CASE("coarse grids break exact ties deterministically") {
    GridSpec two;
    two.points_per_channel = 2; // only all-or-nothing splits
    const std::vector<double> open{unbounded_mask(), unbounded_mask()};
    const auto a = grid_waterfill(make_floor({1.0, 1.0}), 10.0, open, two);
    const auto b = grid_waterfill(make_floor({1.0, 1.0}), 10.0, open, two);
    CHECK(a == b);
    CHECK(a[0] + a[1] == doctest::Approx(10.0).epsilon(1e-12));
    const double value = std::log1p(a[0] / 1.0) + std::log1p(a[1] / 1.0);
    CHECK(value == doctest::Approx(std::log(11.0)).epsilon(1e-12));
}

TEST_CASE("grid search guardrails") {
    GridSpec grid;
    const std::vector<double> open4(4, unbounded_mask());
    CHECK_THROWS_AS((void)grid_waterfill(make_floor({1, 1, 1, 1}), 10.0, open4, grid),
                    std::invalid_argument); // 101^4 states is past the size cap
    GridSpec one;
    one.points_per_channel = 1;
    const std::vector<double> open{unbounded_mask()};
    CHECK_THROWS_AS((void)grid_waterfill(make_floor({1.0}), 10.0, open, one),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)grid_waterfill(make_floor({1.0}), -1.0, open, grid),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)grid_waterfill(make_floor({-1.0}), 1.0, open, grid),
                    std::invalid_argument);
}

TEST_CASE("grid best response spends the whole budget") {
    const Scenario s = twouser_symmetric(0.1);
    const NormalizedView view = normalize(s);
    PowerProfile p(2, 2);
    p.at(1, 0) = 7.0;
    p.at(1, 1) = 3.0;
    GridSpec grid;
    const auto a = grid_best_response(s, view, p, 0, grid);
    CHECK(a[0] + a[1] == doctest::Approx(10.0).epsilon(1e-9));
    // more power goes to the quieter channel
    CHECK(a[1] > a[0]);
}

TEST_CASE("exhaustive equilibrium search on the flat two-user scenario") {
    const Scenario s = twouser_symmetric(0.1);
    GridSpec grid;
    const BruteforceResult res = find_ne_bruteforce(s, grid);
    REQUIRE(res.exact);
    CHECK(res.residual == 0.0);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            CHECK(res.profile.at(i, k) == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(res.rounds >= 1);
}

TEST_CASE("single-user search reduces to one grid waterfill") {
    Scenario one(1, 2);
    one.gain_at(0, 0, 0) = 1.0;
    one.gain_at(0, 0, 1) = 1.0;
    one.noise_at(0, 0) = 1.0;
    one.noise_at(0, 1) = 3.0;
    one.power_budget = {4.0};
    GridSpec grid;
    grid.points_per_channel = 401;
    const BruteforceResult res = find_ne_bruteforce(one, grid);
    REQUIRE(res.exact);
    const std::vector<double> open{unbounded_mask(), unbounded_mask()};
    const auto direct = grid_waterfill(make_floor({1.0, 3.0}), 4.0, open, grid);
    CHECK(res.profile.at(0, 0) == direct[0]);
    CHECK(res.profile.at(0, 1) == direct[1]);
}

TEST_CASE("decoupled users settle in one extra round") {
    const Scenario s = twouser_asymmetric_noise(0.0);
    GridSpec grid;
    const BruteforceResult res = find_ne_bruteforce(s, grid);
    REQUIRE(res.exact);
    CHECK(res.residual == 0.0);
    CHECK(res.rounds <= 3);
    // each user ignores the other: both rows solve the same noise-only problem
    for (int k = 0; k < 2; ++k)
        CHECK(res.profile.at(0, k) == doctest::Approx(res.profile.at(1, k)).epsilon(1e-12));
}

TEST_CASE("search size limits") {
    Scenario four(4, 1);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i)
            four.gain_at(j, i, 0) = (i == j) ? 1.0 : 0.01;
        four.noise_at(j, 0) = 1.0;
        four.power_budget[j] = 1.0;
    }
    GridSpec grid;
    CHECK_THROWS_AS((void)find_ne_bruteforce(four, grid), std::invalid_argument);
}

TEST_CASE("iterative runs land on the exhaustively-searched equilibrium") {
    Rng rng(909);
    GenOptions opt;
    opt.min_users = 2;
    opt.max_users = 2;
    opt.min_channels = 1;
    opt.max_channels = 2;
    opt.rho_lo = 0.15;
    opt.rho_hi = 0.6;
    opt.allow_masks = false;
    GridSpec grid;
    for (int rep = 0; rep < 6; ++rep) {
        const Scenario s = random_certified_scenario(rng, opt);
        ScheduleSpec sched;
        StopSpec stop;
        stop.tol = 1e-9;
        stop.max_iters = 5000;
        stop.cycle_window = 0;
        const RunTrace t = run(s, PowerProfile(s.num_users, s.num_channels), sched, stop);
        REQUIRE(t.verdict == Verdict::converged);
        const BruteforceResult res = find_ne_bruteforce(s, grid);
        for (int i = 0; i < s.num_users; ++i) {
            const double step = s.power_budget[i] / (grid.points_per_channel - 1);
            for (int k = 0; k < s.num_channels; ++k)
                CHECK(std::abs(t.final_profile.at(i, k) - res.profile.at(i, k)) <=
                      2.0 * step + 1e-6);
        }
        // at the converged profile no user can gain more than a grid cell's worth
        CHECK(grid_residual(s, t.final_profile, grid) <= 1e-6);
    }
}
