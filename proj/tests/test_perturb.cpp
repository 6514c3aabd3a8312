#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "iwf/perturb.hpp"
#include "support/test_scenarios.hpp"

using namespace iwf;
using namespace iwf::testsupport;

namespace {

Floor make_floor(std::vector<double> levels) {
    Floor f;
    f.level = std::move(levels);
    return f;
}

bool same_bits(const PowerProfile& a, const PowerProfile& b) {
    return a.p.size() == b.p.size() &&
           std::memcmp(a.p.data(), b.p.data(), a.p.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("zero magnitude leaves the floor untouched and draws nothing") {
    PerturbSpec spec;
    spec.noise_magnitude = 0.0;
    Rng rng(42);
    const Floor f = make_floor({1.5, 2.5});
    const std::vector<double> nn{1.0, 1.0};
    const Floor out = perturb_floor(f, nn, spec, rng);
    CHECK(std::memcmp(out.level.data(), f.level.data(), 2 * sizeof(double)) == 0);
    Rng fresh(42);
    CHECK(rng.u01() == fresh.u01()); // the perturbation consumed no randomness
}

TEST_CASE("relative noise scales only the interference component") {
    PerturbSpec spec;
    spec.noise_magnitude = 0.1;
    Rng rng(7);
    const Floor f = make_floor({6.0}); // noise 1.0 plus interference 5.0
    const std::vector<double> nn{1.0};
    bool saw_spread = false;
    double first = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const Floor out = perturb_floor(f, nn, spec, rng);
        REQUIRE(out.level.size() == 1);
        CHECK(out.level[0] >= 5.5 - 1e-12);
        CHECK(out.level[0] <= 6.5 + 1e-12);
        if (rep == 0)
            first = out.level[0];
        else if (out.level[0] != first)
            saw_spread = true;
    }
    CHECK(saw_spread);
}

TEST_CASE("identical seeds give identical perturbation streams") {
    PerturbSpec spec;
    spec.noise_magnitude = 0.25;
    const Floor f = make_floor({2.0, 3.0, 4.0});
    const std::vector<double> nn{0.5, 0.5, 0.5};
    Rng a(991), b(991);
    for (int rep = 0; rep < 20; ++rep) {
        const Floor fa = perturb_floor(f, nn, spec, a);
        const Floor fb = perturb_floor(f, nn, spec, b);
        CHECK(std::memcmp(fa.level.data(), fb.level.data(), 3 * sizeof(double)) == 0);
    }
}

TEST_CASE("perturbation input validation") {
    Rng rng(1);
    const Floor f = make_floor({2.0});
    const std::vector<double> nn{1.0};
    PerturbSpec spec;
    spec.noise_magnitude = 1.0;
    CHECK_THROWS_AS((void)perturb_floor(f, nn, spec, rng), std::invalid_argument);
    spec.noise_magnitude = -0.1;
    CHECK_THROWS_AS((void)perturb_floor(f, nn, spec, rng), std::invalid_argument);
    spec.noise_magnitude = std::nan("");
    CHECK_THROWS_AS((void)perturb_floor(f, nn, spec, rng), std::invalid_argument);
    spec.noise_magnitude = 0.1;
    const std::vector<double> wrong{1.0, 1.0};
    CHECK_THROWS_AS((void)perturb_floor(f, wrong, spec, rng), std::invalid_argument);
}

TEST_CASE("a clean perturbed run reproduces the plain run bit for bit") {
    const Scenario s = twouser_symmetric(0.1);
    ScheduleSpec sched;
    StopSpec stop;
    stop.tol = 1e-10;
    stop.max_iters = 200;
    PerturbSpec pspec; // magnitude 0, no extra delay
    const PowerProfile start = antisymmetric_start(s);
    const PerturbedRun pr = run_perturbed(s, start, sched, stop, pspec);
    const RunTrace plain = run(s, start, sched, stop);
    REQUIRE(pr.trace.iterates.size() == plain.iterates.size());
    for (std::size_t t = 0; t < plain.iterates.size(); ++t)
        CHECK(same_bits(pr.trace.iterates[t], plain.iterates[t]));
    CHECK(pr.trace.verdict == plain.verdict);
    CHECK(pr.trace.sup_deltas == plain.sup_deltas);
    // the tail of a cleanly converging trace hugs its own limit
    CHECK(pr.neighborhood.max_tail_distance <= 1e-6);
    CHECK(same_bits(pr.neighborhood.reference, plain.final_profile));
}

TEST_CASE("deterministic replay of a noisy run") {
    const Scenario s = twouser_symmetric(0.1);
    ScheduleSpec sched;
    StopSpec stop;
    stop.tol = 1e-12;
    stop.max_iters = 120;
    stop.cycle_window = 0;
    PerturbSpec pspec;
    pspec.noise_magnitude = 0.05;
    pspec.rng_seed = 4242;
    const PowerProfile start = antisymmetric_start(s);
    const PerturbedRun a = run_perturbed(s, start, sched, stop, pspec);
    const PerturbedRun b = run_perturbed(s, start, sched, stop, pspec);
    REQUIRE(a.trace.iterates.size() == b.trace.iterates.size());
    CHECK(same_bits(a.trace.final_profile, b.trace.final_profile));
    CHECK(a.neighborhood.tail_distances == b.neighborhood.tail_distances);
}

TEST_CASE("noisy runs stay in a neighborhood that shrinks with the noise") {
    const Scenario s = twouser_symmetric(0.1);
    ScheduleSpec sched;
    StopSpec stop;
    stop.tol = 1e-12; // keep iterating through the noise for a fixed horizon
    stop.max_iters = 400;
    stop.cycle_window = 0;
    const PowerProfile start = antisymmetric_start(s);

    auto tail_at = [&](double eps, std::uint64_t seed) {
        PerturbSpec pspec;
        pspec.noise_magnitude = eps;
        pspec.rng_seed = seed;
        const PerturbedRun pr = run_perturbed(s, start, sched, stop, pspec);
        CHECK(pr.neighborhood.max_tail_distance > 0.0);
        return pr.neighborhood.max_tail_distance;
    };

    SUBCASE("same draw stream, halved magnitude") {
        const double small = tail_at(0.025, 17);
        const double large = tail_at(0.05, 17);
        CHECK(small <= 0.75 * large);
    }
    SUBCASE("median over seeds is monotone in the magnitude") {
        std::vector<double> small, large;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            small.push_back(tail_at(0.02, seed));
            large.push_back(tail_at(0.08, seed));
        }
        std::sort(small.begin(), small.end());
        std::sort(large.begin(), large.end());
        CHECK(small[small.size() / 2] <= large[large.size() / 2]);
    }
}

TEST_CASE("extra reading delay alone does not break convergence") {
    Rng rng(555);
    const Scenario s = random_certified_scenario(rng);
    StopSpec stop;
    stop.tol = 1e-8;
    stop.max_iters = 4000;
    stop.cycle_window = 0;
    PerturbSpec pspec;
    pspec.extra_delay = 2;

    ScheduleSpec sim;
    const PerturbedRun a = run_perturbed(s, PowerProfile(s.num_users, s.num_channels),
                                         sim, stop, pspec);
    CHECK(a.trace.verdict == Verdict::converged);

    ScheduleSpec async;
    async.kind = ScheduleKind::asynchronous;
    async.delay_bound = 2;
    async.activation_probability = 0.5;
    async.starvation_bound = 5;
    async.rng_seed = 77;
    const PerturbedRun b = run_perturbed(s, PowerProfile(s.num_users, s.num_channels),
                                         async, stop, pspec);
    CHECK(b.trace.verdict == Verdict::converged);
    CHECK(sup_distance(a.trace.final_profile, b.trace.final_profile) <= 1e-6);
}
