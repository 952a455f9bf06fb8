#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "cna/kinematics.hpp"
#include "oracles.hpp"

using namespace cna;
using doctest::Approx;

TEST_CASE("head-on intercept uses the closing-speed closed form") {
    const InterceptSolution s = solve_intercept({0, 0}, 1.0, {100, 0}, kPi, 0.5);
    CHECK(s.branch == InterceptSolution::Branch::HeadOn);
    CHECK(s.tau == Approx(100.0 / 1.5).epsilon(1e-12));
    CHECK(s.heading == Approx(0.0));
    CHECK(s.point.x == Approx(100.0 - 0.5 * 100.0 / 1.5));
}

TEST_CASE("tail-chase intercept uses the relative-speed closed form") {
    const InterceptSolution s = solve_intercept({0, 0}, 1.0, {100, 0}, 0.0, 0.5);
    CHECK(s.branch == InterceptSolution::Branch::TailChase);
    CHECK(s.tau == Approx(200.0).epsilon(1e-12));
    CHECK(s.heading == Approx(0.0));
    CHECK(s.point.x == Approx(200.0));
}

TEST_CASE("crossing agent: sine-law triangle") {
    const InterceptSolution s = solve_intercept({0, 0}, 1.0, {100, 0}, kPi / 2, 0.5);
    CHECK(s.branch == InterceptSolution::Branch::General);
    CHECK(s.beta_agent == Approx(kPi / 2).epsilon(1e-12));
    CHECK(s.beta_cna == Approx(kPi / 6).epsilon(1e-12));
    CHECK(s.tau == Approx(200.0 / std::sqrt(3.0)).epsilon(1e-12));  // 115.470...
    CHECK(s.point.x == Approx(100.0).epsilon(1e-12));
    CHECK(s.point.y == Approx(100.0 / std::sqrt(3.0)).epsilon(1e-12));  // 57.735...
    CHECK(distance(testing::cna_position_after(s, {0, 0}, 1.0), s.point) < 1e-9);
    // Agent moving counter-clockwise relative to the line of sight: lead to the left.
    CHECK(s.heading == Approx(kPi / 6));
}

TEST_CASE("clockwise crossing leads to the right") {
    const InterceptSolution s = solve_intercept({0, 0}, 1.0, {100, 0}, -kPi / 2, 0.5);
    CHECK(s.heading == Approx(-kPi / 6));
    CHECK(s.point.y == Approx(-100.0 / std::sqrt(3.0)));
}

TEST_CASE("collocated start intercepts immediately") {
    const InterceptSolution s = solve_intercept({3, 4}, 1.0, {3, 4}, 1.25, 0.5);
    CHECK(s.branch == InterceptSolution::Branch::Collocated);
    CHECK(s.tau == 0.0);
    CHECK(s.heading == Approx(1.25));
}

TEST_CASE("intercept rejects a slower CNA and non-finite input") {
    CHECK_THROWS_AS(solve_intercept({0, 0}, 0.5, {1, 0}, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(solve_intercept({0, 0}, 0.4, {1, 0}, 0.0, 0.5), std::invalid_argument);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_intercept({nan, 0}, 1.0, {1, 0}, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(solve_intercept({0, 0}, 1.0, {1, 0}, INFINITY, 0.5), std::invalid_argument);
}

TEST_CASE("random intercepts collocate, are minimal and satisfy the triangle identity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(-1000.0, 1000.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> ratio(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec2 c{pos(rng), pos(rng)};
        const Vec2 a{pos(rng), pos(rng)};
        const double heading = ang(rng);
        double eta = ratio(rng);
        if (eta == 0.0) {
            eta = 0.5;
        }
        const double vc = 1.0;
        const double va = eta * vc;
        const InterceptSolution s = solve_intercept(c, vc, a, heading, va);
        CAPTURE(trial);

        const Vec2 agent_at = a + (va * s.tau) * unit_vector(heading);
        const Vec2 cna_at = testing::cna_position_after(s, c, vc);
        CHECK(distance(agent_at, cna_at) <= 1e-6);

        // The reachable-set gap |a(t) - c| - vc t is convex with a single
        // root, which is the minimum intercept time.
        CHECK(std::abs(testing::reach_gap(c, vc, a, heading, va, s.tau)) <= 1e-6);

        if (s.branch == InterceptSolution::Branch::General) {
            CHECK(std::abs(s.apex_angle + s.beta_agent + s.beta_cna - kPi) <= 1e-9);
        }
    }
}

TEST_CASE("no sampled heading intercepts earlier") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-1000.0, 1000.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> ratio(0.05, 0.95);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec2 c{pos(rng), pos(rng)};
        const Vec2 a{pos(rng), pos(rng)};
        const double heading = ang(rng);
        const double va = ratio(rng);
        const InterceptSolution s = solve_intercept(c, 1.0, a, heading, va);
        const double earliest = testing::grid_earliest_intercept(c, 1.0, a, heading, va, 1e-3);
        CAPTURE(trial);
        CHECK(earliest >= s.tau - 1e-3);
    }
}

TEST_CASE("sine-law time converges to the collinear closed forms") {
    const Vec2 c{0, 0};
    const Vec2 a{-300, 400};
    const double bearing = std::atan2(400.0, -300.0);
    const double d = 500.0;
    for (double va : {0.5, 0.99}) {
        for (double offset : {1e-8, -1e-8}) {
            CAPTURE(va);
            const InterceptSolution head_on = solve_intercept(c, 1.0, a, bearing + kPi + offset, va);
            REQUIRE(head_on.branch == InterceptSolution::Branch::General);
            CHECK(std::abs(head_on.tau / (d / (1.0 + va)) - 1.0) <= 1e-6);

            const InterceptSolution chase = solve_intercept(c, 1.0, a, bearing + offset, va);
            REQUIRE(chase.branch == InterceptSolution::Branch::General);
            CHECK(std::abs(chase.tau / (d / (1.0 - va)) - 1.0) <= 1e-6);
        }
    }
}

TEST_CASE("propagate_track follows the nominal straight line") {
    AgentSpec spec;
    spec.start = {0, 0};
    spec.heading = 0.0;
    spec.speed = 0.5;
    const auto track = propagate_track(spec, 4, 1.0);
    REQUIRE(track.size() == 5);
    for (int k = 0; k <= 4; ++k) {
        CHECK(track[static_cast<std::size_t>(k)].x == Approx(0.5 * k));
        CHECK(track[static_cast<std::size_t>(k)].y == 0.0);
    }
    CHECK(propagate_track(spec, 0, 1.0) == std::vector<Vec2>{spec.start});

    AgentSpec north;
    north.start = {3, 4};
    north.heading = kPi / 2;
    north.speed = 0.5;
    const Vec2 p = propagate_track(north, 10, 1.0).back();
    CHECK(p.x == Approx(3.0));
    CHECK(p.y == Approx(9.0));

    CHECK_THROWS_AS(propagate_track(spec, -1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(propagate_track(spec, 3, 0.0), std::invalid_argument);
}

TEST_CASE("zero-speed agents are rejected") {
    AgentSpec spec;
    spec.speed = 0.0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
}

TEST_CASE("discretize_arrival rounds up to the next step") {
    CHECK(discretize_arrival(66.667, 0, 1.0) == 67);
    CHECK(discretize_arrival(200.0, 10, 1.0) == 210);
    CHECK(discretize_arrival(0.0, 5, 1.0) == 5);
    CHECK(discretize_arrival(100.0 / 1.5, 0, 1.0) == 67);
    CHECK(discretize_arrival(2.5, 0, 0.5) == 5);
    CHECK_THROWS_AS(discretize_arrival(-1.0, 0, 1.0), std::invalid_argument);
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(kPi) == Approx(kPi));
    CHECK(wrap_angle(-kPi) == Approx(kPi));
    CHECK(wrap_angle(3 * kPi / 2) == Approx(-kPi / 2));
    CHECK(wrap_angle(0.25) == Approx(0.25));
}
