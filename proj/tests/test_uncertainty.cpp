#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cna/uncertainty.hpp"
#include "oracles.hpp"

using namespace cna;
using doctest::Approx;

namespace {

NoiseParams defaults() { return NoiseParams{}; }

// Brute-force argmin of the summed cost over Z in [1, T]; ties to the earlier step.
int brute_argmin(double nu0, double nu_cna, const NoiseParams& p, int horizon) {
    int best = 1;
    double best_cost = testing::summed_agent_cost(nu0, 1, nu_cna, p.nu_w, p.nu_y, horizon);
    for (int z = 2; z <= horizon; ++z) {
        const double c = testing::summed_agent_cost(nu0, z, nu_cna, p.nu_w, p.nu_y, horizon);
        if (c < best_cost) {
            best_cost = c;
            best = z;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("posterior variance examples") {
    CHECK(posterior_variance(1060, 10, 10) == Approx(19.62962962962963).epsilon(1e-14));
    CHECK(posterior_variance(102, 10, 10) == Approx(2040.0 / 122.0).epsilon(1e-14));
    CHECK(posterior_variance(0, 10, 10) == 0.0);
    CHECK(posterior_variance(50, 0, 0) == 0.0);
    CHECK(posterior_variance(0, 0, 0) == 0.0);
    CHECK_THROWS_AS(posterior_variance(-1, 10, 10), std::invalid_argument);
}

TEST_CASE("posterior never exceeds the prior and matches the information form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 5000.0);
    for (int i = 0; i < 1000; ++i) {
        const double prior = u(rng);
        const double y = u(rng) / 100.0;
        const double c = u(rng) / 10.0;
        const double post = posterior_variance(prior, y, c);
        CHECK(post <= prior);
        CHECK(post >= 0.0);
        CHECK(post == Approx(testing::info_form_posterior(prior, y, c)).epsilon(1e-12));
    }
}

TEST_CASE("agent variance trace before and after aiding") {
    NoiseParams p = defaults();
    const auto unaided = agent_variance_trace(100, std::nullopt, 0, p, 3);
    CHECK(unaided.values == std::vector<double>{100, 101, 102, 103});

    const double post = posterior_variance(102, p.nu_y, 10);
    const auto aided = agent_variance_trace(100, 2, post, p, 3);
    REQUIRE(aided.values.size() == 4);
    CHECK(aided.values[0] == 100);
    CHECK(aided.values[1] == 101);
    CHECK(aided.values[2] == Approx(16.721311475409838).epsilon(1e-14));
    CHECK(aided.values[3] == Approx(17.721311475409838).epsilon(1e-14));

    CHECK_THROWS_AS(agent_variance_trace(100, 4, post, p, 3), std::invalid_argument);
    CHECK_THROWS_AS(agent_variance_trace(100, std::nullopt, 0, p, -1), std::invalid_argument);
}

TEST_CASE("CNA variance grows and resets after surfacing") {
    NoiseParams p = defaults();
    p.surface_steps = 2;
    const auto trace = cna_variance_trace(0, p, 4);
    REQUIRE(trace.values.size() == 5);
    CHECK(trace.values[0] == Approx(10.0));
    CHECK(trace.values[1] == Approx(10.1));
    CHECK(trace.values[2] == Approx(10.0));
    CHECK(trace.values[3] == Approx(10.1));
    CHECK(trace.values[4] == Approx(10.2));

    const auto plain = cna_variance_trace(std::nullopt, defaults(), 3);
    CHECK(plain.values[3] == Approx(10.3));

    p.surface_steps = 60;
    CHECK_THROWS_AS(cna_variance_trace(1950, p, 2000), std::invalid_argument);
    CHECK_NOTHROW(cna_variance_trace(1940, p, 2000));
}

TEST_CASE("closed-form single-agent cost equals the time-averaged trace") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> horizon_dist(1, 400);
    for (int i = 0; i < 300; ++i) {
        NoiseParams p;
        p.nu_w = 2.0 * u(rng);
        p.nu_y = 50.0 * u(rng);
        const double nu0 = 3000.0 * u(rng);
        const double nu_cna = 100.0 * u(rng);
        const int horizon = horizon_dist(rng);
        const int z = 1 + static_cast<int>(u(rng) * horizon) % horizon;
        const double oracle = testing::summed_agent_cost(nu0, z, nu_cna, p.nu_w, p.nu_y, horizon);
        CAPTURE(i);
        CHECK(agent_cost(nu0, z, nu_cna, p, horizon) == Approx(oracle).epsilon(1e-10));

        const double post = posterior_variance(nu0 + z * p.nu_w, p.nu_y, nu_cna);
        CHECK(agent_variance_trace(nu0, z, post, p, horizon).mean() == Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("noise-free cost reduces to the pre-aid share") {
    NoiseParams p;
    p.nu_w = 0;
    p.nu_y = 0;
    for (int z : {1, 5, 20}) {
        CHECK(agent_cost(500, z, 0, p, 20) == Approx(500.0 * z / 21.0));
    }
    CHECK_THROWS_AS(agent_cost(500, 0, 0, p, 20), std::invalid_argument);
    CHECK_THROWS_AS(agent_cost(500, 21, 0, p, 20), std::invalid_argument);
}

TEST_CASE("optimal aiding time, frozen values at the default horizon") {
    const NoiseParams p = defaults();
    CHECK(optimal_aid_time(100, 10, p, 2000) == Approx(960.1364087245656).epsilon(1e-12));
    CHECK(optimal_aid_time(1000, 10, p, 2000) == Approx(510.2419757649109).epsilon(1e-12));
    CHECK(optimal_aid_time(100, 1000, p, 2000) == Approx(1142.8601865623464).epsilon(1e-12));

    CHECK(optimal_aid_step(100, 10, p, 2000) == 960);
    CHECK(optimal_aid_step(1000, 10, p, 2000) == 510);
    CHECK(optimal_aid_step(100, 1000, p, 2000) == 1143);

    CHECK(agent_cost(100, 960, 10, p, 2000) == Approx(558.757843300572).epsilon(1e-12));
    CHECK(agent_cost(1000, 510, 10, p, 2000) == Approx(889.5653153815249).epsilon(1e-12));
    CHECK(agent_cost(100, 1143, 1000, p, 2000) == Approx(805.9499451339576).epsilon(1e-12));
}

TEST_CASE("large initial variance pulls the optimum earlier, noisy aid pushes it later") {
    const NoiseParams p = defaults();
    const double base = optimal_aid_time(100, 10, p, 2000);
    CHECK(optimal_aid_time(1000, 10, p, 2000) < base);
    CHECK(optimal_aid_time(100, 1000, p, 2000) > base);
}

TEST_CASE("rounded optimum matches brute force over random configurations") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> horizon_dist(2, 300);
    for (int i = 0; i < 500; ++i) {
        NoiseParams p;
        p.nu_w = 0.01 + 3.0 * u(rng);
        p.nu_y = 100.0 * u(rng);
        const double nu0 = 3000.0 * u(rng);
        const double nu_cna = 200.0 * u(rng);
        const int horizon = horizon_dist(rng);
        const int got = optimal_aid_step(nu0, nu_cna, p, horizon);
        const int want = brute_argmin(nu0, nu_cna, p, horizon);
        CAPTURE(i);
        CAPTURE(nu0);
        CAPTURE(nu_cna);
        CAPTURE(horizon);
        if (got != want) {
            // Only an exact tie between neighbours is acceptable.
            const double a = testing::summed_agent_cost(nu0, got, nu_cna, p.nu_w, p.nu_y, horizon);
            const double b = testing::summed_agent_cost(nu0, want, nu_cna, p.nu_w, p.nu_y, horizon);
            CHECK(std::abs(got - want) == 1);
            CHECK(a == Approx(b).epsilon(1e-12));
        }
    }
}

TEST_CASE("cost is unimodal in the aiding step") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        NoiseParams p;
        p.nu_w = 0.01 + 3.0 * u(rng);
        p.nu_y = 100.0 * u(rng);
        const double nu0 = 3000.0 * u(rng);
        const double nu_cna = 200.0 * u(rng);
        const int horizon = 200;
        int sign_changes = 0;
        int prev_sign = 0;
        for (int z = 1; z < horizon; ++z) {
            const double d = testing::summed_agent_cost(nu0, z + 1, nu_cna, p.nu_w, p.nu_y, horizon) -
                             testing::summed_agent_cost(nu0, z, nu_cna, p.nu_w, p.nu_y, horizon);
            const int s = d > 1e-9 ? 1 : (d < -1e-9 ? -1 : 0);
            if (s != 0 && prev_sign != 0 && s != prev_sign) {
                ++sign_changes;
            }
            if (s != 0) {
                prev_sign = s;
            }
        }
        CAPTURE(i);
        CHECK(sign_changes <= 1);
    }
}

TEST_CASE("optimal aiding time needs process noise") {
    NoiseParams p;
    p.nu_w = 0.0;
    CHECK_THROWS_AS(optimal_aid_time(100, 10, p, 100), std::invalid_argument);
    CHECK(optimal_aid_step(100, 10, p, 100) == 1);
}

TEST_CASE("optimum clamps into the horizon") {
    NoiseParams p = defaults();
    CHECK(optimal_aid_step(1e7, 0, p, 50) >= 1);
    CHECK(optimal_aid_step(0, 1e7, p, 50) <= 50);
}

TEST_CASE("bounds on a single agent") {
    const NoiseParams p = defaults();
    CHECK(max_cost(2610, p, 2000) == Approx(3610.0));

    const int best = brute_argmin(300, p.nu_G, p, 400);
    CHECK(min_cost(300, p, 400) ==
          Approx(testing::summed_agent_cost(300, best, p.nu_G, p.nu_w, p.nu_y, 400)).epsilon(1e-10));
}

TEST_CASE("fleet bounds average over agents") {
    NoiseParams p;
    p.nu_w = 0;
    p.nu_y = 0;
    p.nu_G = 0;
    std::vector<AgentSpec> agents(3);
    agents[0].initial_variance = 0;
    agents[1].initial_variance = 2;
    agents[2].initial_variance = 4;
    const CostBounds b = cost_bounds(agents, p, 10);
    CHECK(b.upper == Approx(2.0));
    CHECK(b.lower == Approx(2.0 / 11.0));
    CHECK_THROWS_AS(cost_bounds(std::vector<AgentSpec>{}, p, 10), std::invalid_argument);
}

TEST_CASE("remaining lower bound is flat until the optimum, then increases") {
    const NoiseParams p = defaults();
    const int best = optimal_aid_step(800, p.nu_G, p, 2000);
    const double flat = min_cost_remaining(800, 0, p, 2000);
    CHECK(flat == Approx(min_cost(800, p, 2000)));
    for (int k = 1; k <= best; k += 37) {
        CHECK(min_cost_remaining(800, k, p, 2000) == flat);
    }
    double prev = flat;
    for (int k = best + 1; k <= 2000; k += 53) {
        const double v = min_cost_remaining(800, k, p, 2000);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(min_cost_remaining(800, 2001, p, 2000), std::invalid_argument);
}

TEST_CASE("scalar recursion equals the 2x2 covariance filter") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        NoiseParams p;
        p.nu_w = 2.0 * u(rng);
        p.nu_c = p.nu_w * u(rng);
        p.nu_y = 50.0 * u(rng);
        p.nu_G = 50.0 * u(rng);
        p.surface_steps = static_cast<int>(80 * u(rng));
        const int horizon = 400;
        const double nu0 = 3000.0 * u(rng);
        const int z = 1 + static_cast<int>(u(rng) * (horizon - 1));
        std::optional<int> surface;
        if (u(rng) < 0.5) {
            surface = static_cast<int>(u(rng) * (horizon - p.surface_steps));
        }
        const int aid[] = {z};
        const auto mats = matrix_kf_oracle(nu0, aid, surface, p, horizon);

        const double nu_cna = cna_variance_at(z, surface, p);
        const double post = posterior_variance(nu0 + z * p.nu_w, p.nu_y, nu_cna);
        const auto scalar = agent_variance_trace(nu0, z, post, p, horizon);
        CAPTURE(i);
        REQUIRE(mats.size() == scalar.values.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < mats.size(); ++k) {
            const auto& m = mats[k];
            worst = std::max(worst, std::abs(m(0, 0) - scalar.values[k]));
            worst = std::max(worst, std::abs(m(1, 1) - scalar.values[k]));
            worst = std::max(worst, std::abs(m(0, 1)) + std::abs(m(1, 0)));
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("covariance filter rejects a second aiding") {
    const int steps[] = {3, 5};
    CHECK_THROWS_AS(matrix_kf_oracle(10, steps, std::nullopt, defaults(), 10), std::invalid_argument);
}

TEST_CASE("noise parameter validation") {
    NoiseParams p;
    CHECK(validate(p));
    p.nu_c = 2.0;
    CHECK_FALSE(validate(p));
    p.nu_c = -1.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
}
