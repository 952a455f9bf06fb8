// Independent reference computations shared by the test binaries. None of
// these call into the code they are used to check.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "cna/kinematics.hpp"

namespace cna::testing {

inline Vec2 cna_position_after(const InterceptSolution& s, Vec2 cna_start, double cna_speed) {
    return cna_start + (cna_speed * s.tau) * unit_vector(s.heading);
}

// |a(t) - c| - v_c t: positive while the agent is outside the CNA's reachable disc.
inline double reach_gap(Vec2 c, double vc, Vec2 a, double heading, double va, double t) {
    const Vec2 at = a + (va * t) * unit_vector(heading);
    return distance(at, c) - vc * t;
}

// Earliest agent arrival time at any point where a straight CNA ray on a
// heading grid crosses the agent track and the CNA gets there first.
inline double grid_earliest_intercept(Vec2 c, double vc, Vec2 a, double heading, double va,
                                      double grid) {
    const Vec2 u = unit_vector(heading);
    const Vec2 r = a - c;
    double best = std::numeric_limits<double>::infinity();
    for (double h = 0.0; h < 2.0 * kPi; h += grid) {
        const Vec2 e = unit_vector(h);
        // c + s e = a + q u  ->  s e - q u = r
        const double det = -(e.x * u.y - e.y * u.x);
        if (std::abs(det) < 1e-12) {
            continue;
        }
        const double s = (r.x * -u.y - r.y * -u.x) / det;
        const double q = (e.x * r.y - e.y * r.x) / det;
        if (s < 0.0 || q < 0.0) {
            continue;
        }
        const double t_agent = q / va;
        if (s / vc <= t_agent * (1.0 + 1e-12)) {
            best = std::min(best, t_agent);
        }
    }
    return best;
}

// Scalar Kalman update written in information form.
inline double info_form_posterior(double prior, double nu_y, double nu_cna) {
    const double r = nu_y + nu_cna;
    if (prior == 0.0 || r == 0.0) {
        return 0.0;
    }
    return 1.0 / (1.0 / prior + 1.0 / r);
}

// Time-averaged agent variance by direct step-by-step propagation.
inline double summed_agent_cost(double nu0, int aid_step, double nu_cna, double nu_w, double nu_y,
                                int horizon) {
    double v = nu0;
    double sum = v;
    for (int k = 1; k <= horizon; ++k) {
        v += nu_w;
        if (k == aid_step) {
            v = info_form_posterior(v, nu_y, nu_cna);
        }
        sum += v;
    }
    return sum / (horizon + 1.0);
}

}  // namespace cna::testing
