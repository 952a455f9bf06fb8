#include "cna/kinematics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cna {

namespace {

// Slack on tau/dt before taking the ceiling, so that arrival times which are
// integral up to round-off do not spill into the next step.
constexpr double kStepRoundingSlack = 1e-9;

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument(std::string("solve_intercept: non-finite ") + what);
    }
}

}  // namespace

double wrap_angle(double angle) {
    double wrapped = std::remainder(angle, 2.0 * kPi);
    if (wrapped <= -kPi) {
        wrapped += 2.0 * kPi;
    }
    return wrapped;
}

InterceptSolution solve_intercept(Vec2 cna_pos, double cna_speed, Vec2 agent_pos,
                                  double agent_heading, double agent_speed) {
    require_finite(cna_pos.x, "CNA position");
    require_finite(cna_pos.y, "CNA position");
    require_finite(agent_pos.x, "agent position");
    require_finite(agent_pos.y, "agent position");
    require_finite(agent_heading, "agent heading");
    require_finite(cna_speed, "CNA speed");
    require_finite(agent_speed, "agent speed");
    if (agent_speed < 0.0) {
        throw std::invalid_argument("solve_intercept: negative agent speed");
    }
    if (!(cna_speed > agent_speed)) {
        throw std::invalid_argument(
            "solve_intercept: CNA speed must exceed agent speed for a guaranteed intercept");
    }

    InterceptSolution sol;
    const Vec2 offset = agent_pos - cna_pos;
    const double d = offset.norm();
    sol.initial_distance = d;

    if (d == 0.0) {
        sol.branch = InterceptSolution::Branch::Collocated;
        sol.heading = wrap_angle(agent_heading);
        sol.tau = 0.0;
        sol.point = agent_pos;
        return sol;
    }

    const double bearing = std::atan2(offset.y, offset.x);
    // Signed angle of the agent's course relative to the line of sight. The
    // interior angle at the agent is measured against the reversed line of
    // sight, so it is pi minus the unsigned relative course.
    const double relative_course = wrap_angle(agent_heading - bearing);
    const double away_angle = std::abs(relative_course);           // pi - beta_agent
    const double beta_agent = std::abs(wrap_angle(relative_course - kPi));
    const double eta = agent_speed / cna_speed;

    if (beta_agent < kDegenerateAngleTol) {
        sol.branch = InterceptSolution::Branch::HeadOn;
        sol.heading = wrap_angle(bearing);
        sol.tau = d / (agent_speed + cna_speed);
        sol.beta_agent = 0.0;
        sol.beta_cna = 0.0;
        sol.apex_angle = kPi;
    } else if (away_angle < kDegenerateAngleTol) {
        sol.branch = InterceptSolution::Branch::TailChase;
        sol.heading = wrap_angle(agent_heading);
        sol.tau = d / (cna_speed - agent_speed);
        sol.beta_agent = kPi;
        sol.beta_cna = 0.0;
        sol.apex_angle = 0.0;
    } else {
        sol.branch = InterceptSolution::Branch::General;
        // sin(beta) == sin(pi - beta); take it from the smaller angle to keep
        // full relative precision near either collinear limit.
        const double sin_beta_cna = eta * std::sin(std::min(beta_agent, away_angle));
        const double beta_cna = std::asin(sin_beta_cna);
        // alpha = pi - beta_agent - beta_cna, formed from the complementary
        // angle so that it stays accurate near the tail-chase limit.
        const double apex = away_angle - beta_cna;
        // Sign of z-component of (line of sight x agent course); ties go to +1.
        const double cross_z = std::sin(relative_course);
        const double side = cross_z < 0.0 ? -1.0 : 1.0;

        sol.beta_agent = beta_agent;
        sol.beta_cna = beta_cna;
        sol.apex_angle = apex;
        sol.heading = wrap_angle(bearing + side * beta_cna);
        sol.tau = d * sin_beta_cna / (agent_speed * std::sin(apex));
    }
    sol.point = agent_pos + (sol.tau * agent_speed) * unit_vector(agent_heading);
    return sol;
}

Vec2 agent_position(const AgentSpec& spec, long step, double dt) {
    const double travelled = static_cast<double>(step) * dt * spec.speed;
    return spec.start + travelled * unit_vector(spec.heading);
}

std::vector<Vec2> propagate_track(const AgentSpec& spec, int horizon, double dt) {
    if (horizon < 0) {
        throw std::invalid_argument("propagate_track: negative horizon");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("propagate_track: dt must be positive");
    }
    std::vector<Vec2> track;
    track.reserve(static_cast<std::size_t>(horizon) + 1);
    for (int k = 0; k <= horizon; ++k) {
        track.push_back(agent_position(spec, k, dt));
    }
    return track;
}

int discretize_arrival(double tau, int current_step, double dt) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("discretize_arrival: tau must be finite and non-negative");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("discretize_arrival: dt must be positive");
    }
    const double steps = std::ceil(tau / dt - kStepRoundingSlack);
    if (steps > 1e9) {
        throw std::overflow_error("discretize_arrival: arrival step out of range");
    }
    return current_step + static_cast<int>(std::max(steps, 0.0));
}

void validate(const AgentSpec& spec) {
    if (spec.id < 1) {
        throw std::invalid_argument("agent id must be positive");
    }
    if (!spec.start.finite() || !std::isfinite(spec.heading)) {
        throw std::invalid_argument("agent " + std::to_string(spec.id) + ": non-finite pose");
    }
    if (!(spec.speed > 0.0) || !std::isfinite(spec.speed)) {
        throw std::invalid_argument("agent " + std::to_string(spec.id) + ": speed must be positive");
    }
    if (!(spec.initial_variance >= 0.0) || !std::isfinite(spec.initial_variance)) {
        throw std::invalid_argument("agent " + std::to_string(spec.id) +
                                    ": initial variance must be non-negative");
    }
}

void validate(const CnaSpec& spec) {
    if (!spec.start.finite()) {
        throw std::invalid_argument("CNA start position is not finite");
    }
    if (!(spec.speed > 0.0) || !std::isfinite(spec.speed)) {
        throw std::invalid_argument("CNA speed must be positive");
    }
}

}  // namespace cna
