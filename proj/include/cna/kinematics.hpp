#pragma once

#include <cmath>
#include <vector>

namespace cna {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;

    double norm() const { return std::hypot(x, y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

struct AgentSpec {
    int id = 1;
    Vec2 start;
    double heading = 0.0;  // radians
    double speed = 0.5;
    double initial_variance = 0.0;

    friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct CnaSpec {
    Vec2 start;
    double speed = 1.0;

    friend bool operator==(const CnaSpec&, const CnaSpec&) = default;
};

/// Constant-heading intercept of a moving agent.
///
/// `beta_agent`, `beta_cna` and `apex_angle` are the interior angles of the
/// CNA / agent / intercept-point triangle at the agent, the CNA and the
/// intercept point respectively. On the collinear branches the triangle is
/// degenerate and the angles are reported as (0, 0, pi) for a head-on
/// approach and (pi, 0, 0) for a tail chase.
struct InterceptSolution {
    double heading = 0.0;
    double tau = 0.0;
    Vec2 point;
    double beta_agent = 0.0;
    double beta_cna = 0.0;
    double apex_angle = 0.0;
    double initial_distance = 0.0;

    enum class Branch { Collocated, HeadOn, TailChase, General };
    Branch branch = Branch::General;
};

/// Angular tolerance used to detect the collinear (head-on / tail-chase) cases.
constexpr double kDegenerateAngleTol = 1e-9;

/// Minimum-time constant-heading intercept of an agent moving in a straight
/// line at `agent_speed` along `agent_heading`.
///
/// Throws std::invalid_argument if `cna_speed <= agent_speed` or any input is
/// not finite.
InterceptSolution solve_intercept(Vec2 cna_pos, double cna_speed, Vec2 agent_pos,
                                  double agent_heading, double agent_speed);

/// Nominal position of an agent after `step` timesteps of length `dt`.
Vec2 agent_position(const AgentSpec& spec, long step, double dt);

/// Nominal straight-line track, positions for steps 0..horizon inclusive.
std::vector<Vec2> propagate_track(const AgentSpec& spec, int horizon, double dt);

/// Maps a continuous time-to-intercept onto the first timestep at or after
/// arrival: current_step + ceil(tau / dt).
int discretize_arrival(double tau, int current_step, double dt);

void validate(const AgentSpec& spec);
void validate(const CnaSpec& spec);

}  // namespace cna
