#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cna/kinematics.hpp"

namespace cna {

/// Process / measurement noise and surfacing parameters. Variances in LU^2.
struct NoiseParams {
    double nu_w = 1.0;   // agent process variance per step
    double nu_c = 0.1;   // CNA process variance per step
    double nu_y = 10.0;  // constant part of the aiding measurement variance
    double nu_G = 10.0;  // CNA variance after a GPS fix (and at k = 0)
    int surface_steps = 60;
    double dt = 1.0;

    friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

/// Throws std::invalid_argument on negative variances, M < 0 or dt <= 0.
/// Returns false (without throwing) when nu_c > nu_w, which is allowed but
/// unusual for a navigation aid.
bool validate(const NoiseParams& params);

/// Scalar variance per timestep, index k = 0..T.
struct VarianceTrace {
    std::vector<double> values;

    double mean() const;
    std::size_t size() const { return values.size(); }
    double operator[](std::size_t k) const { return values[k]; }
};

/// Kalman posterior variance after a single position fix:
/// (1 - prior / (prior + nu_y + nu_cna)) * prior. Returns 0 when all inputs are 0.
double posterior_variance(double nu_prior, double nu_y, double nu_cna);

/// Agent variance with an optional single aiding at `aid_step`, where the
/// variance jumps to `nu_post`; otherwise grows by nu_w per step.
VarianceTrace agent_variance_trace(double nu0, std::optional<int> aid_step, double nu_post,
                                   const NoiseParams& params, int horizon);

/// CNA variance at step k when surfacing (if any) starts at `surface_start`.
double cna_variance_at(int k, std::optional<int> surface_start, const NoiseParams& params);

VarianceTrace cna_variance_trace(std::optional<int> surface_start, const NoiseParams& params,
                                 int horizon);

/// Time-averaged agent variance J_i when aided at step Z with CNA variance
/// `nu_cna_at_aid` at that moment. Closed form (cubic in Z).
double agent_cost(double nu0, int aid_step, double nu_cna_at_aid, const NoiseParams& params,
                  int horizon);

/// Continuous stationary point of J_i(Z). Requires nu_w > 0.
double optimal_aid_time(double nu0, double nu_cna, const NoiseParams& params, int horizon);

/// Integer minimizer of J_i over {1..T}: the cheaper of floor/ceil of the
/// continuous optimum (clamped to the horizon, ties toward the earlier step).
/// With nu_w = 0 the cost is non-decreasing in Z and step 1 is returned.
int optimal_aid_step(double nu0, double nu_cna, const NoiseParams& params, int horizon);

/// J_i with no aiding at all: nu0 + nu_w * T / 2.
double max_cost(double nu0, const NoiseParams& params, int horizon);

/// Best achievable J_i (CNA at nu_G, aided at its optimal step).
double min_cost(double nu0, const NoiseParams& params, int horizon);

/// Lower bound on J_i for an agent not yet aided at step k.
double min_cost_remaining(double nu0, int k, const NoiseParams& params, int horizon);

struct CostBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Bounds on the mission cost J' (averaged over agents).
CostBounds cost_bounds(std::span<const AgentSpec> agents, const NoiseParams& params, int horizon);

using CovMatrix2 = Eigen::Matrix2d;

/// Full 2x2 Kalman covariance recursion for one agent, used to cross-check
/// the scalar recursions. The CNA covariance is propagated alongside and
/// feeds the measurement noise R_k = nu_y I + P^c_{k|k}.
///
/// At most one aiding step may be given; throws std::invalid_argument otherwise.
std::vector<CovMatrix2> matrix_kf_oracle(double nu0, std::span<const int> aid_steps,
                                         std::optional<int> surface_start,
                                         const NoiseParams& params, int horizon);

}  // namespace cna
