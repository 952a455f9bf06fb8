#include "cna/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

namespace cna {

namespace {

void check_horizon(int horizon, const char* where) {
    if (horizon < 0) {
        throw std::invalid_argument(std::string(where) + ": negative horizon");
    }
}

void check_variance(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite and non-negative");
    }
}

}  // namespace

bool validate(const NoiseParams& params) {
    check_variance(params.nu_w, "nu_w");
    check_variance(params.nu_c, "nu_c");
    check_variance(params.nu_y, "nu_y");
    check_variance(params.nu_G, "nu_G");
    if (params.surface_steps < 0) {
        throw std::invalid_argument("surface_steps must be non-negative");
    }
    if (!(params.dt > 0.0) || !std::isfinite(params.dt)) {
        throw std::invalid_argument("dt must be positive");
    }
    return params.nu_c <= params.nu_w;
}

double VarianceTrace::mean() const {
    if (values.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double posterior_variance(double nu_prior, double nu_y, double nu_cna) {
    check_variance(nu_prior, "prior variance");
    check_variance(nu_y, "nu_y");
    check_variance(nu_cna, "CNA variance");
    const double r = nu_y + nu_cna;
    const double s = r + nu_prior;
    if (s == 0.0) {
        return 0.0;
    }
    const double gain = nu_prior / s;
    return (1.0 - gain) * nu_prior;
}

VarianceTrace agent_variance_trace(double nu0, std::optional<int> aid_step, double nu_post,
                                   const NoiseParams& params, int horizon) {
    check_horizon(horizon, "agent_variance_trace");
    check_variance(nu0, "initial variance");
    check_variance(nu_post, "posterior variance");
    if (aid_step && (*aid_step < 0 || *aid_step > horizon)) {
        throw std::invalid_argument("agent_variance_trace: aiding step " +
                                    std::to_string(*aid_step) + " outside [0, " +
                                    std::to_string(horizon) + "]");
    }
    VarianceTrace trace;
    trace.values.resize(static_cast<std::size_t>(horizon) + 1);
    for (int k = 0; k <= horizon; ++k) {
        double v;
        if (!aid_step || k < *aid_step) {
            v = nu0 + k * params.nu_w;
        } else {
            v = nu_post + (k - *aid_step) * params.nu_w;
        }
        trace.values[static_cast<std::size_t>(k)] = v;
    }
    return trace;
}

double cna_variance_at(int k, std::optional<int> surface_start, const NoiseParams& params) {
    if (surface_start) {
        const int reset = *surface_start + params.surface_steps;
        if (k >= reset) {
            return params.nu_G + (k - reset) * params.nu_c;
        }
    }
    return params.nu_G + k * params.nu_c;
}

VarianceTrace cna_variance_trace(std::optional<int> surface_start, const NoiseParams& params,
                                 int horizon) {
    check_horizon(horizon, "cna_variance_trace");
    if (surface_start) {
        if (*surface_start < 0 || *surface_start + params.surface_steps > horizon) {
            throw std::invalid_argument("cna_variance_trace: surfacing must complete within the horizon");
        }
    }
    VarianceTrace trace;
    trace.values.resize(static_cast<std::size_t>(horizon) + 1);
    for (int k = 0; k <= horizon; ++k) {
        trace.values[static_cast<std::size_t>(k)] = cna_variance_at(k, surface_start, params);
    }
    return trace;
}

double agent_cost(double nu0, int aid_step, double nu_cna_at_aid, const NoiseParams& params,
                  int horizon) {
    if (aid_step < 1 || aid_step > horizon) {
        throw std::invalid_argument("agent_cost: aiding step " + std::to_string(aid_step) +
                                    " outside [1, " + std::to_string(horizon) + "]");
    }
    const double z = aid_step;
    const double t1 = horizon + 1.0;
    const double nu_w = params.nu_w;
    const double post = posterior_variance(nu0 + z * nu_w, params.nu_y, nu_cna_at_aid);
    return nu_w * horizon / 2.0 +
           (z * nu0 + (post - z * nu_w) * t1 - post * z + nu_w * z * z) / t1;
}

double optimal_aid_time(double nu0, double nu_cna, const NoiseParams& params, int horizon) {
    if (!(params.nu_w > 0.0)) {
        throw std::invalid_argument(
            "optimal_aid_time: nu_w must be positive (with no process noise the cost is monotone in Z)");
    }
    check_variance(nu0, "initial variance");
    check_variance(nu_cna, "CNA variance");
    const double nu_w = params.nu_w;
    const double zstar_beta = params.nu_y + nu_cna;
    const double base = horizon * nu_w + nu0 + nu_w;
    const double zstar_alpha = std::sqrt((base + zstar_beta) * (base + 9.0 * zstar_beta));
    return (zstar_alpha + (horizon + 1.0) * nu_w - 3.0 * nu0 - 3.0 * zstar_beta) / (4.0 * nu_w);
}

int optimal_aid_step(double nu0, double nu_cna, const NoiseParams& params, int horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("optimal_aid_step: horizon must be at least one step");
    }
    if (params.nu_w == 0.0) {
        return 1;
    }
    const double zstar = optimal_aid_time(nu0, nu_cna, params, horizon);
    const double clamped = std::clamp(zstar, 1.0, static_cast<double>(horizon));
    const int lo = static_cast<int>(std::floor(clamped));
    const int hi = static_cast<int>(std::ceil(clamped));
    if (lo == hi) {
        return lo;
    }
    const double cost_lo = agent_cost(nu0, lo, nu_cna, params, horizon);
    const double cost_hi = agent_cost(nu0, hi, nu_cna, params, horizon);
    return cost_hi < cost_lo ? hi : lo;
}

double max_cost(double nu0, const NoiseParams& params, int horizon) {
    check_horizon(horizon, "max_cost");
    return nu0 + params.nu_w * horizon / 2.0;
}

double min_cost(double nu0, const NoiseParams& params, int horizon) {
    if (horizon < 1) {
        return max_cost(nu0, params, horizon);
    }
    const int best = optimal_aid_step(nu0, params.nu_G, params, horizon);
    return agent_cost(nu0, best, params.nu_G, params, horizon);
}

double min_cost_remaining(double nu0, int k, const NoiseParams& params, int horizon) {
    if (k < 0 || k > horizon) {
        throw std::invalid_argument("min_cost_remaining: step outside [0, T]");
    }
    if (horizon < 1) {
        return max_cost(nu0, params, horizon);
    }
    const int best = optimal_aid_step(nu0, params.nu_G, params, horizon);
    const int step = std::max(k, best);
    return agent_cost(nu0, step, params.nu_G, params, horizon);
}

CostBounds cost_bounds(std::span<const AgentSpec> agents, const NoiseParams& params, int horizon) {
    if (agents.empty()) {
        throw std::invalid_argument("cost_bounds: empty agent list");
    }
    CostBounds bounds;
    for (const AgentSpec& agent : agents) {
        bounds.lower += min_cost(agent.initial_variance, params, horizon);
        bounds.upper += max_cost(agent.initial_variance, params, horizon);
    }
    const double n = static_cast<double>(agents.size());
    bounds.lower /= n;
    bounds.upper /= n;
    return bounds;
}

std::vector<CovMatrix2> matrix_kf_oracle(double nu0, std::span<const int> aid_steps,
                                         std::optional<int> surface_start,
                                         const NoiseParams& params, int horizon) {
    check_horizon(horizon, "matrix_kf_oracle");
    if (aid_steps.size() > 1) {
        throw std::invalid_argument("matrix_kf_oracle: an agent receives at most one aiding measurement");
    }
    // -1 marks "never aided".
    const int aid = aid_steps.empty() ? -1 : aid_steps.front();
    if (!aid_steps.empty() && (aid < 1 || aid > horizon)) {
        throw std::invalid_argument("matrix_kf_oracle: aiding step outside [1, T]");
    }
    if (surface_start && (*surface_start < 0 || *surface_start + params.surface_steps > horizon)) {
        throw std::invalid_argument("matrix_kf_oracle: surfacing must complete within the horizon");
    }

    const Eigen::Matrix2d identity = Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d F = identity;
    const Eigen::Matrix2d H = identity;
    const Eigen::Matrix2d Q = params.nu_w * identity;
    const Eigen::Matrix2d Qc = params.nu_c * identity;

    Eigen::Matrix2d P = nu0 * identity;
    Eigen::Matrix2d Pc = params.nu_G * identity;

    std::vector<CovMatrix2> out;
    out.reserve(static_cast<std::size_t>(horizon) + 1);
    out.push_back(P);
    for (int k = 1; k <= horizon; ++k) {
        Pc = F * Pc * F.transpose() + Qc;
        if (surface_start && k == *surface_start + params.surface_steps) {
            Pc = params.nu_G * identity;
        }

        const Eigen::Matrix2d P_pred = F * P * F.transpose() + Q;
        if (k == aid) {
            const Eigen::Matrix2d R = params.nu_y * identity + Pc;
            const Eigen::Matrix2d S = R + H * P_pred * H.transpose();
            Eigen::Matrix2d K = Eigen::Matrix2d::Zero();
            if (S.determinant() != 0.0) {
                K = P_pred * H.transpose() * S.inverse();
            }
            P = (identity - K * H) * P_pred;
        } else {
            P = P_pred;
        }
        out.push_back(P);
    }
    return out;
}

}  // namespace cna
