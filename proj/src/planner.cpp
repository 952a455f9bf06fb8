#include "cna/planner.hpp"

#include <algorithm>
#include <cmath>

namespace cna {

void validate(const RewardWeights& w) {
    for (double v : {w.alpha, w.beta, w.gamma}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("reward weights must be finite and non-negative");
        }
    }
    if (w.alpha == 0.0 && w.beta == 0.0 && w.gamma == 0.0) {
        throw std::invalid_argument("reward weights must not all be zero");
    }
}

PlanResult evaluate_sequence(const Scenario& scenario, std::span<const Task> tasks) {
    const MissionResult mission = run_mission(scenario, tasks);
    PlanResult plan;
    plan.sequence.assign(tasks.begin(), tasks.end());
    plan.completion_time = mission.completion_time;
    plan.feasible = mission.feasible();
    plan.infeasible = mission.infeasible;
    plan.cost = mission.cost;
    plan.cost_J = mission.cost_J;
    plan.per_agent_costs = mission.agent_costs;
    plan.aiding_steps = mission.aiding_steps;
    plan.surface_start = mission.surface_start;
    return plan;
}

std::optional<double> sequence_cost(const Scenario& scenario, std::span<const Task> tasks) {
    MissionState state(scenario);
    for (const Task task : tasks) {
        if (!state.apply(task)) {
            return std::nullopt;
        }
    }
    return state.cost();
}

std::vector<CandidateScore> score_candidates(const Scenario& scenario, const MissionState& state,
                                             std::span<const int> remaining,
                                             const RewardWeights& weights) {
    const NoiseParams& noise = scenario.noise;
    const int horizon = scenario.horizon;
    std::vector<CandidateScore> scores;
    scores.reserve(remaining.size());
    for (const int id : remaining) {
        const AgentSpec& agent = scenario.agent(id);
        const MissionState::Candidate c = state.plan_intercept(id);
        CandidateScore s;
        s.agent_id = id;
        s.tau = c.intercept.tau;
        s.aid_step = c.aid_step;
        s.feasible = state.step_within_limits(c.aid_step);
        if (s.feasible) {
            const double nu0 = agent.initial_variance;
            const double worst = max_cost(nu0, noise, horizon);
            const double floor_now = min_cost_remaining(nu0, std::min(state.step(), horizon), noise,
                                                        horizon);
            s.cost = agent_cost(nu0, c.aid_step, c.cna_variance, noise, horizon);
            s.delta_max = worst > 0.0 ? (worst - s.cost) / worst : 0.0;
            s.delta_opt = s.cost > 0.0 ? (s.cost - floor_now) / s.cost : 0.0;
            s.time_term = scenario.t_max > 0.0 ? s.tau / scenario.t_max : 0.0;
            s.reward = weights.alpha * s.delta_max - weights.beta * s.delta_opt -
                       weights.gamma * s.time_term;
        }
        scores.push_back(s);
    }
    return scores;
}

std::vector<Task> greedy_select(const Scenario& scenario, const RewardWeights& weights,
                                int max_tasks) {
    validate(scenario);
    validate(weights);
    const int n = static_cast<int>(scenario.agent_count());
    if (max_tasks < 0 || max_tasks > n + 1) {
        throw std::invalid_argument("D must lie in [0, N + 1]");
    }
    std::vector<int> remaining(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        remaining[static_cast<std::size_t>(i)] = i + 1;
    }
    const std::size_t limit = static_cast<std::size_t>(std::min(max_tasks, n));

    MissionState state(scenario);
    std::vector<Task> selected;
    while (selected.size() < limit && !remaining.empty()) {
        const std::vector<CandidateScore> scores =
            score_candidates(scenario, state, remaining, weights);
        const CandidateScore* pick = nullptr;
        std::vector<int> still_open;
        for (const CandidateScore& s : scores) {
            if (!s.feasible) {
                continue;
            }
            still_open.push_back(s.agent_id);
            // `remaining` is kept in ascending id order, so strict > keeps the lowest id on ties.
            if (pick == nullptr || s.reward > pick->reward) {
                pick = &s;
            }
        }
        if (pick == nullptr) {
            break;
        }
        state.apply(Task::aid(pick->agent_id));
        selected.push_back(Task::aid(pick->agent_id));
        std::erase(still_open, pick->agent_id);
        remaining = std::move(still_open);
    }
    return selected;
}

PlanResult greedy_plan(const Scenario& scenario, const RewardWeights& weights, int max_tasks) {
    const std::vector<Task> base = greedy_select(scenario, weights, max_tasks);
    const int n = static_cast<int>(scenario.agent_count());

    std::vector<Task> best = base;
    double best_cost = sequence_cost(scenario, base).value();
    const auto consider = [&](const std::vector<Task>& candidate) {
        const std::optional<double> cost = sequence_cost(scenario, candidate);
        if (cost && *cost < best_cost) {
            best_cost = *cost;
            best = candidate;
        }
    };

    if (max_tasks == n + 1) {
        for (std::size_t pos = 0; pos <= base.size(); ++pos) {
            std::vector<Task> candidate = base;
            candidate.insert(candidate.begin() + static_cast<std::ptrdiff_t>(pos), Task::surface());
            consider(candidate);
        }
    } else {
        for (std::size_t pos = 0; pos < base.size(); ++pos) {
            std::vector<Task> candidate = base;
            candidate[pos] = Task::surface();
            consider(candidate);
        }
    }
    return evaluate_sequence(scenario, best);
}

PlanResult greedy_plan(const Scenario& scenario, const RewardWeights& weights) {
    return greedy_plan(scenario, weights, scenario.max_tasks);
}

}  // namespace cna
