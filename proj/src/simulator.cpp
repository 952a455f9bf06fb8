#include "cna/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cna {

namespace {

int last_allowed_step(const Scenario& scenario) {
    const double by_time = std::floor(scenario.t_max / scenario.noise.dt + 1e-9);
    return static_cast<int>(std::min<double>(scenario.horizon, by_time));
}

}  // namespace

MissionState::MissionState(const Scenario& scenario)
    : scenario_(&scenario), position_(scenario.cna.start) {
    for (const AgentSpec& agent : scenario.agents) {
        cost_sum_ += max_cost(agent.initial_variance, scenario.noise, scenario.horizon);
    }
}

double MissionState::cost() const {
    return cost_sum_ / static_cast<double>(scenario_->agents.size());
}

bool MissionState::step_within_limits(int step) const {
    return step <= last_allowed_step(*scenario_);
}

MissionState::Candidate MissionState::plan_intercept(int agent_id) const {
    const Scenario& sc = *scenario_;
    const AgentSpec& agent = sc.agent(agent_id);
    const double dt = sc.noise.dt;
    Candidate c;
    c.intercept = solve_intercept(position_, sc.cna.speed, agent_position(agent, step_, dt),
                                  agent.heading, agent.speed);
    // Step 0 carries the prior; the earliest possible measurement is step 1.
    c.aid_step = std::max(discretize_arrival(c.intercept.tau, step_, dt), 1);
    c.cna_variance = cna_variance_at(c.aid_step, surface_start_, sc.noise);
    return c;
}

int MissionState::overrun(Task task) const {
    const int limit = last_allowed_step(*scenario_);
    int end;
    if (task.is_surface()) {
        end = step_ + scenario_->noise.surface_steps;
    } else {
        end = plan_intercept(task.id).aid_step;
    }
    return std::max(end - limit, 0);
}

std::optional<TaskEvent> MissionState::apply(Task task) {
    const Scenario& sc = *scenario_;
    TaskEvent ev;
    ev.task = task;
    ev.start_step = step_;
    if (task.is_surface()) {
        if (surface_start_) {
            throw std::logic_error("MissionState: surfacing scheduled twice");
        }
        const int end = step_ + sc.noise.surface_steps;
        if (!step_within_limits(end)) {
            return std::nullopt;
        }
        ev.end_step = end;
        ev.cna_variance = sc.noise.nu_G;
        surface_start_ = step_;
        step_ = end;
        return ev;
    }

    const Candidate c = plan_intercept(task.id);
    if (!step_within_limits(c.aid_step)) {
        return std::nullopt;
    }
    const AgentSpec& agent = sc.agent(task.id);
    ev.end_step = c.aid_step;
    ev.tau = c.intercept.tau;
    ev.heading = c.intercept.heading;
    ev.cna_variance = c.cna_variance;
    ev.prior_variance = agent.initial_variance + c.aid_step * sc.noise.nu_w;
    ev.posterior_variance = posterior_variance(ev.prior_variance, sc.noise.nu_y, c.cna_variance);

    const double aided = agent_cost(agent.initial_variance, c.aid_step, c.cna_variance, sc.noise,
                                    sc.horizon);
    cost_sum_ += aided - max_cost(agent.initial_variance, sc.noise, sc.horizon);
    position_ = agent_position(agent, c.aid_step, sc.noise.dt);
    step_ = c.aid_step;
    return ev;
}

void validate_tasks(const Scenario& scenario, std::span<const Task> tasks) {
    const int n = static_cast<int>(scenario.agents.size());
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (const Task task : tasks) {
        if (task.id < 0 || task.id > n) {
            throw std::invalid_argument("task id " + std::to_string(task.id) + " outside [0, " +
                                        std::to_string(n) + "]");
        }
        if (seen[static_cast<std::size_t>(task.id)]) {
            throw std::invalid_argument("task id " + std::to_string(task.id) + " repeated");
        }
        seen[static_cast<std::size_t>(task.id)] = true;
    }
}

MissionResult run_mission(const Scenario& scenario, std::span<const Task> tasks) {
    validate_tasks(scenario, tasks);
    const int horizon = scenario.horizon;
    const double dt = scenario.noise.dt;
    const std::size_t n = scenario.agents.size();

    MissionResult result;
    result.aiding_steps.assign(n, std::nullopt);
    std::vector<double> posteriors(n, 0.0);
    result.cna_path.assign(static_cast<std::size_t>(horizon) + 1, scenario.cna.start);

    MissionState state(scenario);
    for (std::size_t index = 0; index < tasks.size(); ++index) {
        const Task task = tasks[index];
        const Vec2 from = state.position();
        const int overrun = state.overrun(task);
        const std::optional<TaskEvent> ev = state.apply(task);
        if (!ev) {
            result.infeasible = Infeasibility{index, overrun};
            break;
        }
        const auto at = [&](int k) -> Vec2& { return result.cna_path[static_cast<std::size_t>(k)]; };
        if (task.is_surface()) {
            for (int k = ev->start_step; k <= ev->end_step; ++k) {
                at(k) = from;
            }
            result.surface_start = ev->start_step;
        } else {
            const AgentSpec& agent = scenario.agent(task.id);
            const Vec2 dir = unit_vector(ev->heading);
            const double leg = scenario.cna.speed * ev->tau;
            for (int k = ev->start_step + 1; k < ev->end_step; ++k) {
                const double run = std::min(scenario.cna.speed * (k - ev->start_step) * dt, leg);
                at(k) = from + run * dir;
            }
            // Shortened final step lands on the agent's nominal position.
            at(ev->end_step) = agent_position(agent, ev->end_step, dt);
            result.aiding_steps[static_cast<std::size_t>(task.id - 1)] = ev->end_step;
            posteriors[static_cast<std::size_t>(task.id - 1)] = ev->posterior_variance;
        }
        result.events.push_back(*ev);
    }
    result.completion_step = state.step();
    result.completion_time = state.step() * dt;
    for (int k = state.step() + 1; k <= horizon; ++k) {
        result.cna_path[static_cast<std::size_t>(k)] = state.position();
    }

    result.cna_trace = cna_variance_trace(result.surface_start, scenario.noise, horizon);
    result.agent_traces.reserve(n);
    result.agent_costs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AgentSpec& agent = scenario.agents[i];
        result.agent_traces.push_back(agent_variance_trace(
            agent.initial_variance, result.aiding_steps[i], posteriors[i], scenario.noise, horizon));
        result.agent_costs.push_back(result.agent_traces.back().mean());
    }
    result.cost = mission_cost(result);
    result.cost_J = 2.0 * result.cost;
    return result;
}

double mission_cost(const MissionResult& result) {
    if (result.agent_traces.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const VarianceTrace& trace : result.agent_traces) {
        sum += trace.mean();
    }
    return sum / static_cast<double>(result.agent_traces.size());
}

}  // namespace cna
