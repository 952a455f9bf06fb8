#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cna/kinematics.hpp"
#include "cna/scenario.hpp"
#include "cna/uncertainty.hpp"

namespace cna {

/// Where a task sequence first runs out of time.
struct Infeasibility {
    std::size_t task_index = 0;
    int overrun_steps = 0;
};

/// One executed task.
struct TaskEvent {
    Task task;
    int start_step = 0;
    int end_step = 0;        // aiding step Z, or S + M for a surfacing
    double tau = 0.0;        // continuous time to intercept (agent tasks)
    double heading = 0.0;    // CNA heading while transiting (agent tasks)
    double cna_variance = 0.0;
    double prior_variance = 0.0;
    double posterior_variance = 0.0;
};

/// Incremental execution of a task sequence without materializing the
/// trajectory or traces. The planners drive it directly; run_mission uses it
/// for the task-by-task logic.
class MissionState {
public:
    explicit MissionState(const Scenario& scenario);

    /// Executes `task` from the current position and step. Returns the event
    /// on success, or std::nullopt if the task cannot be completed within the
    /// mission limits (the state is then left unchanged).
    std::optional<TaskEvent> apply(Task task);

    /// Steps the task would overrun the mission limits by; 0 if it fits.
    int overrun(Task task) const;

    Vec2 position() const { return position_; }
    int step() const { return step_; }
    std::optional<int> surface_start() const { return surface_start_; }
    bool has_surfaced() const { return surface_start_.has_value(); }

    /// Sum over agents of J_i given the aidings applied so far.
    double cost_sum() const { return cost_sum_; }
    /// Mission cost J'.
    double cost() const;

    /// Intercept and aiding step for agent `id` from the current state,
    /// without applying it.
    struct Candidate {
        InterceptSolution intercept;
        int aid_step = 0;
        double cna_variance = 0.0;
    };
    Candidate plan_intercept(int agent_id) const;

    bool step_within_limits(int step) const;

private:
    const Scenario* scenario_;
    Vec2 position_;
    int step_ = 0;
    std::optional<int> surface_start_;
    double cost_sum_ = 0.0;
};

struct MissionResult {
    std::vector<Vec2> cna_path;  // steps 0..T
    std::vector<VarianceTrace> agent_traces;
    VarianceTrace cna_trace;
    std::vector<std::optional<int>> aiding_steps;  // indexed by agent id - 1
    std::optional<int> surface_start;
    std::vector<TaskEvent> events;
    std::vector<double> agent_costs;
    double cost = 0.0;    // J', mean scalar variance
    double cost_J = 0.0;  // J = 2 J', mean covariance trace
    int completion_step = 0;
    double completion_time = 0.0;
    std::optional<Infeasibility> infeasible;

    bool feasible() const { return !infeasible.has_value(); }
};

/// Executes the sequence into a CNA path and variance traces. Tasks after an
/// infeasible one are not executed; the report is returned in `infeasible`.
/// Throws std::invalid_argument on unknown or repeated task ids.
MissionResult run_mission(const Scenario& scenario, std::span<const Task> tasks);

/// J' from the assembled traces: mean over agents of the time-averaged variance.
double mission_cost(const MissionResult& result);

/// Checks ids are in range and not repeated.
void validate_tasks(const Scenario& scenario, std::span<const Task> tasks);

}  // namespace cna
