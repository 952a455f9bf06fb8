#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cna/scenario.hpp"
#include "cna/simulator.hpp"

namespace cna {

/// Weights on the three greedy reward terms: relative cost reduction,
/// timing sub-optimality penalty and normalized transit time.
struct RewardWeights {
    double alpha = 1.0;
    double beta = 0.5;
    double gamma = 0.5;

    static constexpr RewardWeights G1() { return {1.0, 0.0, 0.0}; }
    static constexpr RewardWeights G2() { return {0.0, 1.0, 0.0}; }
    static constexpr RewardWeights G3() { return {0.0, 0.0, 1.0}; }
    static constexpr RewardWeights G4() { return {1.0, 0.5, 0.5}; }

    friend constexpr bool operator==(const RewardWeights&, const RewardWeights&) = default;
};

void validate(const RewardWeights& weights);

struct PlanResult {
    std::vector<Task> sequence;
    double completion_time = 0.0;
    bool feasible = true;
    double cost = 0.0;    // J'
    double cost_J = 0.0;  // 2 J'
    std::vector<double> per_agent_costs;
    std::vector<std::optional<int>> aiding_steps;  // indexed by agent id - 1
    std::optional<int> surface_start;
    std::optional<Infeasibility> infeasible;
};

/// Full re-simulation of `tasks`. Infeasible sequences come back with
/// feasible = false and the violating task index.
PlanResult evaluate_sequence(const Scenario& scenario, std::span<const Task> tasks);

/// J' of a sequence via the incremental mission state, or std::nullopt if the
/// sequence does not fit the mission limits.
std::optional<double> sequence_cost(const Scenario& scenario, std::span<const Task> tasks);

/// Reward breakdown for aiding one candidate agent next.
struct CandidateScore {
    int agent_id = 0;
    double tau = 0.0;
    int aid_step = 0;
    double cost = 0.0;  // J_i at the candidate aiding step
    double delta_max = 0.0;
    double delta_opt = 0.0;
    double time_term = 0.0;
    double reward = 0.0;
    bool feasible = true;
};

/// Scores every agent in `remaining` from the given mission state.
std::vector<CandidateScore> score_candidates(const Scenario& scenario, const MissionState& state,
                                             std::span<const int> remaining,
                                             const RewardWeights& weights);

/// Agent order chosen by the reward loop, before the surfacing post-pass.
std::vector<Task> greedy_select(const Scenario& scenario, const RewardWeights& weights,
                                int max_tasks);

/// Greedy sequence with surfacing inserted (D = N + 1) or substituted for
/// one agent (D <= N) wherever that lowers the cost.
PlanResult greedy_plan(const Scenario& scenario, const RewardWeights& weights, int max_tasks);
PlanResult greedy_plan(const Scenario& scenario, const RewardWeights& weights);

/// Raised when exhaustive enumeration would exceed its budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint64_t required, std::uint64_t budget);
    std::uint64_t required() const { return required_; }
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t required_;
    std::uint64_t budget_;
};

/// Number of ordered duplicate-free task sequences of length 0..D over N + 1
/// tasks (including the empty one). Saturates at UINT64_MAX.
std::uint64_t sequence_count(int agent_count, int max_tasks);

constexpr std::uint64_t kDefaultExhaustiveBudget = 200'000'000;

struct ExhaustiveOptions {
    std::uint64_t budget = kDefaultExhaustiveBudget;
    unsigned workers = 1;
};

struct ExhaustiveResult {
    PlanResult best;
    PlanResult worst;
    std::uint64_t evaluated = 0;  // feasible sequences visited
};

/// Best and worst feasible sequences over every ordered duplicate-free
/// selection of at most D tasks. Infeasible prefixes are not extended.
/// Ties go to the lexicographically smallest sequence.
ExhaustiveResult exhaustive_plan(const Scenario& scenario, int max_tasks,
                                 const ExhaustiveOptions& options = {});
ExhaustiveResult exhaustive_plan(const Scenario& scenario, const ExhaustiveOptions& options = {});

}  // namespace cna
