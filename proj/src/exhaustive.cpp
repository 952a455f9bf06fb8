#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "cna/planner.hpp"

namespace cna {

namespace {

struct Extremes {
    double best_cost = std::numeric_limits<double>::infinity();
    double worst_cost = -std::numeric_limits<double>::infinity();
    std::vector<Task> best;
    std::vector<Task> worst;
    std::uint64_t visited = 0;

    // Callers offer sequences in lexicographic order; strict comparisons keep
    // the first (smallest) sequence on ties.
    void offer(double cost, const std::vector<Task>& seq) {
        ++visited;
        if (cost < best_cost) {
            best_cost = cost;
            best = seq;
        }
        if (cost > worst_cost) {
            worst_cost = cost;
            worst = seq;
        }
    }

    void merge(const Extremes& other) {
        visited += other.visited;
        if (other.best_cost < best_cost) {
            best_cost = other.best_cost;
            best = other.best;
        }
        if (other.worst_cost > worst_cost) {
            worst_cost = other.worst_cost;
            worst = other.worst;
        }
    }
};

class Enumerator {
public:
    Enumerator(const Scenario& scenario, int max_tasks)
        : scenario_(scenario),
          task_count_(static_cast<int>(scenario.agent_count()) + 1),
          max_depth_(static_cast<std::size_t>(max_tasks)),
          used_(static_cast<std::size_t>(task_count_), false) {}

    /// Enumerates every feasible sequence beginning with `first`.
    Extremes run_branch(Task first) {
        Extremes out;
        MissionState state(scenario_);
        if (!state.apply(first)) {
            return out;
        }
        prefix_.assign(1, first);
        used_.assign(used_.size(), false);
        used_[static_cast<std::size_t>(first.id)] = true;
        descend(state, out);
        return out;
    }

private:
    void descend(const MissionState& state, Extremes& out) {
        out.offer(state.cost_sum(), prefix_);
        if (prefix_.size() >= max_depth_) {
            return;
        }
        for (int id = 0; id < task_count_; ++id) {
            if (used_[static_cast<std::size_t>(id)]) {
                continue;
            }
            MissionState next = state;
            if (!next.apply(Task{id})) {
                continue;
            }
            used_[static_cast<std::size_t>(id)] = true;
            prefix_.push_back(Task{id});
            descend(next, out);
            prefix_.pop_back();
            used_[static_cast<std::size_t>(id)] = false;
        }
    }

    const Scenario& scenario_;
    int task_count_;
    std::size_t max_depth_;
    std::vector<bool> used_;
    std::vector<Task> prefix_;
};

}  // namespace

BudgetExceeded::BudgetExceeded(std::uint64_t required, std::uint64_t budget)
    : std::runtime_error("exhaustive enumeration requires " + std::to_string(required) +
                         " sequences, budget is " + std::to_string(budget)),
      required_(required),
      budget_(budget) {}

std::uint64_t sequence_count(int agent_count, int max_tasks) {
    const std::uint64_t tasks = static_cast<std::uint64_t>(agent_count) + 1;
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 1;  // empty sequence
    std::uint64_t term = 1;
    for (int len = 1; len <= max_tasks && static_cast<std::uint64_t>(len) <= tasks; ++len) {
        const std::uint64_t factor = tasks - static_cast<std::uint64_t>(len) + 1;
        if (term > kMax / factor) {
            return kMax;
        }
        term *= factor;
        if (total > kMax - term) {
            return kMax;
        }
        total += term;
    }
    return total;
}

ExhaustiveResult exhaustive_plan(const Scenario& scenario, int max_tasks,
                                 const ExhaustiveOptions& options) {
    validate(scenario);
    const int n = static_cast<int>(scenario.agent_count());
    if (max_tasks < 0 || max_tasks > n + 1) {
        throw std::invalid_argument("D must lie in [0, N + 1]");
    }
    const std::uint64_t required = sequence_count(n, max_tasks);
    if (required > options.budget) {
        throw BudgetExceeded(required, options.budget);
    }

    Extremes total;
    total.offer(MissionState(scenario).cost_sum(), {});

    if (max_tasks > 0) {
        std::vector<Extremes> branches(static_cast<std::size_t>(n) + 1);
        std::atomic<int> next{0};
        const auto worker = [&] {
            Enumerator enumerator(scenario, max_tasks);
            for (int id = next.fetch_add(1); id <= n; id = next.fetch_add(1)) {
                branches[static_cast<std::size_t>(id)] = enumerator.run_branch(Task{id});
            }
        };
        const unsigned workers = std::clamp(options.workers, 1u, static_cast<unsigned>(n) + 1);
        if (workers == 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back(worker);
            }
        }
        for (const Extremes& branch : branches) {
            total.merge(branch);
        }
    }

    ExhaustiveResult result;
    result.best = evaluate_sequence(scenario, total.best);
    result.worst = evaluate_sequence(scenario, total.worst);
    result.evaluated = total.visited;
    return result;
}

ExhaustiveResult exhaustive_plan(const Scenario& scenario, const ExhaustiveOptions& options) {
    return exhaustive_plan(scenario, scenario.max_tasks, options);
}

}  // namespace cna
