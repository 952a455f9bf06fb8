#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cna/planner.hpp"
#include "cna/scenario.hpp"

namespace cna {

enum class SpawnStrategy { Interior, Boundary, Circle };

std::string_view to_string(SpawnStrategy strategy);
std::optional<SpawnStrategy> parse_strategy(std::string_view name);

/// Stream identifier written into report headers.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64(seed,N,trial)";

/// Per-trial random stream: std::mt19937_64 seeded from a splitmix64 mix of
/// (seed, N, trial). Uniform doubles are built from the top 53 bits, so the
/// stream does not depend on the standard library's distributions.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, int agent_count, int trial);

    std::uint64_t next();
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

struct ScenarioTemplate {
    double box_side = 1000.0;
    double circle_radius = 250.0;
    double nu0_max = 3000.0;
    double agent_speed = 0.5;
    double cna_speed = 1.0;
    NoiseParams noise;
    int horizon = 2000;
    double t_max = 2000.0;
};

/// Random scenario with N agents and D = N + 1. The CNA starts at the origin,
/// which is the box center.
Scenario generate_scenario(SpawnStrategy strategy, int agent_count, const ScenarioTemplate& tmpl,
                           TrialRng& rng);

struct PlannerSpec {
    enum class Kind { Greedy, Exhaustive };
    Kind kind = Kind::Greedy;
    std::string name;
    RewardWeights weights;

    static PlannerSpec greedy(std::string name, RewardWeights weights) {
        return {Kind::Greedy, std::move(name), weights};
    }
    static PlannerSpec exhaustive() { return {Kind::Exhaustive, "exhaustive", {}}; }
};

struct McConfig {
    int trials = 100;
    std::vector<int> agent_counts{3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    std::vector<SpawnStrategy> strategies{SpawnStrategy::Interior, SpawnStrategy::Boundary,
                                          SpawnStrategy::Circle};
    std::uint64_t seed = 1;
    std::vector<PlannerSpec> planners{
        PlannerSpec::greedy("G1", RewardWeights::G1()), PlannerSpec::greedy("G2", RewardWeights::G2()),
        PlannerSpec::greedy("G3", RewardWeights::G3()), PlannerSpec::greedy("G4", RewardWeights::G4()),
        PlannerSpec::exhaustive()};
    int exhaustive_max_agents = 7;
    std::uint64_t exhaustive_budget = kDefaultExhaustiveBudget;
    ScenarioTemplate scenario;
};

void validate(const McConfig& config);

/// Number of trials assigned to each enabled strategy: an even split with the
/// remainder going to the first.
std::vector<int> strategy_split(int trials, std::size_t strategy_count);

/// One planner outcome on one trial. Exhaustive runs produce two rows,
/// "exhaustive_best" and "exhaustive_worst".
struct TrialRow {
    int agent_count = 0;
    int trial = 0;
    SpawnStrategy strategy = SpawnStrategy::Interior;
    std::string planner;
    double cost = 0.0;
    double plan_seconds = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    std::vector<Task> sequence;
    std::string skip_reason;  // non-empty when the planner did not run

    bool skipped() const { return !skip_reason.empty(); }
};

struct AggregateRow {
    int agent_count = 0;
    std::string planner;
    int trials = 0;  // rows that ran
    int skipped = 0;
    double mean_cost = 0.0;
    double mean_plan_seconds = 0.0;
    double mean_lower_bound = 0.0;
    double mean_upper_bound = 0.0;
};

struct McReport {
    std::uint64_t seed = 0;
    std::vector<TrialRow> rows;  // ordered by (N, trial, planner order)
    std::vector<AggregateRow> aggregates;  // ordered by (N, planner order)
};

/// Runs every planner on every trial. Each trial draws from its own stream,
/// so the report does not depend on `workers`.
McReport run_experiment(const McConfig& config, unsigned workers = 1);

std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows,
                                    const std::vector<std::string>& planner_order);

/// Delimiter-separated tables with a '#' metadata header. Timing columns are
/// written only by write_timing_csv so that the other two are reproducible
/// byte for byte.
void write_trials_csv(std::ostream& out, const McConfig& config, const McReport& report);
void write_aggregate_csv(std::ostream& out, const McConfig& config, const McReport& report);
void write_timing_csv(std::ostream& out, const McConfig& config, const McReport& report);

/// Formats a double with 17 significant digits.
std::string format_number(double value);

}  // namespace cna
