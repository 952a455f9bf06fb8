#include "cna/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "cna/version.hpp"

namespace cna {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30u)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27u)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31u);
}

std::uint64_t mix_stream(std::uint64_t seed, int agent_count, int trial) {
    std::uint64_t state = seed;
    std::uint64_t h = splitmix64(state);
    state = h ^ static_cast<std::uint64_t>(agent_count);
    h = splitmix64(state);
    state = h ^ static_cast<std::uint64_t>(trial);
    return splitmix64(state);
}

double normalize_heading(double angle) {
    double a = std::fmod(angle, 2.0 * kPi);
    if (a < 0.0) {
        a += 2.0 * kPi;
    }
    if (a >= 2.0 * kPi) {
        a = 0.0;
    }
    return a;
}

Vec2 point_on_boundary(double side, TrialRng& rng) {
    const double half = side / 2.0;
    const double s = rng.uniform(0.0, 4.0 * side);
    const int edge = std::min(static_cast<int>(s / side), 3);
    const double t = s - edge * side - half;  // position along the edge, in [-half, half)
    switch (edge) {
        case 0: return {t, -half};   // bottom, left to right
        case 1: return {half, t};    // right, bottom to top
        case 2: return {-t, half};   // top, right to left
        default: return {-half, -t};  // left, top to bottom
    }
}

std::vector<std::string> planner_row_names(const std::vector<PlannerSpec>& planners) {
    std::vector<std::string> names;
    for (const PlannerSpec& p : planners) {
        if (p.kind == PlannerSpec::Kind::Exhaustive) {
            names.push_back(p.name + "_best");
            names.push_back(p.name + "_worst");
        } else {
            names.push_back(p.name);
        }
    }
    return names;
}

std::string sequence_field(const std::vector<Task>& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += std::to_string(seq[i].id);
    }
    return out;
}

void write_header(std::ostream& out, const McConfig& config, const McReport& report,
                  std::string_view table) {
    out << "# cna_planner " << kVersion << " monte carlo " << table << "\n";
    out << "# seed: " << report.seed << "\n";
    out << "# rng: " << kRngAlgorithm << "\n";
    out << "# trials_per_N: " << config.trials << "\n";
    out << "# agent_counts:";
    for (int n : config.agent_counts) {
        out << ' ' << n;
    }
    out << "\n# strategies:";
    for (SpawnStrategy s : config.strategies) {
        out << ' ' << to_string(s);
    }
    out << "\n# box_side: " << format_number(config.scenario.box_side) << "\n";
    out << "# circle_radius: " << format_number(config.scenario.circle_radius) << "\n";
    out << "# exhaustive_max_agents: " << config.exhaustive_max_agents << "\n";
    out << "# cost: J' (mean scalar variance, LU^2); J = 2 J'\n";
}

std::vector<TrialRow> run_trial(const McConfig& config, int agent_count, int trial,
                                SpawnStrategy strategy) {
    TrialRng rng(config.seed, agent_count, trial);
    const Scenario scenario = generate_scenario(strategy, agent_count, config.scenario, rng);
    const CostBounds bounds = cost_bounds(scenario.agents, scenario.noise, scenario.horizon);

    std::vector<TrialRow> rows;
    const auto base_row = [&](std::string name) {
        TrialRow row;
        row.agent_count = agent_count;
        row.trial = trial;
        row.strategy = strategy;
        row.planner = std::move(name);
        row.lower_bound = bounds.lower;
        row.upper_bound = bounds.upper;
        return row;
    };
    using Clock = std::chrono::steady_clock;

    for (const PlannerSpec& planner : config.planners) {
        if (planner.kind == PlannerSpec::Kind::Greedy) {
            TrialRow row = base_row(planner.name);
            const auto start = Clock::now();
            const PlanResult plan = greedy_plan(scenario, planner.weights);
            row.plan_seconds = std::chrono::duration<double>(Clock::now() - start).count();
            row.cost = plan.cost;
            row.sequence = plan.sequence;
            rows.push_back(std::move(row));
            continue;
        }

        TrialRow best = base_row(planner.name + "_best");
        TrialRow worst = base_row(planner.name + "_worst");
        if (agent_count > config.exhaustive_max_agents) {
            best.skip_reason = worst.skip_reason = "N above exhaustive cap";
        } else {
            try {
                ExhaustiveOptions options;
                options.budget = config.exhaustive_budget;
                const auto start = Clock::now();
                const ExhaustiveResult result = exhaustive_plan(scenario, options);
                const double seconds =
                    std::chrono::duration<double>(Clock::now() - start).count();
                best.plan_seconds = worst.plan_seconds = seconds;
                best.cost = result.best.cost;
                best.sequence = result.best.sequence;
                worst.cost = result.worst.cost;
                worst.sequence = result.worst.sequence;
            } catch (const BudgetExceeded& e) {
                best.skip_reason = worst.skip_reason =
                    "budget exceeded: " + std::to_string(e.required()) + " sequences";
            }
        }
        rows.push_back(std::move(best));
        rows.push_back(std::move(worst));
    }
    return rows;
}

}  // namespace

std::string_view to_string(SpawnStrategy strategy) {
    switch (strategy) {
        case SpawnStrategy::Interior: return "interior";
        case SpawnStrategy::Boundary: return "boundary";
        case SpawnStrategy::Circle: return "circle";
    }
    return "unknown";
}

std::optional<SpawnStrategy> parse_strategy(std::string_view name) {
    if (name == "interior") return SpawnStrategy::Interior;
    if (name == "boundary") return SpawnStrategy::Boundary;
    if (name == "circle") return SpawnStrategy::Circle;
    return std::nullopt;
}

TrialRng::TrialRng(std::uint64_t seed, int agent_count, int trial)
    : engine_(mix_stream(seed, agent_count, trial)) {}

std::uint64_t TrialRng::next() { return engine_(); }

double TrialRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double TrialRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Scenario generate_scenario(SpawnStrategy strategy, int agent_count, const ScenarioTemplate& tmpl,
                           TrialRng& rng) {
    if (agent_count < 1) {
        throw std::invalid_argument("generate_scenario: need at least one agent");
    }
    Scenario scenario;
    scenario.cna.start = {0.0, 0.0};
    scenario.cna.speed = tmpl.cna_speed;
    scenario.noise = tmpl.noise;
    scenario.horizon = tmpl.horizon;
    scenario.t_max = tmpl.t_max;
    scenario.max_tasks = agent_count + 1;

    const double half = tmpl.box_side / 2.0;
    const double max_offset = 30.0 * kPi / 180.0;

    Vec2 circle_center;
    double circle_phase = 0.0;
    if (strategy == SpawnStrategy::Circle) {
        circle_center = point_on_boundary(tmpl.box_side, rng);
        circle_phase = rng.uniform(0.0, 2.0 * kPi);
    }

    for (int i = 0; i < agent_count; ++i) {
        AgentSpec agent;
        agent.id = i + 1;
        agent.speed = tmpl.agent_speed;
        switch (strategy) {
            case SpawnStrategy::Interior:
                agent.start = {rng.uniform(-half, half), rng.uniform(-half, half)};
                agent.heading = rng.uniform(0.0, 2.0 * kPi);
                break;
            case SpawnStrategy::Boundary: {
                agent.start = point_on_boundary(tmpl.box_side, rng);
                const double to_center = std::atan2(-agent.start.y, -agent.start.x);
                agent.heading = normalize_heading(to_center + rng.uniform(-max_offset, max_offset));
                break;
            }
            case SpawnStrategy::Circle: {
                const double angle = circle_phase + 2.0 * kPi * i / agent_count;
                agent.start = circle_center + tmpl.circle_radius * unit_vector(angle);
                agent.heading = normalize_heading(std::atan2(-circle_center.y, -circle_center.x));
                break;
            }
        }
        // (0, nu0_max]: 1 - U[0,1) lies in (0, 1].
        agent.initial_variance = tmpl.nu0_max * (1.0 - rng.uniform());
        scenario.agents.push_back(agent);
    }
    return scenario;
}

void validate(const McConfig& config) {
    if (config.trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (config.agent_counts.empty()) {
        throw std::invalid_argument("at least one agent count is required");
    }
    for (int n : config.agent_counts) {
        if (n < 1) {
            throw std::invalid_argument("agent counts must be positive");
        }
    }
    if (config.strategies.empty()) {
        throw std::invalid_argument("at least one spawn strategy is required");
    }
    if (config.planners.empty()) {
        throw std::invalid_argument("at least one planner is required");
    }
    for (const PlannerSpec& p : config.planners) {
        if (p.kind == PlannerSpec::Kind::Greedy) {
            validate(p.weights);
        }
    }
    const ScenarioTemplate& t = config.scenario;
    if (!(t.box_side > 0.0) || !(t.circle_radius >= 0.0) || !(t.nu0_max > 0.0)) {
        throw std::invalid_argument("box side and nu0 range must be positive");
    }
    if (!(t.cna_speed > t.agent_speed) || !(t.agent_speed > 0.0)) {
        throw std::invalid_argument("agent speed must be positive and below the CNA speed");
    }
    validate(t.noise);
}

std::vector<int> strategy_split(int trials, std::size_t strategy_count) {
    if (strategy_count == 0) {
        throw std::invalid_argument("strategy_split: no strategies");
    }
    const int k = static_cast<int>(strategy_count);
    std::vector<int> counts(strategy_count, trials / k);
    counts.front() += trials % k;
    return counts;
}

McReport run_experiment(const McConfig& config, unsigned workers) {
    validate(config);

    struct Job {
        int agent_count;
        int trial;
        SpawnStrategy strategy;
    };
    std::vector<Job> jobs;
    const std::vector<int> split = strategy_split(config.trials, config.strategies.size());
    for (int n : config.agent_counts) {
        int trial = 0;
        for (std::size_t s = 0; s < split.size(); ++s) {
            for (int j = 0; j < split[s]; ++j) {
                jobs.push_back({n, trial++, config.strategies[s]});
            }
        }
    }

    std::vector<std::vector<TrialRow>> results(jobs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1)) {
            results[j] = run_trial(config, jobs[j].agent_count, jobs[j].trial, jobs[j].strategy);
        }
    };
    workers = std::max(workers, 1u);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    McReport report;
    report.seed = config.seed;
    for (std::vector<TrialRow>& rows : results) {
        for (TrialRow& row : rows) {
            report.rows.push_back(std::move(row));
        }
    }
    report.aggregates = aggregate(report.rows, planner_row_names(config.planners));
    return report;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows,
                                    const std::vector<std::string>& planner_order) {
    std::vector<int> counts;
    for (const TrialRow& row : rows) {
        if (std::find(counts.begin(), counts.end(), row.agent_count) == counts.end()) {
            counts.push_back(row.agent_count);
        }
    }
    std::vector<AggregateRow> out;
    for (int n : counts) {
        for (const std::string& name : planner_order) {
            AggregateRow agg;
            agg.agent_count = n;
            agg.planner = name;
            for (const TrialRow& row : rows) {
                if (row.agent_count != n || row.planner != name) {
                    continue;
                }
                if (row.skipped()) {
                    ++agg.skipped;
                    continue;
                }
                ++agg.trials;
                agg.mean_cost += row.cost;
                agg.mean_plan_seconds += row.plan_seconds;
                agg.mean_lower_bound += row.lower_bound;
                agg.mean_upper_bound += row.upper_bound;
            }
            if (agg.trials > 0) {
                const double k = agg.trials;
                agg.mean_cost /= k;
                agg.mean_plan_seconds /= k;
                agg.mean_lower_bound /= k;
                agg.mean_upper_bound /= k;
            }
            out.push_back(agg);
        }
    }
    return out;
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_trials_csv(std::ostream& out, const McConfig& config, const McReport& report) {
    write_header(out, config, report, "trials");
    out << "N,trial,strategy,planner,status,cost,cost_J,lower_bound,upper_bound,sequence\n";
    for (const TrialRow& r : report.rows) {
        out << r.agent_count << ',' << r.trial << ',' << to_string(r.strategy) << ',' << r.planner
            << ',';
        if (r.skipped()) {
            out << "skipped: " << r.skip_reason << ",,," << format_number(r.lower_bound) << ','
                << format_number(r.upper_bound) << ",\n";
            continue;
        }
        out << "ok," << format_number(r.cost) << ',' << format_number(2.0 * r.cost) << ','
            << format_number(r.lower_bound) << ',' << format_number(r.upper_bound) << ','
            << sequence_field(r.sequence) << '\n';
    }
}

void write_aggregate_csv(std::ostream& out, const McConfig& config, const McReport& report) {
    write_header(out, config, report, "aggregates");
    out << "N,planner,trials,skipped,mean_cost,mean_cost_J,mean_lower_bound,mean_upper_bound\n";
    for (const AggregateRow& a : report.aggregates) {
        out << a.agent_count << ',' << a.planner << ',' << a.trials << ',' << a.skipped << ',';
        if (a.trials == 0) {
            out << ",,,\n";
            continue;
        }
        out << format_number(a.mean_cost) << ',' << format_number(2.0 * a.mean_cost) << ','
            << format_number(a.mean_lower_bound) << ',' << format_number(a.mean_upper_bound)
            << '\n';
    }
}

void write_timing_csv(std::ostream& out, const McConfig& config, const McReport& report) {
    write_header(out, config, report, "plan timing (wall clock, not reproducible)");
    out << "N,planner,trials,mean_plan_seconds\n";
    for (const AggregateRow& a : report.aggregates) {
        out << a.agent_count << ',' << a.planner << ',' << a.trials << ','
            << (a.trials > 0 ? format_number(a.mean_plan_seconds) : std::string()) << '\n';
    }
}

}  // namespace cna
