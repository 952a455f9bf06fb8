#include "cna/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "cna/io.hpp"
#include "cna/montecarlo.hpp"
#include "cna/uncertainty.hpp"

namespace cna::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void print_notices(const std::vector<std::string>& notices, std::ostream& err) {
    for (const std::string& n : notices) {
        err << "notice: " << n << '\n';
    }
}

}  // namespace

unsigned workers_from_env(unsigned fallback) {
    const char* value = std::getenv("CNA_WORKERS");
    if (value == nullptr || *value == '\0') {
        return fallback;
    }
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(value, &end, 10);
    if (end == value || *end != '\0' || parsed == 0 || parsed > 1024) {
        return fallback;
    }
    return static_cast<unsigned>(parsed);
}

int cmd_plan(const PlanOptions& options, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    std::vector<Task> sequence;
    std::string planner_label;
    std::optional<double> worst_cost;
    try {
        std::vector<std::string> notices;
        scenario = io::load_scenario(options.scenario, &notices);
        print_notices(notices, err);
        if (options.planner == "greedy") {
            const RewardWeights weights = io::parse_weights(options.weights);
            sequence = greedy_plan(scenario, weights).sequence;
            planner_label = "greedy " + options.weights;
        } else if (options.planner == "exhaustive") {
            ExhaustiveOptions ex;
            ex.budget = options.budget;
            ex.workers = options.workers;
            const ExhaustiveResult result = exhaustive_plan(scenario, ex);
            sequence = result.best.sequence;
            worst_cost = result.worst.cost;
            planner_label = "exhaustive";
        } else {
            err << "error: unknown planner '" << options.planner << "' (expected greedy or exhaustive)\n";
            return kInputError;
        }
    } catch (const io::InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << " (raise it with --budget)\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    const MissionResult mission = run_mission(scenario, sequence);
    try {
        if (!options.out_dir.empty()) {
            std::filesystem::create_directories(options.out_dir);
            auto summary = open_output(options.out_dir / "summary.csv");
            io::write_plan_summary(summary, planner_label, scenario, mission);
            auto trace = open_output(options.out_dir / "trace.csv");
            io::write_trace_csv(trace, scenario, mission);
            auto events = open_output(options.out_dir / "events.csv");
            io::write_events_csv(events, mission);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    out << "planner: " << planner_label << '\n';
    out << "sequence: " << to_string(sequence) << '\n';
    for (const TaskEvent& e : mission.events) {
        if (e.task.is_surface()) {
            out << "  surface  S = " << e.start_step << ", fix at " << e.end_step << '\n';
        } else {
            out << "  aid " << e.task.id << "    Z = " << e.end_step << '\n';
        }
    }
    out << "cost J' = " << format_number(mission.cost) << '\n';
    out << "cost J  = " << format_number(mission.cost_J) << '\n';
    if (worst_cost) {
        out << "worst-case J' = " << format_number(*worst_cost) << '\n';
    }

    const bool aided_any = std::any_of(mission.events.begin(), mission.events.end(),
                                       [](const TaskEvent& e) { return !e.task.is_surface(); });
    if (!aided_any) {
        err << "no agent can be aided within the mission time\n";
        return kInfeasible;
    }
    return kSuccess;
}

int cmd_mc(const McOptions& options, std::ostream& out, std::ostream& err) {
    McConfig config;
    try {
        std::vector<std::string> notices;
        config = io::load_mc_config(options.config, &notices);
        print_notices(notices, err);
    } catch (const io::InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    const McReport report = run_experiment(config, options.workers);
    try {
        std::filesystem::create_directories(options.out_dir);
        auto trials = open_output(options.out_dir / "trials.csv");
        write_trials_csv(trials, config, report);
        auto aggregates = open_output(options.out_dir / "aggregates.csv");
        write_aggregate_csv(aggregates, config, report);
        auto timing = open_output(options.out_dir / "timing.csv");
        write_timing_csv(timing, config, report);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    out << "wrote " << report.rows.size() << " trial rows and " << report.aggregates.size()
        << " aggregate rows to " << options.out_dir.string() << '\n';
    return kSuccess;
}

int cmd_zstar(const ZstarOptions& options, std::ostream& out, std::ostream& err) {
    NoiseParams params = io::mission_defaults().noise;
    params.nu_w = options.nu_w;
    params.nu_y = options.nu_y;
    try {
        if (options.horizon < 1) {
            throw std::invalid_argument("T must be at least 1");
        }
        if (!(options.nu_w > 0.0)) {
            throw std::invalid_argument(
                "nu_w must be positive: with no process noise the cost only grows with Z, so there is "
                "no interior optimum");
        }
        const double zstar = optimal_aid_time(options.nu0, options.nu_cna, params, options.horizon);
        const int best = optimal_aid_step(options.nu0, options.nu_cna, params, options.horizon);
        out << "Z* = " << format_number(zstar) << '\n';
        out << "Z_int = " << best << '\n';
        out << "J_i(Z_int) = "
            << format_number(agent_cost(options.nu0, best, options.nu_cna, params, options.horizon))
            << '\n';
        out << "J_i^max = " << format_number(max_cost(options.nu0, params, options.horizon)) << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kSuccess;
}

int cmd_print_defaults(std::ostream& out) {
    out << io::defaults_json().dump(2) << '\n';
    return kSuccess;
}

}  // namespace cna::cli
