// Command-line front end: plan, mc, zstar, print-defaults.

#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "cna/commands.hpp"

int main(int argc, char** argv) {
    using namespace cna::cli;

    CLI::App app{"Path planning for a cooperative navigation aid serving N agents"};
    app.set_version_flag("--version", "1.0.0");

    PlanOptions plan;
    auto* plan_cmd = app.add_subcommand("plan", "Plan a task sequence for a scenario file");
    plan_cmd->add_option("scenario", plan.scenario, "Scenario JSON file")->required();
    plan_cmd->add_option("--planner", plan.planner, "greedy or exhaustive")
        ->check(CLI::IsMember({"greedy", "exhaustive"}));
    plan_cmd->add_option("--weights", plan.weights, "G1..G4 or alpha,beta,gamma (greedy only)");
    plan_cmd->add_option("--out", plan.out_dir, "Directory for summary/trace/event tables");
    plan_cmd->add_option("--budget", plan.budget, "Maximum sequence count for exhaustive search");

    McOptions mc;
    auto* mc_cmd = app.add_subcommand("mc", "Run a Monte Carlo comparison of the planners");
    mc_cmd->add_option("config", mc.config, "Experiment JSON file")->required();
    mc_cmd->add_option("--out", mc.out_dir, "Output directory")->required();

    ZstarOptions zs;
    auto* zstar_cmd = app.add_subcommand("zstar", "Optimal time-to-aid for a single agent");
    zstar_cmd->add_option("--nu0", zs.nu0, "Initial agent variance")->required();
    zstar_cmd->add_option("--nucna", zs.nu_cna, "CNA variance at the aiding step")->required();
    zstar_cmd->add_option("--T", zs.horizon, "Horizon in steps");
    zstar_cmd->add_option("--nuw", zs.nu_w, "Agent process variance per step");
    zstar_cmd->add_option("--nuy", zs.nu_y, "Measurement variance");

    auto* defaults_cmd = app.add_subcommand("print-defaults", "Print the default mission parameters");
    bool print_defaults_flag = false;
    app.add_flag("--print-defaults", print_defaults_flag, "Same as the print-defaults subcommand");
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (print_defaults_flag || defaults_cmd->parsed()) {
        return cmd_print_defaults(std::cout);
    }
    if (plan_cmd->parsed()) {
        plan.workers = workers_from_env(hw);
        return cmd_plan(plan, std::cout, std::cerr);
    }
    if (mc_cmd->parsed()) {
        mc.workers = workers_from_env(hw);
        return cmd_mc(mc, std::cout, std::cerr);
    }
    if (zstar_cmd->parsed()) {
        return cmd_zstar(zs, std::cout, std::cerr);
    }
    std::cerr << app.help();
    return kInputError;
}
