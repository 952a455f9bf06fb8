#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cna/planner.hpp"

namespace cna::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kInfeasible = 2 };

struct PlanOptions {
    std::filesystem::path scenario;
    std::string planner = "greedy";  // greedy | exhaustive
    std::string weights = "G4";
    std::filesystem::path out_dir;
    std::uint64_t budget = kDefaultExhaustiveBudget;
    unsigned workers = 1;
};

/// Plans the scenario and writes summary.csv, trace.csv and events.csv to
/// `out_dir` (created if needed). Returns kInfeasible when no agent can be aided.
int cmd_plan(const PlanOptions& options, std::ostream& out, std::ostream& err);

struct McOptions {
    std::filesystem::path config;
    std::filesystem::path out_dir;
    unsigned workers = 1;
};

/// Writes trials.csv, aggregates.csv (both reproducible) and timing.csv.
int cmd_mc(const McOptions& options, std::ostream& out, std::ostream& err);

struct ZstarOptions {
    double nu0 = 0.0;
    double nu_cna = 0.0;
    int horizon = 2000;
    double nu_w = 1.0;
    double nu_y = 10.0;
};

int cmd_zstar(const ZstarOptions& options, std::ostream& out, std::ostream& err);

int cmd_print_defaults(std::ostream& out);

/// Worker count from CNA_WORKERS, or `fallback` when unset or invalid.
unsigned workers_from_env(unsigned fallback);

}  // namespace cna::cli
