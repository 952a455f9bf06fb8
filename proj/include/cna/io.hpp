#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cna/montecarlo.hpp"
#include "cna/planner.hpp"
#include "cna/scenario.hpp"
#include "cna/simulator.hpp"

namespace cna::io {

/// Invalid input document. `field` is a JSON-pointer-like path such as
/// "agents[2].heading_deg", or empty for syntax errors.
class InputError : public std::runtime_error {
public:
    InputError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Mission parameters that have defaults.
struct MissionDefaults {
    NoiseParams noise;
    double t_max = 2000.0;
    double cna_speed = 1.0;
    double agent_speed = 0.5;
};

MissionDefaults mission_defaults();
nlohmann::json defaults_json();

/// Parses a scenario document. Missing "params" entries are filled from the
/// defaults and reported through `notices`; unknown fields are rejected.
Scenario parse_scenario(const nlohmann::json& doc, std::vector<std::string>* notices = nullptr);
Scenario parse_scenario_text(const std::string& text, std::vector<std::string>* notices = nullptr);
Scenario load_scenario(const std::filesystem::path& path,
                       std::vector<std::string>* notices = nullptr);

/// Writes every field explicitly (headings in radians), so that parsing the
/// result reproduces `scenario` exactly.
nlohmann::json scenario_to_json(const Scenario& scenario);

McConfig parse_mc_config(const nlohmann::json& doc, std::vector<std::string>* notices = nullptr);
McConfig load_mc_config(const std::filesystem::path& path,
                        std::vector<std::string>* notices = nullptr);

/// "G1".."G4" or "alpha,beta,gamma".
RewardWeights parse_weights(const std::string& text);

/// One row per step: k, cna_x, cna_y, nu_c, then x, y, nu per agent.
void write_trace_csv(std::ostream& out, const Scenario& scenario, const MissionResult& mission);
/// Aiding and surfacing events.
void write_events_csv(std::ostream& out, const MissionResult& mission);
/// Sequence, per-task steps and costs.
void write_plan_summary(std::ostream& out, const std::string& planner, const Scenario& scenario,
                        const MissionResult& mission);

}  // namespace cna::io
