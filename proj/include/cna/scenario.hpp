#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cna/kinematics.hpp"
#include "cna/uncertainty.hpp"

namespace cna {

/// A CNA task: 0 surfaces for a GPS fix, i >= 1 intercepts and aids agent i.
struct Task {
    int id = 0;

    static constexpr Task surface() { return Task{0}; }
    static constexpr Task aid(int agent_id) { return Task{agent_id}; }

    constexpr bool is_surface() const { return id == 0; }

    friend constexpr bool operator==(Task, Task) = default;
    friend constexpr auto operator<=>(Task, Task) = default;
};

std::string to_string(const std::vector<Task>& tasks);

/// Agents, vehicles, noise model and mission limits. Agents are stored in id
/// order with ids 1..N.
struct Scenario {
    std::vector<AgentSpec> agents;
    CnaSpec cna;
    NoiseParams noise;
    int horizon = 2000;     // T, in steps
    double t_max = 2000.0;  // mission time limit, TU
    int max_tasks = 0;      // D

    std::size_t agent_count() const { return agents.size(); }
    const AgentSpec& agent(int id) const { return agents.at(static_cast<std::size_t>(id - 1)); }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate(const Scenario& scenario);

/// Default mission parameters with the given agents, D = N + 1 and CNA at the origin.
Scenario make_default_scenario(std::vector<AgentSpec> agents);

}  // namespace cna
