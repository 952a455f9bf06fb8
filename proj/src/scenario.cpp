#include "cna/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace cna {

std::string to_string(const std::vector<Task>& tasks) {
    std::string out = "{";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += std::to_string(tasks[i].id);
    }
    out += "}";
    return out;
}

void validate(const Scenario& scenario) {
    if (scenario.agents.empty()) {
        throw std::invalid_argument("scenario has no agents");
    }
    validate(scenario.cna);
    validate(scenario.noise);
    for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
        const AgentSpec& agent = scenario.agents[i];
        validate(agent);
        if (agent.id != static_cast<int>(i) + 1) {
            throw std::invalid_argument("agent ids must be 1..N in order (found id " +
                                        std::to_string(agent.id) + " at position " +
                                        std::to_string(i + 1) + ")");
        }
        if (!(scenario.cna.speed > agent.speed)) {
            throw std::invalid_argument("agent " + std::to_string(agent.id) +
                                        " is not slower than the CNA");
        }
    }
    if (scenario.horizon < 0) {
        throw std::invalid_argument("horizon must be non-negative");
    }
    if (!(scenario.t_max >= 0.0) || !std::isfinite(scenario.t_max)) {
        throw std::invalid_argument("T_max must be finite and non-negative");
    }
    const int n = static_cast<int>(scenario.agents.size());
    if (scenario.max_tasks < 0 || scenario.max_tasks > n + 1) {
        throw std::invalid_argument("D must lie in [0, N + 1]");
    }
}

Scenario make_default_scenario(std::vector<AgentSpec> agents) {
    Scenario scenario;
    scenario.max_tasks = static_cast<int>(agents.size()) + 1;
    scenario.agents = std::move(agents);
    return scenario;
}

}  // namespace cna
