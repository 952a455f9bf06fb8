#include "cna/io.hpp"

#include <algorithm>
#include <array>
#include <span>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string_view>

#include "cna/version.hpp"

namespace cna::io {

using nlohmann::json;

namespace {

std::string join_path(const std::string& parent, std::string_view key) {
    return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

/// Typed access to one JSON object, rejecting keys outside `allowed`.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path, std::initializer_list<std::string_view> allowed)
        : ObjectReader(obj, std::move(path), std::span<const std::string_view>(allowed.begin(), allowed.size())) {}

    ObjectReader(const json& obj, std::string path, std::span<const std::string_view> allowed)
        : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw InputError(path_, "expected an object");
        }
        for (const auto& item : obj_.items()) {
            if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
                throw InputError(join_path(path_, item.key()), "unknown field");
            }
        }
    }

    bool has(std::string_view key) const { return obj_.contains(std::string(key)); }
    const json& at(std::string_view key) const { return obj_.at(std::string(key)); }
    std::string path(std::string_view key) const { return join_path(path_, key); }

    double number(std::string_view key) const {
        const json& v = require(key);
        if (!v.is_number()) {
            throw InputError(path(key), "expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw InputError(path(key), "expected a finite number");
        }
        return d;
    }

    std::int64_t integer(std::string_view key) const {
        const json& v = require(key);
        if (!v.is_number_integer()) {
            throw InputError(path(key), "expected an integer");
        }
        return v.get<std::int64_t>();
    }

    std::uint64_t unsigned_integer(std::string_view key) const {
        const json& v = require(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned())) {
            throw InputError(path(key), "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string string(std::string_view key) const {
        const json& v = require(key);
        if (!v.is_string()) {
            throw InputError(path(key), "expected a string");
        }
        return v.get<std::string>();
    }

    Vec2 point(std::string_view key) const {
        const json& v = require(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw InputError(path(key), "expected [x, y]");
        }
        const Vec2 p{v[0].get<double>(), v[1].get<double>()};
        if (!p.finite()) {
            throw InputError(path(key), "expected finite coordinates");
        }
        return p;
    }

private:
    const json& require(std::string_view key) const {
        if (!has(key)) {
            throw InputError(path(key), "missing required field");
        }
        return at(key);
    }

    const json& obj_;
    std::string path_;
};

constexpr std::array<std::string_view, 9> kParamKeys = {
    "M", "T_max", "dt", "v_c", "v_a", "nu_w", "nu_c", "nu_y", "nu_G"};

/// Reads a params block on top of the defaults.
MissionDefaults read_params(const json* doc, const std::string& path,
                            std::vector<std::string>* notices) {
    MissionDefaults d = mission_defaults();
    std::vector<std::string> filled;
    if (doc == nullptr) {
        filled.assign(kParamKeys.begin(), kParamKeys.end());
    } else {
        const ObjectReader r(*doc, path, kParamKeys);
        const auto num = [&](std::string_view key, double& dst) {
            if (r.has(key)) {
                dst = r.number(key);
            } else {
                filled.emplace_back(key);
            }
        };
        if (r.has("M")) {
            const auto m = r.integer("M");
            if (m < 0) {
                throw InputError(r.path("M"), "must be non-negative");
            }
            d.noise.surface_steps = static_cast<int>(m);
        } else {
            filled.emplace_back("M");
        }
        num("T_max", d.t_max);
        num("dt", d.noise.dt);
        num("v_c", d.cna_speed);
        num("v_a", d.agent_speed);
        num("nu_w", d.noise.nu_w);
        if (r.has("nu_c")) {
            d.noise.nu_c = r.number("nu_c");
        } else {
            d.noise.nu_c = d.noise.nu_w / 10.0;
            filled.emplace_back("nu_c");
        }
        num("nu_y", d.noise.nu_y);
        num("nu_G", d.noise.nu_G);
    }
    if (notices != nullptr && !filled.empty()) {
        std::string msg = "using default values for " + (path.empty() ? "params" : path) + ":";
        for (const std::string& key : filled) {
            msg += " " + key;
        }
        notices->push_back(msg);
    }
    try {
        validate(d.noise);
    } catch (const std::invalid_argument& e) {
        throw InputError(path, e.what());
    }
    if (!(d.t_max >= 0.0)) {
        throw InputError(join_path(path, "T_max"), "must be non-negative");
    }
    return d;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("", e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("", "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string num(double v) { return format_number(v); }

}  // namespace

InputError::InputError(std::string field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

MissionDefaults mission_defaults() {
    MissionDefaults d;
    d.noise.surface_steps = 60;
    d.noise.dt = 1.0;
    d.noise.nu_w = 1.0;
    d.noise.nu_c = d.noise.nu_w / 10.0;
    d.noise.nu_y = 10.0;
    d.noise.nu_G = 10.0;
    d.t_max = 2000.0;
    d.cna_speed = 1.0;
    d.agent_speed = 0.5;
    return d;
}

json defaults_json() {
    const MissionDefaults d = mission_defaults();
    return json{{"M", d.noise.surface_steps}, {"T_max", d.t_max},     {"dt", d.noise.dt},
                {"v_c", d.cna_speed},         {"v_a", d.agent_speed}, {"nu_w", d.noise.nu_w},
                {"nu_c", d.noise.nu_c},       {"nu_y", d.noise.nu_y}, {"nu_G", d.noise.nu_G}};
}

Scenario parse_scenario(const json& doc, std::vector<std::string>* notices) {
    const ObjectReader root(doc, "", {"params", "cna", "agents", "horizon", "D"});
    const MissionDefaults d =
        read_params(root.has("params") ? &root.at("params") : nullptr, "params", notices);

    Scenario scenario;
    scenario.noise = d.noise;
    scenario.t_max = d.t_max;
    scenario.cna.speed = d.cna_speed;
    if (root.has("cna")) {
        const ObjectReader cna(root.at("cna"), "cna", {"start", "speed"});
        if (cna.has("start")) {
            scenario.cna.start = cna.point("start");
        }
        if (cna.has("speed")) {
            scenario.cna.speed = cna.number("speed");
        }
    }

    if (!root.has("agents") || !root.at("agents").is_array() || root.at("agents").empty()) {
        throw InputError("agents", "expected a non-empty array");
    }
    const json& agents = root.at("agents");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string path = "agents[" + std::to_string(i) + "]";
        const ObjectReader a(agents[i], path,
                             {"id", "start", "heading_deg", "heading_rad", "speed", "nu0"});
        AgentSpec agent;
        agent.id = static_cast<int>(a.integer("id"));
        agent.start = a.point("start");
        if (a.has("heading_deg") == a.has("heading_rad")) {
            throw InputError(a.path("heading_deg"),
                             "exactly one of heading_deg or heading_rad is required");
        }
        agent.heading = a.has("heading_rad") ? a.number("heading_rad")
                                             : a.number("heading_deg") * kPi / 180.0;
        agent.speed = a.has("speed") ? a.number("speed") : d.agent_speed;
        agent.initial_variance = a.number("nu0");
        if (agent.initial_variance < 0.0) {
            throw InputError(a.path("nu0"), "must be non-negative");
        }
        if (!(agent.speed > 0.0)) {
            throw InputError(a.path("speed"), "must be positive");
        }
        scenario.agents.push_back(agent);
    }
    std::stable_sort(scenario.agents.begin(), scenario.agents.end(),
                     [](const AgentSpec& x, const AgentSpec& y) { return x.id < y.id; });
    for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
        if (scenario.agents[i].id != static_cast<int>(i) + 1) {
            throw InputError("agents", "agent ids must be exactly 1..N without repeats");
        }
    }

    const int n = static_cast<int>(scenario.agents.size());
    if (root.has("horizon")) {
        const auto h = root.integer("horizon");
        if (h < 0 || h > 100'000'000) {
            throw InputError("horizon", "out of range");
        }
        scenario.horizon = static_cast<int>(h);
    } else {
        scenario.horizon = static_cast<int>(std::llround(scenario.t_max / scenario.noise.dt));
    }
    scenario.max_tasks = root.has("D") ? static_cast<int>(root.integer("D")) : n + 1;
    if (scenario.max_tasks < 0 || scenario.max_tasks > n + 1) {
        throw InputError("D", "must lie in [0, N + 1]");
    }

    try {
        validate(scenario);
    } catch (const std::invalid_argument& e) {
        throw InputError("", e.what());
    }
    return scenario;
}

Scenario parse_scenario_text(const std::string& text, std::vector<std::string>* notices) {
    return parse_scenario(parse_text(text), notices);
}

Scenario load_scenario(const std::filesystem::path& path, std::vector<std::string>* notices) {
    return parse_scenario_text(read_file(path), notices);
}

json scenario_to_json(const Scenario& scenario) {
    json agents = json::array();
    for (const AgentSpec& a : scenario.agents) {
        agents.push_back({{"id", a.id},
                          {"start", {a.start.x, a.start.y}},
                          {"heading_rad", a.heading},
                          {"speed", a.speed},
                          {"nu0", a.initial_variance}});
    }
    const NoiseParams& p = scenario.noise;
    return json{{"params",
                 {{"M", p.surface_steps},
                  {"T_max", scenario.t_max},
                  {"dt", p.dt},
                  {"v_c", scenario.cna.speed},
                  {"v_a", scenario.agents.empty() ? mission_defaults().agent_speed
                                                  : scenario.agents.front().speed},
                  {"nu_w", p.nu_w},
                  {"nu_c", p.nu_c},
                  {"nu_y", p.nu_y},
                  {"nu_G", p.nu_G}}},
                {"cna", {{"start", {scenario.cna.start.x, scenario.cna.start.y}},
                         {"speed", scenario.cna.speed}}},
                {"agents", agents},
                {"horizon", scenario.horizon},
                {"D", scenario.max_tasks}};
}

RewardWeights parse_weights(const std::string& text) {
    if (text == "G1") return RewardWeights::G1();
    if (text == "G2") return RewardWeights::G2();
    if (text == "G3") return RewardWeights::G3();
    if (text == "G4") return RewardWeights::G4();
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw InputError("weights", "expected G1..G4 or alpha,beta,gamma");
        }
        parts.push_back(v);
    }
    if (parts.size() != 3) {
        throw InputError("weights", "expected G1..G4 or alpha,beta,gamma");
    }
    const RewardWeights w{parts[0], parts[1], parts[2]};
    try {
        validate(w);
    } catch (const std::invalid_argument& e) {
        throw InputError("weights", e.what());
    }
    return w;
}

McConfig parse_mc_config(const json& doc, std::vector<std::string>* notices) {
    const ObjectReader root(doc, "",
                            {"trials", "agent_counts", "N_min", "N_max", "strategies", "seed",
                             "planners", "exhaustive_max_agents", "exhaustive_budget", "box_side",
                             "circle_radius", "nu0_max", "params"});
    McConfig config;
    if (root.has("trials")) {
        config.trials = static_cast<int>(root.integer("trials"));
    }
    if (root.has("agent_counts")) {
        if (root.has("N_min") || root.has("N_max")) {
            throw InputError("agent_counts", "give either agent_counts or N_min/N_max");
        }
        const json& counts = root.at("agent_counts");
        if (!counts.is_array()) {
            throw InputError("agent_counts", "expected an array of integers");
        }
        config.agent_counts.clear();
        for (const json& c : counts) {
            if (!c.is_number_integer()) {
                throw InputError("agent_counts", "expected an array of integers");
            }
            config.agent_counts.push_back(c.get<int>());
        }
    } else if (root.has("N_min") || root.has("N_max")) {
        const int lo = static_cast<int>(root.integer("N_min"));
        const int hi = static_cast<int>(root.integer("N_max"));
        if (hi < lo) {
            throw InputError("N_max", "must not be below N_min");
        }
        config.agent_counts.clear();
        for (int n = lo; n <= hi; ++n) {
            config.agent_counts.push_back(n);
        }
    }
    if (root.has("strategies")) {
        const json& list = root.at("strategies");
        if (!list.is_array()) {
            throw InputError("strategies", "expected an array");
        }
        config.strategies.clear();
        for (const json& s : list) {
            const auto parsed = s.is_string() ? parse_strategy(s.get<std::string>()) : std::nullopt;
            if (!parsed) {
                throw InputError("strategies", "expected interior, boundary or circle");
            }
            config.strategies.push_back(*parsed);
        }
    }
    if (root.has("seed")) {
        config.seed = root.unsigned_integer("seed");
    }
    if (root.has("planners")) {
        const json& list = root.at("planners");
        if (!list.is_array()) {
            throw InputError("planners", "expected an array");
        }
        config.planners.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string path = "planners[" + std::to_string(i) + "]";
            const json& p = list[i];
            if (p.is_string()) {
                const std::string name = p.get<std::string>();
                if (name == "exhaustive") {
                    config.planners.push_back(PlannerSpec::exhaustive());
                } else {
                    try {
                        config.planners.push_back(PlannerSpec::greedy(name, parse_weights(name)));
                    } catch (const InputError& e) {
                        throw InputError(path, "unknown planner " + name);
                    }
                }
            } else {
                const ObjectReader r(p, path, {"name", "weights"});
                const std::string name = r.string("name");
                const json& w = r.at("weights");
                if (!w.is_array() || w.size() != 3 ||
                    !std::all_of(w.begin(), w.end(), [](const json& x) { return x.is_number(); })) {
                    throw InputError(r.path("weights"), "expected [alpha, beta, gamma]");
                }
                RewardWeights weights{w[0].get<double>(), w[1].get<double>(), w[2].get<double>()};
                config.planners.push_back(PlannerSpec::greedy(name, weights));
            }
        }
    }
    if (root.has("exhaustive_max_agents")) {
        config.exhaustive_max_agents = static_cast<int>(root.integer("exhaustive_max_agents"));
    }
    if (root.has("exhaustive_budget")) {
        config.exhaustive_budget = root.unsigned_integer("exhaustive_budget");
    }
    ScenarioTemplate& t = config.scenario;
    if (root.has("box_side")) {
        t.box_side = root.number("box_side");
    }
    t.circle_radius = root.has("circle_radius") ? root.number("circle_radius") : t.box_side / 4.0;
    if (root.has("nu0_max")) {
        t.nu0_max = root.number("nu0_max");
    }
    const MissionDefaults d =
        read_params(root.has("params") ? &root.at("params") : nullptr, "params", notices);
    t.noise = d.noise;
    t.t_max = d.t_max;
    t.cna_speed = d.cna_speed;
    t.agent_speed = d.agent_speed;
    t.horizon = static_cast<int>(std::llround(d.t_max / d.noise.dt));

    try {
        validate(config);
    } catch (const std::invalid_argument& e) {
        throw InputError("", e.what());
    }
    return config;
}

McConfig load_mc_config(const std::filesystem::path& path, std::vector<std::string>* notices) {
    return parse_mc_config(parse_text(read_file(path)), notices);
}

void write_trace_csv(std::ostream& out, const Scenario& scenario, const MissionResult& mission) {
    out << "# cna_planner " << kVersion << " mission trace\n";
    out << "# N: " << scenario.agent_count() << "\n";
    out << "# horizon: " << scenario.horizon << "\n";
    out << "k,cna_x,cna_y,nu_c";
    for (const AgentSpec& a : scenario.agents) {
        out << ",a" << a.id << "_x,a" << a.id << "_y,a" << a.id << "_nu";
    }
    out << '\n';
    const double dt = scenario.noise.dt;
    for (int k = 0; k <= scenario.horizon; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        out << k << ',' << num(mission.cna_path[idx].x) << ',' << num(mission.cna_path[idx].y)
            << ',' << num(mission.cna_trace[idx]);
        for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
            const Vec2 p = agent_position(scenario.agents[i], k, dt);
            out << ',' << num(p.x) << ',' << num(p.y) << ',' << num(mission.agent_traces[i][idx]);
        }
        out << '\n';
    }
}

void write_events_csv(std::ostream& out, const MissionResult& mission) {
    out << "# cna_planner " << kVersion << " mission events\n";
    out << "index,task,kind,start_step,end_step,tau,cna_variance,prior_variance,posterior_variance\n";
    for (std::size_t i = 0; i < mission.events.size(); ++i) {
        const TaskEvent& e = mission.events[i];
        out << i << ',' << e.task.id << ',' << (e.task.is_surface() ? "surface" : "aid") << ','
            << e.start_step << ',' << e.end_step << ',';
        if (e.task.is_surface()) {
            out << ",,,\n";
        } else {
            out << num(e.tau) << ',' << num(e.cna_variance) << ',' << num(e.prior_variance) << ','
                << num(e.posterior_variance) << '\n';
        }
    }
}

void write_plan_summary(std::ostream& out, const std::string& planner, const Scenario& scenario,
                        const MissionResult& mission) {
    std::vector<Task> tasks;
    for (const TaskEvent& e : mission.events) {
        tasks.push_back(e.task);
    }
    out << "# cna_planner " << kVersion << " plan summary\n";
    out << "# planner: " << planner << "\n";
    out << "# sequence: " << to_string(tasks) << "\n";
    out << "# feasible: " << (mission.feasible() ? "true" : "false") << "\n";
    out << "# surfacing_start: "
        << (mission.surface_start ? std::to_string(*mission.surface_start) : std::string("none"))
        << "\n";
    out << "# completion_time: " << num(mission.completion_time) << "\n";
    out << "# cost_Jprime: " << num(mission.cost) << "\n";
    out << "# cost_J: " << num(mission.cost_J) << "\n";
    out << "agent,nu0,aid_step,cost\n";
    for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
        out << scenario.agents[i].id << ',' << num(scenario.agents[i].initial_variance) << ','
            << (mission.aiding_steps[i] ? std::to_string(*mission.aiding_steps[i]) : std::string())
            << ',' << num(mission.agent_costs[i]) << '\n';
    }
}

}  // namespace cna::io
