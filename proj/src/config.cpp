#include "esfem/config.hpp"

#include "esfem/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

namespace esfem {

namespace {

template <class E>
using Names = std::vector<std::pair<E, const char*>>;

const Names<ThetaMode>& theta_names()
{
    static const Names<ThetaMode> n{{ThetaMode::automatic, "automatic"},
                                    {ThetaMode::with_theta, "with_theta"},
                                    {ThetaMode::without_theta, "without_theta"}};
    return n;
}
const Names<InitialMode>& initial_names()
{
    static const Names<InitialMode> n{{InitialMode::interpolation, "interpolation"}, {InitialMode::ritz, "ritz"}};
    return n;
}
const Names<StartMode>& start_names()
{
    static const Names<StartMode> n{
        {StartMode::automatic, "automatic"}, {StartMode::exact, "exact"}, {StartMode::cascade, "cascade"}};
    return n;
}
const Names<BlockMethod>& solver_names()
{
    static const Names<BlockMethod> n{
        {BlockMethod::factorized, "factorized"}, {BlockMethod::direct_lu, "direct_lu"}, {BlockMethod::gmres, "gmres"}};
    return n;
}
const Names<ManufacturedRoute>& route_names()
{
    static const Names<ManufacturedRoute> n{{ManufacturedRoute::closed_form, "closed_form"},
                                            {ManufacturedRoute::generic, "generic"}};
    return n;
}
const Names<EnergyConvention>& energy_names()
{
    static const Names<EnergyConvention> n{{EnergyConvention::scaled, "scaled"},
                                           {EnergyConvention::unscaled, "unscaled"}};
    return n;
}

template <class E>
const char* name_of(const Names<E>& names, E value)
{
    for (const auto& [v, n] : names)
        if (v == value) return n;
    return "?";
}

const std::vector<std::string> kPresets{"product_decay", "cosine_mixture", "polynomial_datum"};

class Reader {
public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    void check_keys(const YAML::Node& map, const std::string& where, const std::set<std::string>& allowed)
    {
        for (const auto& kv : map) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.count(key)) errors_.push_back("unknown key '" + where + key + "'");
        }
    }

    template <class T>
    void scalar(const YAML::Node& map, const std::string& where, const char* key, T& out)
    {
        const YAML::Node node = map[key];
        if (!node) return;
        try {
            if (!node.IsScalar()) throw YAML::Exception(node.Mark(), "expected a scalar");
            out = node.as<T>();
        } catch (const YAML::Exception&) {
            errors_.push_back("'" + where + key + "' has an invalid value");
        }
    }

    template <class T>
    void sequence(const YAML::Node& map, const std::string& where, const char* key, std::vector<T>& out)
    {
        const YAML::Node node = map[key];
        if (!node) return;
        try {
            std::vector<T> values;
            if (node.IsScalar()) {
                values.push_back(node.as<T>());
            } else if (node.IsSequence()) {
                for (const auto& item : node) values.push_back(item.as<T>());
            } else {
                throw YAML::Exception(node.Mark(), "expected a list");
            }
            out = std::move(values);
        } catch (const YAML::Exception&) {
            errors_.push_back("'" + where + key + "' must be a list of numbers");
        }
    }

    template <class E>
    void choice(const YAML::Node& map, const std::string& where, const char* key, const Names<E>& names, E& out)
    {
        std::string text;
        bool given = static_cast<bool>(map[key]);
        scalar(map, where, key, text);
        if (!given) return;
        for (const auto& [v, n] : names) {
            if (text == n) {
                out = v;
                return;
            }
        }
        std::string allowed;
        for (const auto& [v, n] : names) allowed += std::string(allowed.empty() ? "" : ", ") + n;
        errors_.push_back("'" + where + key + "' must be one of: " + allowed);
    }

private:
    std::vector<std::string>& errors_;
};

std::string number(double v)
{
    std::array<char, 64> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), r.ptr);
}

template <class T>
std::string list(const std::vector<T>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_floating_point_v<T>)
            s += number(v[i]);
        else
            s += std::to_string(v[i]);
    }
    return s + "]";
}

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

const char* to_string(ThetaMode mode) { return name_of(theta_names(), mode); }
const char* to_string(InitialMode mode) { return name_of(initial_names(), mode); }
const char* to_string(StartMode mode) { return name_of(start_names(), mode); }
const char* to_string(BlockMethod method) { return name_of(solver_names(), method); }
const char* to_string(ManufacturedRoute route) { return name_of(route_names(), route); }
const char* to_string(EnergyConvention convention) { return name_of(energy_names(), convention); }

ExperimentConfig parse_config(const std::string& text)
{
    std::vector<std::string> errors;
    ExperimentConfig c;
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed YAML: ") + e.what());
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    if (!root.IsMap()) throw ConfigError("configuration must be a mapping of sections");

    Reader r(errors);
    r.check_keys(root, "", {"surface", "problem", "discretization", "output"});
    auto section = [&](const char* name) {
        YAML::Node node = root[name];
        if (node && !node.IsMap()) {
            errors.push_back(std::string("section '") + name + "' must be a mapping");
            return YAML::Node(YAML::NodeType::Map);
        }
        return node ? node : YAML::Node(YAML::NodeType::Map);
    };

    const YAML::Node s = section("surface");
    r.check_keys(s, "surface.", {"radius", "amplitude", "period"});
    r.scalar(s, "surface.", "radius", c.surface.radius);
    r.scalar(s, "surface.", "amplitude", c.surface.amplitude);
    r.scalar(s, "surface.", "period", c.surface.period);

    const YAML::Node p = section("problem");
    r.check_keys(p, "problem.",
                 {"preset", "epsilon", "decay_rate", "amplitude", "route", "theta_mode", "initial_mode"});
    r.scalar(p, "problem.", "preset", c.problem.preset);
    r.scalar(p, "problem.", "epsilon", c.problem.epsilon);
    r.scalar(p, "problem.", "decay_rate", c.problem.decay_rate);
    r.scalar(p, "problem.", "amplitude", c.problem.amplitude);
    r.choice(p, "problem.", "route", route_names(), c.problem.route);
    r.choice(p, "problem.", "theta_mode", theta_names(), c.problem.theta_mode);
    r.choice(p, "problem.", "initial_mode", initial_names(), c.problem.initial_mode);

    const YAML::Node d = section("discretization");
    r.check_keys(d, "discretization.",
                 {"mesh_levels", "bdf_orders", "time_steps", "final_time", "node_step", "start", "solver",
                  "solver_tolerance", "sweep"});
    r.sequence(d, "discretization.", "mesh_levels", c.discretization.mesh_levels);
    r.sequence(d, "discretization.", "bdf_orders", c.discretization.bdf_orders);
    r.sequence(d, "discretization.", "time_steps", c.discretization.time_steps);
    r.scalar(d, "discretization.", "final_time", c.discretization.final_time);
    r.scalar(d, "discretization.", "node_step", c.discretization.node_step);
    r.choice(d, "discretization.", "start", start_names(), c.discretization.start);
    r.choice(d, "discretization.", "solver", solver_names(), c.discretization.solver);
    r.scalar(d, "discretization.", "solver_tolerance", c.discretization.solver_tolerance);
    r.scalar(d, "discretization.", "sweep", c.discretization.sweep);

    const YAML::Node o = section("output");
    r.check_keys(o, "output.", {"directory", "vtk_every", "snapshot_times", "energy_convention"});
    r.scalar(o, "output.", "directory", c.output.directory);
    r.scalar(o, "output.", "vtk_every", c.output.vtk_every);
    r.sequence(o, "output.", "snapshot_times", c.output.snapshot_times);
    r.choice(o, "output.", "energy_convention", energy_names(), c.output.energy_convention);

    for (auto& e : validation_errors(c)) errors.push_back(std::move(e));
    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot read configuration '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::vector<std::string> validation_errors(const ExperimentConfig& c)
{
    std::vector<std::string> e;
    auto positive = [&](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) e.push_back(std::string(what) + " must be positive");
    };
    positive(c.surface.radius, "surface.radius");
    if (!(std::abs(c.surface.amplitude) < 1.0)) e.push_back("surface.amplitude must lie in (-1, 1)");
    if (!(c.surface.period >= 0.0)) e.push_back("surface.period must be non-negative");
    if (std::find(kPresets.begin(), kPresets.end(), c.problem.preset) == kPresets.end())
        e.push_back("problem.preset '" + c.problem.preset +
                    "' is unknown (product_decay, cosine_mixture, polynomial_datum)");
    positive(c.problem.epsilon, "problem.epsilon");
    if (!std::isfinite(c.problem.decay_rate)) e.push_back("problem.decay_rate must be finite");
    if (!std::isfinite(c.problem.amplitude)) e.push_back("problem.amplitude must be finite");

    const auto& d = c.discretization;
    if (d.mesh_levels.empty()) e.push_back("discretization.mesh_levels must not be empty");
    for (int l : d.mesh_levels)
        if (l < 0 || l > 8) e.push_back("discretization.mesh_levels entries must lie in [0, 8]");
    for (std::size_t i = 1; i < d.mesh_levels.size(); ++i)
        if (d.mesh_levels[i] <= d.mesh_levels[i - 1])
            e.push_back("discretization.mesh_levels must be strictly increasing");
    if (d.bdf_orders.empty()) e.push_back("discretization.bdf_orders must not be empty");
    for (int s : d.bdf_orders)
        if (s < 1 || s > 5) e.push_back("discretization.bdf_orders entries must lie in [1, 5]");
    if (d.time_steps.empty()) e.push_back("discretization.time_steps must not be empty");
    for (double tau : d.time_steps) positive(tau, "discretization.time_steps entries");
    for (std::size_t i = 1; i < d.time_steps.size(); ++i)
        if (!(d.time_steps[i] < d.time_steps[i - 1]))
            e.push_back("discretization.time_steps must be strictly decreasing");
    if (!(d.final_time >= 0.0)) e.push_back("discretization.final_time must be non-negative");
    for (double tau : d.time_steps) {
        if (!(tau > 0.0)) continue;
        try {
            step_count(d.final_time, tau);
        } catch (const ConfigError&) {
            e.push_back("discretization.final_time " + number(d.final_time) + " is not a multiple of time step " +
                        number(tau));
        }
    }
    if (!(d.node_step >= 0.0)) e.push_back("discretization.node_step must be non-negative");
    if (d.node_step > 0.0) {
        for (double tau : d.time_steps) {
            const double ratio = tau / d.node_step;
            if (ratio < 1.0 - 1e-12 || std::abs(ratio - std::round(ratio)) > 1e-8 * ratio)
                e.push_back("time step " + number(tau) + " is not a multiple of discretization.node_step");
        }
    }
    positive(d.solver_tolerance, "discretization.solver_tolerance");
    if (d.sweep != "tables" && d.sweep != "full") e.push_back("discretization.sweep must be 'tables' or 'full'");

    if (c.output.vtk_every < 0) e.push_back("output.vtk_every must be non-negative");
    if (c.output.directory.empty()) e.push_back("output.directory must not be empty");
    for (double t : c.output.snapshot_times)
        if (!(t >= 0.0) || t > d.final_time) e.push_back("output.snapshot_times must lie in [0, final_time]");

    const bool manufactured = c.problem.preset == "product_decay";
    if (!manufactured && d.start == StartMode::exact)
        e.push_back("discretization.start 'exact' requires the product_decay preset");
    if (c.problem.preset == "cosine_mixture" && c.problem.theta_mode == ThetaMode::with_theta)
        e.push_back("problem.theta_mode 'with_theta' is unavailable for cosine_mixture (w(., 0) unknown)");
    return e;
}

std::string to_yaml(const ExperimentConfig& c)
{
    std::ostringstream y;
    y << "surface:\n"
      << "  radius: " << number(c.surface.radius) << "\n"
      << "  amplitude: " << number(c.surface.amplitude) << "\n"
      << "  period: " << number(c.surface.period) << "\n"
      << "problem:\n"
      << "  preset: " << c.problem.preset << "\n"
      << "  epsilon: " << number(c.problem.epsilon) << "\n"
      << "  decay_rate: " << number(c.problem.decay_rate) << "\n"
      << "  amplitude: " << number(c.problem.amplitude) << "\n"
      << "  route: " << to_string(c.problem.route) << "\n"
      << "  theta_mode: " << to_string(c.problem.theta_mode) << "\n"
      << "  initial_mode: " << to_string(c.problem.initial_mode) << "\n"
      << "discretization:\n"
      << "  mesh_levels: " << list(c.discretization.mesh_levels) << "\n"
      << "  bdf_orders: " << list(c.discretization.bdf_orders) << "\n"
      << "  time_steps: " << list(c.discretization.time_steps) << "\n"
      << "  final_time: " << number(c.discretization.final_time) << "\n"
      << "  node_step: " << number(c.discretization.node_step) << "\n"
      << "  start: " << to_string(c.discretization.start) << "\n"
      << "  solver: " << to_string(c.discretization.solver) << "\n"
      << "  solver_tolerance: " << number(c.discretization.solver_tolerance) << "\n"
      << "  sweep: " << c.discretization.sweep << "\n"
      << "output:\n"
      << "  directory: " << quoted(c.output.directory) << "\n"
      << "  vtk_every: " << c.output.vtk_every << "\n"
      << "  snapshot_times: " << list(c.output.snapshot_times) << "\n"
      << "  energy_convention: " << to_string(c.output.energy_convention) << "\n";
    return y.str();
}

std::string config_hash(const ExperimentConfig& config)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : to_yaml(config)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

EllipsoidShape make_shape(const ExperimentConfig& config)
{
    EllipsoidShape shape;
    shape.radius = config.surface.radius;
    shape.amplitude = config.surface.period > 0.0 ? config.surface.amplitude : 0.0;
    shape.omega = config.surface.period > 0.0 ? 2.0 * std::numbers::pi / config.surface.period : 0.0;
    return shape;
}

Scenario make_scenario(const ExperimentConfig& config)
{
    const EllipsoidShape shape = make_shape(config);
    const auto& p = config.problem;
    Scenario s;
    if (p.preset == "product_decay")
        s = presets::product_decay(shape, p.epsilon, p.decay_rate, p.route);
    else if (p.preset == "cosine_mixture")
        s = presets::cosine_mixture(shape, p.epsilon, p.amplitude);
    else if (p.preset == "polynomial_datum")
        s = presets::polynomial_datum(shape, p.epsilon);
    else
        throw ConfigError("unknown problem preset '" + p.preset + "'");
    s.problem.theta_mode = p.theta_mode;
    s.problem.initial_mode = p.initial_mode;
    return s;
}

SimulationOptions make_options(const ExperimentConfig& config, int level, int order, double tau)
{
    const auto& d = config.discretization;
    SimulationOptions o;
    o.mesh_level = level;
    o.bdf_order = order;
    o.tau = tau;
    o.t_end = d.final_time;
    o.node_step = d.node_step;
    if (o.node_step == 0.0) {
        const double finest = *std::min_element(d.time_steps.begin(), d.time_steps.end());
        bool multiples = true;
        for (double t : d.time_steps) multiples = multiples && std::abs(t / finest - std::round(t / finest)) <= 1e-8 * t / finest;
        o.node_step = multiples ? finest : tau;
    }
    o.start = d.start;
    o.solver = d.solver;
    o.solver_tolerance = d.solver_tolerance;
    o.energy_convention = config.output.energy_convention;
    return o;
}

}  // namespace esfem
