// Acceptance suite: runs every criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is the number of failed criteria.

#include "bdf_oracle.hpp"

#include "esfem/bdf.hpp"
#include "esfem/chsystem.hpp"
#include "esfem/config.hpp"
#include "esfem/diagnostics.hpp"
#include "esfem/errors.hpp"
#include "esfem/experiments.hpp"
#include "esfem/geometry.hpp"
#include "esfem/presets.hpp"
#include "esfem/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

using namespace esfem;
using nlohmann::json;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int precision = 4)
{
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

std::string list(const std::vector<double>& v, int precision = 3)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i], precision);
    return out + "]";
}

void progress(const std::string& message)
{
    std::cerr << "  .. " << message << std::endl;
}

/// Every simulation of the suite, kept for the residual criterion and the summary file.
struct Ledger {
    std::vector<std::pair<std::string, RunSpec>> names;
    std::vector<const RunResult*> runs;
    json entries = json::array();

    void add(const std::string& name, const RunSpec& spec, const RunResult& r)
    {
        runs.push_back(&r);
        json j = to_json(spec, r);
        j["name"] = name;
        entries.push_back(j);
    }
};

constexpr double kTauFinest = 0.2 / 128.0;
/// A temporal row counts when its error exceeds the level-5 spatial floor by this factor.
constexpr double kPlateauFactor = 4.0;

class Suite {
public:
    explicit Suite(std::string out) : out_(std::move(out)) {}

    /// Manufactured runs shared by the spatial and temporal criteria.
    const RunResult& manufactured(int level, int order, double tau)
    {
        const auto key = std::make_tuple(level, order, tau);
        auto it = manufactured_.find(key);
        if (it != manufactured_.end()) return it->second;
        static const Scenario scenario = presets::product_decay(presets::manufactured_shape(), 0.5, 6.0);
        SimulationOptions o;
        o.mesh_level = level;
        o.bdf_order = order;
        o.tau = tau;
        o.t_end = 1.0;
        o.node_step = kTauFinest;
        o.track_energy = false;
        progress("manufactured level " + std::to_string(level) + " BDF" + std::to_string(order) + " tau " + fmt(tau));
        RunResult r = simulate(scenario, o);
        progress("  " + fmt(r.wall_seconds, 3) + " s, L2 " + fmt(combined_l2_error(r)) + ", H1 " +
                 fmt(combined_h1_error(r)));
        auto& stored = manufactured_.emplace(key, std::move(r)).first->second;
        ledger.add("manufactured", {level, order, tau}, stored);
        return stored;
    }

    const RunResult& keep(const std::string& name, const RunSpec& spec, RunResult r)
    {
        extra_.push_back(std::make_unique<RunResult>(std::move(r)));
        ledger.add(name, spec, *extra_.back());
        return *extra_.back();
    }

    const std::string& out() const { return out_; }
    Ledger ledger;

private:
    std::string out_;
    std::map<std::tuple<int, int, double>, RunResult> manufactured_;
    std::vector<std::unique_ptr<RunResult>> extra_;
};

Verdict spatial_convergence(Suite& suite)
{
    std::vector<double> h, l2, h1;
    double finest_seconds = 0.0;
    for (int level = 2; level <= 5; ++level) {
        const RunResult& r = suite.manufactured(level, 2, kTauFinest);
        h.push_back(r.h);
        l2.push_back(combined_l2_error(r));
        h1.push_back(combined_h1_error(r));
        finest_seconds = r.wall_seconds;
    }
    const auto l2_orders = eoc(l2, h).orders();
    const auto h1_orders = eoc(h1, h).orders();
    bool ok = finest_seconds <= 15 * 60;
    for (double p : l2_orders) ok = ok && p >= 1.7 && p <= 2.3;
    for (double p : h1_orders) ok = ok && p >= 0.9;
    return {ok, "L2 EOC " + list(l2_orders) + " in [1.7, 2.3], H1 EOC " + list(h1_orders) +
                    " >= 0.9, finest level " + fmt(finest_seconds, 3) + " s"};
}

struct TemporalTable {
    std::vector<double> tau, error, orders;
    /// EOCs of final-time differences between runs with successive steps on the same mesh
    std::vector<double> self_orders;
    std::vector<bool> used;
};

/// Rows whose finer error is within kPlateauFactor of the spatial floor are plateau rows.
TemporalTable temporal_table(Suite& suite, int order, double floor)
{
    TemporalTable t;
    std::vector<const RunResult*> runs;
    for (int i = 1; i <= 7; ++i) {
        const double tau = 0.2 / std::pow(2.0, i);
        runs.push_back(&suite.manufactured(5, order, tau));
        t.tau.push_back(tau);
        t.error.push_back(combined_l2_error(*runs.back()));
    }
    t.orders = eoc(t.error, t.tau).orders();
    for (std::size_t i = 0; i < t.orders.size(); ++i) t.used.push_back(t.error[i + 1] >= kPlateauFactor * floor);

    // all runs share the node trajectories, so final states live on the same mesh;
    // differences of successive runs give the time order without a reference bias
    std::vector<double> diff, steps;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        const StatePair& a = runs[i]->final_state;
        const StatePair& b = runs[i + 1]->final_state;
        diff.push_back((a.u - b.u).norm() / b.u.norm() + (a.w - b.w).norm() / b.w.norm());
        steps.push_back(t.tau[i]);
    }
    t.self_orders = eoc(diff, steps).orders();
    return t;
}

Verdict temporal_convergence(Suite& suite)
{
    // The level-5 spatial error floor: the smallest error any method attains on the finest mesh.
    double floor = std::numeric_limits<double>::infinity();
    for (int order = 1; order <= 3; ++order)
        for (int i = 1; i <= 7; ++i) floor = std::min(floor, combined_l2_error(suite.manufactured(5, order, 0.2 / std::pow(2.0, i))));
    const std::map<int, double> tolerance{{1, 0.3}, {2, 0.3}, {3, 0.4}};
    bool ok = true;
    std::string detail = "floor " + fmt(floor, 3);
    for (int order = 1; order <= 3; ++order) {
        const TemporalTable t = temporal_table(suite, order, floor);
        // judged on the finest row before the plateau; coarser rows are printed but pre-asymptotic
        std::optional<double> finest;
        for (std::size_t i = 0; i < t.orders.size(); ++i)
            if (t.used[i]) finest = t.orders[i];
        const bool order_ok = finest && std::abs(*finest - order) <= tolerance.at(order);
        ok = ok && order_ok;
        detail += "; BDF" + std::to_string(order) + " EOC " + list(t.orders) + ", last row above plateau " +
                  (finest ? fmt(*finest, 3) : std::string("none")) + " vs " + std::to_string(order) + " +- " +
                  fmt(tolerance.at(order)) + (order_ok ? "" : " MISSED") + " (successive differences: " +
                  list(t.self_orders) + ")";
    }
    return {ok, detail};
}

Verdict mass_conservation(const std::vector<const RunResult*>& runs)
{
    double worst = 0.0;
    for (const RunResult* r : runs) worst = std::max(worst, r->mass_drift);
    return {worst <= 1e-9, "max relative drift " + fmt(worst, 3) + " over " + std::to_string(runs.size()) +
                               " source-free double-well runs <= 1e-9"};
}

Verdict theta_identity(const ThetaComparison& c)
{
    return {c.identity_error <= 1e-9, "|w(0) - Ritz w(0)|_M / |Ritz w(0)|_M = " + fmt(c.identity_error, 3) +
                                          " <= 1e-9 (theta norm " + fmt(c.theta_norm, 3) + ")"};
}

Verdict geometry_oracles()
{
    const LevelSetSurface sphere = surfaces::sphere(1.0);
    const SurfaceMesh m = icosphere(4, 1.0, sphere, 0.0);
    const Assembler asmb(m);
    const AmbientField x1x2 = AmbientField::from_expression([](const auto& x, const auto&) { return x[0] * x[1]; });
    const Vector u = interpolate(m, x1x2, 0.0);
    const double rayleigh = u.dot(asmb.stiffness() * u) / u.dot(asmb.mass() * u);
    const double rayleigh_err = std::abs(rayleigh - 6.0) / 6.0;
    const double area_err = std::abs(discrete_area(m) - 4.0 * std::numbers::pi) / (4.0 * std::numbers::pi);

    const LevelSetSurface ellipsoid = surfaces::evolving_ellipsoid(presets::manufactured_shape());
    const double t = 0.3;
    const SurfaceMesh m0 = icosphere(4, 1.0, ellipsoid, 0.0);
    auto fd_error = [&](double d) {
        const SurfaceMesh minus = evolve_mesh(m0, ellipsoid, t - d, 60);
        const SurfaceMesh mid = evolve_mesh(minus, ellipsoid, t, 1);
        const SurfaceMesh plus = evolve_mesh(mid, ellipsoid, t + d, 1);
        const CsrMatrix mdot = assemble_mdot(mid);
        const CsrMatrix mp = assemble_mass(plus), mm = assemble_mass(minus);
        double e = 0.0;
        for (std::size_t k = 0; k < mdot.values().size(); ++k)
            e = std::max(e, std::abs((mp.values()[k] - mm.values()[k]) / (2.0 * d) - mdot.values()[k]));
        return e;
    };
    const double e_coarse = fd_error(2e-4), e_fine = fd_error(1e-4);
    const double fd_slope = std::log2(e_coarse / e_fine);

    const bool rayleigh_ok = rayleigh_err <= 0.01, area_ok = area_err <= 5e-4;
    const bool fd_ok = std::abs(fd_slope - 2.0) <= 0.3;
    const double area5 = std::abs(discrete_area(icosphere(5, 1.0, sphere, 0.0)) - 4.0 * std::numbers::pi) /
                         (4.0 * std::numbers::pi);
    auto mark = [](bool pass) { return pass ? "" : " MISSED"; };
    return {rayleigh_ok && area_ok && fd_ok,
            "level 4: Rayleigh quotient " + fmt(rayleigh, 6) + " (rel err " + fmt(rayleigh_err, 3) + " <= 0.01" +
                mark(rayleigh_ok) + "), area rel err " + fmt(area_err, 3) + " <= 5e-4" + mark(area_ok) +
                " (level 5: " + fmt(area5, 3) + "), Mdot central difference error " + fmt(e_fine, 3) +
                " at 1e-4, slope " + fmt(fd_slope, 3) + " in [1.7, 2.3]" + mark(fd_ok)};
}

Verdict ritz_rates()
{
    const LevelSetSurface sphere = surfaces::sphere(1.0);
    const AmbientField x1x2 = AmbientField::from_expression([](const auto& x, const auto&) { return x[0] * x[1]; });
    std::vector<double> h, l2, h1;
    for (int level = 2; level <= 5; ++level) {
        const SurfaceMesh m = icosphere(level, 1.0, sphere, 0.0);
        const Assembler asmb(m);
        const NormPair e = field_error(asmb, sphere, ritz_map(asmb, sphere, x1x2, 0.0), x1x2, 0.0);
        h.push_back(mesh_quality(m).max_h);
        l2.push_back(e.l2);
        h1.push_back(e.h1);
    }
    const auto l2_orders = eoc(l2, h).orders();
    const auto h1_orders = eoc(h1, h).orders();
    bool ok = true;
    for (double p : l2_orders) ok = ok && std::abs(p - 2.0) <= 0.2;
    for (double p : h1_orders) ok = ok && std::abs(p - 1.0) <= 0.2;
    return {ok, "L2 slopes " + list(l2_orders) + " (2 +- 0.2), H1 slopes " + list(h1_orders) + " (1 +- 0.2)"};
}

Verdict energy_behaviour(const RunResult& r, double seconds)
{
    const double period = 0.2;
    bool up = false, down = false;
    for (std::size_t i = 1; i < r.times.size() && r.times[i] <= period + 1e-12; ++i) {
        up = up || r.energy[i] > r.energy[i - 1];
        down = down || r.energy[i] < r.energy[i - 1];
    }
    const auto [lo, hi] = std::minmax_element(r.energy.begin(), r.energy.end());
    const double range = *hi - *lo;
    const double dt = r.times[1] - r.times[0];
    const auto shift = static_cast<std::size_t>(std::lround(period / dt));
    // E(t) against E(t + P) with both points inside the last two periods
    const double window_start = r.times.back() - 2.0 * period;
    double gap = 0.0;
    for (std::size_t i = 0; i + shift < r.times.size(); ++i)
        if (r.times[i] >= window_start - 1e-12) gap = std::max(gap, std::abs(r.energy[i] - r.energy[i + shift]));
    const bool ok = up && down && gap <= 0.2 * range && seconds <= 600;
    return {ok, std::string("on [0, 0.2] increase ") + (up ? "yes" : "no") + ", decrease " + (down ? "yes" : "no") +
                    "; max |E(t) - E(t + 0.2)| over the final two periods " + fmt(gap, 3) + " = " +
                    fmt(100.0 * gap / range, 3) + "% of range " + fmt(range, 4) + " (<= 20%); " + fmt(seconds, 3) +
                    " s"};
}

Verdict bdf_coefficient_suite()
{
    bool exact = true, identities = true;
    double worst_sum = 0.0;
    for (int s = 1; s <= 5; ++s) {
        const BdfScheme scheme = bdf_coefficients(s);
        const test::Poly d = test::delta_series(s), g = test::gamma_series(s);
        if (scheme.delta.size() != d.size() || scheme.gamma.size() != g.size()) return {false, "wrong lengths"};
        // each double must be the correctly rounded value of the rational coefficient
        test::Rational dsum, gsum;
        for (std::size_t j = 0; j < d.size(); ++j) {
            exact = exact && scheme.delta[j] == d[j].value();
            dsum = dsum + d[j];
        }
        for (std::size_t j = 0; j < g.size(); ++j) {
            exact = exact && scheme.gamma[j] == g[j].value();
            gsum = gsum + g[j];
        }
        identities = identities && dsum == test::Rational(0) && gsum == test::Rational(1);
        // the rounded doubles satisfy the identities up to summation round-off
        double delta_at_one = 0.0, gamma_at_one = 0.0, scale = 0.0;
        for (double v : scheme.delta) {
            delta_at_one += v;
            scale += std::abs(v);
        }
        for (double v : scheme.gamma) gamma_at_one += v;
        worst_sum = std::max({worst_sum, std::abs(delta_at_one) / scale, std::abs(gamma_at_one - 1.0)});
    }
    const double bound = 8.0 * std::numeric_limits<double>::epsilon();
    const bool ok = exact && identities && worst_sum <= bound;
    return {ok, std::string("s = 1..5 coefficients ") + (exact ? "equal" : "DIFFER FROM") +
                    " the rounded rational expansion; rational delta(1) = 0 and gamma(1) = 1 " +
                    (identities ? "hold" : "FAIL") + "; double sums off by " + fmt(worst_sum, 3) + " relative (<= " +
                    fmt(bound, 3) + ")"};
}

Verdict residuals(const Ledger& ledger)
{
    double worst = 0.0;
    std::size_t steps = 0;
    for (const RunResult* r : ledger.runs) {
        for (double v : r->step_residuals) worst = std::max(worst, v);
        steps += r->step_residuals.size();
    }
    return {worst <= 1e-10 && steps > 0, "max relative block residual " + fmt(worst, 3) + " over " +
                                             std::to_string(steps) + " steps of " +
                                             std::to_string(ledger.runs.size()) + " runs <= 1e-10"};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance suite"};
    std::string out = "acceptance";
    std::vector<int> only;
    app.add_option("--output", out, "directory for the acceptance summary");
    app.add_option("--only", only, "run the listed criteria only")->delimiter(',');
    CLI11_PARSE(app, argc, argv);
    std::filesystem::create_directories(out);
    auto wanted = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };

    Suite suite(out);
    std::map<int, Verdict> verdicts;
    std::map<int, std::string> titles{{1, "spatial convergence"},     {2, "temporal convergence"},
                                      {3, "discrete mass conservation"}, {4, "theta identity"},
                                      {5, "geometry and operator oracles"}, {6, "Ritz map rates"},
                                      {7, "energy behaviour"},         {8, "BDF coefficients"},
                                      {9, "block-solve residuals"}};
    auto run = [&](int c, const std::function<Verdict()>& fn) {
        if (!wanted(c)) return;
        progress("criterion " + std::to_string(c) + ": " + titles[c]);
        try {
            verdicts[c] = fn();
        } catch (const std::exception& e) {
            verdicts[c] = {false, std::string("exception: ") + e.what()};
        }
    };

    std::vector<const RunResult*> source_free;
    run(8, bdf_coefficient_suite);
    run(5, geometry_oracles);
    run(6, ritz_rates);
    run(1, [&] { return spatial_convergence(suite); });
    run(2, [&] { return temporal_convergence(suite); });
    run(7, [&] {
        const Scenario sc = presets::cosine_mixture(presets::energy_shape(), 0.1, 0.1);
        SimulationOptions o;
        o.mesh_level = 3;
        o.bdf_order = 2;
        o.t_end = 1.0;
        // Explicitly extrapolated g makes BDF2 linearly unstable at tau = 1e-3 on this mesh;
        // that attempt is reported, the criterion is judged at tau = 1e-4.
        o.tau = 1e-3;
        std::string coarse;
        try {
            const RunResult r = simulate(sc, o);
            coarse = "tau 1e-3 completed";
        } catch (const Error& e) {
            coarse = std::string("tau 1e-3 diverged (") + e.what() + ")";
        }
        o.tau = 1e-4;
        const RunResult& r = suite.keep("energy", {3, 2, 1e-4}, simulate(sc, o));
        source_free.push_back(&r);
        std::ofstream trace(out + "/energy_trace.csv");
        trace << std::setprecision(15) << "t,energy\n";
        for (std::size_t i = 0; i < r.times.size(); ++i) trace << r.times[i] << ',' << r.energy[i] << '\n';
        Verdict v = energy_behaviour(r, r.wall_seconds);
        v.detail += "; tau 1e-4, " + coarse;
        return v;
    });
    run(4, [&] {
        ExperimentConfig c;
        c.surface = {5.0, 0.5, 5.0};
        c.problem.preset = "polynomial_datum";
        c.discretization.mesh_levels = {4};
        c.discretization.bdf_orders = {2};
        c.discretization.time_steps = {0.0125};
        c.discretization.final_time = 5.0;
        CommandOptions opts;
        opts.output_dir = out + "/theta";
        opts.quiet = true;
        ThetaComparison cmp = run_theta_comparison(c, opts);
        source_free.push_back(&suite.keep("theta_off", {4, 2, 0.0125}, std::move(cmp.without_theta)));
        source_free.push_back(&suite.keep("theta_on", {4, 2, 0.0125}, std::move(cmp.with_theta)));
        return theta_identity(cmp);
    });
    run(3, [&] {
        const Scenario poly = presets::polynomial_datum(presets::theta_shape());
        const Scenario cosine = presets::cosine_mixture(presets::energy_shape(), 0.1, 0.1);
        for (int order = 1; order <= 3; ++order) {
            SimulationOptions o;
            o.mesh_level = 3;
            o.bdf_order = order;
            o.start = StartMode::cascade;
            o.tau = 0.0125;
            o.t_end = 5.0;
            source_free.push_back(&suite.keep("mass_polynomial_bdf" + std::to_string(order), {3, order, o.tau},
                                              simulate(poly, o)));
            o.tau = 1e-4;
            o.t_end = 0.2;
            source_free.push_back(&suite.keep("mass_cosine_bdf" + std::to_string(order), {3, order, o.tau},
                                              simulate(cosine, o)));
        }
        return mass_conservation(source_free);
    });
    run(9, [&] { return residuals(suite.ledger); });

    json summary{{"schema_version", kSummarySchemaVersion}, {"runs", suite.ledger.entries}};
    int failures = 0;
    for (const auto& [c, v] : verdicts) {
        summary["criteria"][std::to_string(c)] = {{"pass", v.pass}, {"detail", v.detail}};
        failures += v.pass ? 0 : 1;
    }
    std::ofstream(out + "/acceptance_summary.json") << summary.dump(2) << '\n';

    std::cout << "\nacceptance results\n";
    for (const auto& [c, v] : verdicts)
        std::cout << "criterion " << c << " [" << (v.pass ? "PASS" : "FAIL") << "] " << titles[c] << ": " << v.detail
                  << '\n';
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures;
}
