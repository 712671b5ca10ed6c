#include "esfem/bdf.hpp"

#include "esfem/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace esfem {

namespace {

// Binomial coefficient for n <= 5.
int binomial(int n, int k)
{
    int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

BdfScheme bdf_coefficients(int s)
{
    if (s < 1 || s > 5) throw ConfigError("BDF order must be between 1 and 5");
    // 60 is a common multiple of 1..5, so 60 delta_j is an integer and each
    // coefficient is a single correctly rounded division.
    constexpr int denominator = 60;
    std::array<int, 6> numerator{};
    for (int l = 1; l <= s; ++l) {
        for (int j = 0; j <= l; ++j) {
            const int sign = j % 2 == 0 ? 1 : -1;
            numerator[j] += sign * binomial(l, j) * (denominator / l);
        }
    }
    BdfScheme scheme;
    scheme.order = s;
    for (int j = 0; j <= s; ++j) scheme.delta.push_back(static_cast<double>(numerator[j]) / denominator);
    // (1 - (1 - z)^s) / z = sum_{j=0}^{s-1} (-1)^j C(s, j+1) z^j
    for (int j = 0; j < s; ++j) scheme.gamma.push_back((j % 2 == 0 ? 1.0 : -1.0) * binomial(s, j + 1));
    return scheme;
}

HistoryRing::HistoryRing(int capacity) : capacity_(capacity)
{
    if (capacity < 1) throw ConfigError("history capacity must be positive");
}

void HistoryRing::push(double t, Vector u, Vector mass_u)
{
    if (!entries_.empty()) {
        const double step = t - entries_.front().t;
        if (!(step > 0.0)) throw ConfigError("history times must be strictly increasing");
        if (entries_.size() >= 2) {
            const double previous = entries_[0].t - entries_[1].t;
            if (std::abs(step - previous) > 1e-9 * std::max(1.0, std::abs(t)))
                throw ConfigError("history requires a uniform time step");
        }
    }
    entries_.push_front({t, std::move(u), std::move(mass_u)});
    if (size() > capacity_) entries_.pop_back();
}

Vector extrapolate(const HistoryRing& history, const BdfScheme& scheme)
{
    if (history.size() < scheme.order) throw ConfigError("insufficient history for extrapolation");
    Vector x = scheme.gamma[0] * history.u(0);
    for (int j = 1; j < scheme.order; ++j) x += scheme.gamma[j] * history.u(j);
    return x;
}

StepResult bdf_step(const Assembler& assembler, const CsrMatrix& mass, const CsrMatrix& stiffness,
                    const BdfScheme& scheme, const HistoryRing& history, const ProblemSpec& problem,
                    const Vector& theta, double tau, BlockSolver& solver)
{
    if (!(tau > 0.0)) throw ConfigError("time step must be positive");
    const double t = assembler.mesh().time;
    if (std::abs(t - (history.time(0) + tau)) > 1e-9 * std::max(1.0, std::abs(t)))
        throw ConfigError("mesh time does not match the history and time step");
    const Vector u_tilde = extrapolate(history, scheme);
    if (!u_tilde.allFinite()) {
        std::ostringstream msg;
        msg << "non-finite extrapolated state at t = " << t;
        throw BlowUpError(msg.str());
    }
    const RhsVectors loads = rhs_vectors(assembler, problem, u_tilde, t);

    Vector rhs_u = tau * loads.f;
    for (int j = 1; j <= scheme.order; ++j) rhs_u -= scheme.delta[j] * history.mass_u(j - 1);
    const double eps = problem.epsilon;
    const Vector rhs_w = loads.g + theta;

    // With w = eps w_hat both rows become the block system with coupling tau eps.
    StepResult out;
    out.solve = solver.solve(scheme.delta[0], tau * eps, mass, stiffness, rhs_u, Vector(rhs_w / eps));
    out.solve.w *= eps;
    out.state.t = t;
    out.state.u = out.solve.u;
    out.state.w = out.solve.w;
    if (!out.state.u.allFinite() || !out.state.w.allFinite()) {
        std::ostringstream msg;
        msg << "non-finite solution at t = " << t;
        throw BlowUpError(msg.str());
    }
    out.mass_u = mass * out.state.u;
    return out;
}

}  // namespace esfem
