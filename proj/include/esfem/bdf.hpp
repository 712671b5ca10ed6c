#pragma once

#include "esfem/assembly.hpp"
#include "esfem/chsystem.hpp"
#include "esfem/linsolve.hpp"
#include "esfem/problem.hpp"
#include "esfem/types.hpp"

#include <deque>
#include <vector>

namespace esfem {

/// Linearly implicit BDF method of order s: delta_0..delta_s from
/// delta(z) = sum_{l=1}^{s} (1 - z)^l / l and gamma_0..gamma_{s-1} from
/// gamma(z) = (1 - (1 - z)^s) / z.
struct BdfScheme {
    int order = 1;
    std::vector<double> delta;
    std::vector<double> gamma;
};

/// Throws ConfigError for s outside 1..5.
BdfScheme bdf_coefficients(int s);

/// Past solutions u^{n-1}, ..., u^{n-s} (newest first) together with M(t_j) u^j.
class HistoryRing {
public:
    explicit HistoryRing(int capacity);

    /// Adds the newest level; the oldest drops out once the ring is full.
    /// Throws ConfigError if the time spacing is not uniform.
    void push(double t, Vector u, Vector mass_u);

    int capacity() const { return capacity_; }
    int size() const { return static_cast<int>(entries_.size()); }
    bool full() const { return size() == capacity_; }

    /// j = 0 is the newest entry.
    const Vector& u(int j) const { return entries_.at(j).u; }
    const Vector& mass_u(int j) const { return entries_.at(j).mass_u; }
    double time(int j) const { return entries_.at(j).t; }

private:
    struct Entry {
        double t;
        Vector u;
        Vector mass_u;
    };
    int capacity_;
    std::deque<Entry> entries_;
};

/// sum_j gamma_j u^{n-1-j}. Throws ConfigError if fewer than s levels are stored.
Vector extrapolate(const HistoryRing& history, const BdfScheme& scheme);

struct StepResult {
    StatePair state;
    Vector mass_u;
    BlockSolution solve;
};

/// One step to t_n = assembler.mesh().time with M = M(t_n), A = A(t_n):
///   delta_0 M u + tau A w = tau f(u~) - sum_{j>=1} delta_j (M u)^{n-j}
///   -eps A u + M w       = g(u~) / eps + theta
/// Throws BlowUpError for a non-finite extrapolant or solution.
StepResult bdf_step(const Assembler& assembler, const CsrMatrix& mass, const CsrMatrix& stiffness,
                    const BdfScheme& scheme, const HistoryRing& history, const ProblemSpec& problem,
                    const Vector& theta, double tau, BlockSolver& solver);

}  // namespace esfem
