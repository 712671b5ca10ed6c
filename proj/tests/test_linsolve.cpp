#include "support.hpp"

#include "esfem/chsystem.hpp"
#include "esfem/errors.hpp"
#include "esfem/linsolve.hpp"

#include <doctest.h>

#include <random>

using namespace esfem;

namespace {

struct Pair {
    CsrMatrix mass;
    CsrMatrix stiffness;
};

Pair matrices(int level)
{
    const SurfaceMesh m = test::unit_sphere_mesh(level);
    const Assembler a(m);
    return {a.mass(), a.stiffness()};
}

// Dense reference solve of [[d0 M, tau A], [-A, M]] (u, w) = (ru, rw).
std::pair<Vector, Vector> dense_block_solve(double d0, double tau, const Pair& p, const Vector& ru, const Vector& rw)
{
    const Eigen::Index n = p.mass.rows();
    Eigen::MatrixXd big(2 * n, 2 * n);
    big << d0 * p.mass.to_dense(), tau * p.stiffness.to_dense(), -p.stiffness.to_dense(), p.mass.to_dense();
    Vector rhs(2 * n);
    rhs << ru, rw;
    const Vector x = big.partialPivLu().solve(rhs);
    return {x.head(n), x.tail(n)};
}

}  // namespace

TEST_CASE("SPD solvers agree with each other")
{
    const Pair p = matrices(3);
    const CsrMatrix k = linear_combination(1.0, p.mass, 1.0, p.stiffness);
    const Vector b = Vector::Random(k.rows());
    SolveReport cg_report, direct_report;
    const Vector x_cg = solve_spd(k, b, {}, &cg_report);
    SpdOptions direct;
    direct.method = SpdOptions::Method::direct;
    const Vector x_direct = solve_spd(k, b, direct, &direct_report);
    CHECK(cg_report.residual < 1e-12);
    CHECK(direct_report.residual < 1e-12);
    CHECK((x_cg - x_direct).norm() < 1e-9 * x_direct.norm());
}

TEST_CASE("CG reports non-convergence")
{
    const Pair p = matrices(3);
    SpdOptions o;
    o.max_iterations = 2;
    o.tolerance = 1e-14;
    CHECK_THROWS_AS(solve_spd(p.stiffness, Vector::Random(p.mass.rows()), o), SolverError);
}

TEST_CASE("GMRES solves a nonsymmetric dense system")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const int n = 40;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = uni(rng) + (i == j ? 8.0 : 0.0);
    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = uni(rng);
    GmresOptions o;
    o.restart = 10;
    o.tolerance = 1e-12;
    const GmresResult r = gmres([&](const Vector& x) { return Vector(a * x); }, [](const Vector& x) { return x; }, b,
                                Vector::Zero(n), o);
    CHECK(r.converged);
    CHECK((a * r.x - b).norm() <= 1e-12 * b.norm() * 1.01);
    CHECK((r.x - a.partialPivLu().solve(b)).norm() < 1e-10);
}

TEST_CASE("block system layout and block extraction")
{
    const Pair p = matrices(2);
    const BlockSystem sys(1.5, 0.01, p.mass, p.stiffness);
    CHECK(sys.block_size() == p.mass.rows());
    const CsrMatrix m = sys.mass_block(), a = sys.stiffness_block();
    CHECK(std::equal(m.values().begin(), m.values().end(), p.mass.values().begin()));
    CHECK(std::equal(a.values().begin(), a.values().end(), p.stiffness.values().begin()));
    const Eigen::MatrixXd dense = sys.matrix().to_dense();
    const Eigen::Index n = p.mass.rows();
    CHECK((dense.topLeftCorner(n, n) - 1.5 * p.mass.to_dense()).norm() < 1e-15);
    CHECK((dense.topRightCorner(n, n) - 0.01 * p.stiffness.to_dense()).norm() < 1e-15);
    CHECK((dense.bottomLeftCorner(n, n) + p.stiffness.to_dense()).norm() < 1e-15);
}

TEST_CASE("all block methods reproduce the dense solution")
{
    const Pair p = matrices(2);
    const Vector ru = Vector::Random(p.mass.rows()), rw = Vector::Random(p.mass.rows());
    const double d0 = 1.5, tau = 0.0125 * 0.5;
    const auto [u_ref, w_ref] = dense_block_solve(d0, tau, p, ru, rw);
    for (BlockMethod method : {BlockMethod::factorized, BlockMethod::direct_lu, BlockMethod::gmres}) {
        BlockSolver solver(method, 1e-10);
        const BlockSolution s = solver.solve(d0, tau, p.mass, p.stiffness, ru, rw);
        CHECK(s.max_residual() <= 1e-10);
        CHECK((s.u - u_ref).norm() < 1e-8 * u_ref.norm());
        CHECK((s.w - w_ref).norm() < 1e-8 * w_ref.norm());
        const auto [r1, r2] = BlockSystem(d0, tau, p.mass, p.stiffness).residuals(s.u, s.w, ru, rw);
        CHECK(std::max(r1, r2) <= 1e-10);
    }
}

TEST_CASE("factorized solver reuses its factorization across nearby systems")
{
    const SurfaceMesh m0 = test::unit_sphere_mesh(3);
    Assembler asmb(m0);
    BlockSolver solver;
    for (int n = 0; n < 6; ++n) {
        SurfaceMesh m = m0;
        for (auto& x : m.nodes) x[0] *= 1.0 + 0.002 * n;
        asmb.bind(m);
        const CsrMatrix mass = asmb.mass(), stiff = asmb.stiffness();
        const Vector ru = mass * Vector::Ones(mass.rows()), rw = Vector::LinSpaced(mass.rows(), -1.0, 1.0);
        const BlockSolution s = solver.solve(1.5, 0.01, mass, stiff, ru, rw);
        CHECK(s.max_residual() <= 1e-10);
    }
    CHECK(solver.stats().solves == 6);
    CHECK(solver.stats().factorizations < 6);
    CHECK(solver.stats().max_residual <= 1e-10);
}

TEST_CASE("one-shot block solve")
{
    const Pair p = matrices(2);
    const Vector ru = Vector::Random(p.mass.rows()), rw = Vector::Zero(p.mass.rows());
    const BlockSolution s = solve_block(1.0, 0.1, p.mass, p.stiffness, ru, rw);
    CHECK(s.max_residual() <= 1e-10);
    // first row summed: 1^T M u = 1^T r_u since A 1 = 0
    const Vector one = Vector::Ones(p.mass.rows());
    CHECK(one.dot(p.mass * s.u) == doctest::Approx(one.dot(ru)).epsilon(1e-12));
}
