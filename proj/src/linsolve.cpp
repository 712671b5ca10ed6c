#include "esfem/linsolve.hpp"

#include "esfem/errors.hpp"
#include "esfem/kernels.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace esfem {

namespace {

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

double norm(const Vector& v) { return std::sqrt(kernels::dot(view(v), view(v))); }

double relative(double r, double scale) { return scale > 0.0 ? r / scale : (r > 0.0 ? r : 0.0); }

}  // namespace

Vector solve_spd(const CsrMatrix& a, const Vector& b, const SpdOptions& options, SolveReport* report)
{
    if (a.rows() != a.cols() || a.rows() != b.size()) throw SolverError("solve_spd: dimension mismatch");
    const int n = a.rows();
    const double bnorm = norm(b);
    SolveReport local;
    Vector x = Vector::Zero(n);
    if (bnorm == 0.0) {
        if (report) *report = local;
        return x;
    }

    if (options.method == SpdOptions::Method::direct) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a.to_eigen());
        if (ldlt.info() != Eigen::Success) throw SolverError("solve_spd: sparse Cholesky factorization failed");
        x = ldlt.solve(b);
        local.residual = norm(b - a * x) / bnorm;
        if (report) *report = local;
        return x;
    }

    const Vector diag = a.diagonal();
    for (int i = 0; i < n; ++i)
        if (!(diag[i] > 0.0)) throw SolverError("solve_spd: non-positive diagonal entry");
    const Vector inv_diag = diag.cwiseInverse();

    Vector r = b;
    Vector z = inv_diag.cwiseProduct(r);
    Vector p = z;
    Vector q(n);
    double rz = kernels::dot(view(r), view(z));
    const int max_it = options.max_iterations > 0 ? options.max_iterations : 10 * n;
    double rnorm = bnorm;
    int it = 0;
    for (; it < max_it && rnorm > options.tolerance * bnorm; ++it) {
        a.multiply(p, q);
        const double pq = kernels::dot(view(p), view(q));
        if (!(pq > 0.0)) throw SolverError("solve_spd: matrix is not positive definite (CG breakdown)");
        const double alpha = rz / pq;
        kernels::axpy(alpha, view(p), view(x));
        kernels::axpy(-alpha, view(q), view(r));
        z = inv_diag.cwiseProduct(r);
        const double rz_next = kernels::dot(view(r), view(z));
        kernels::xpby(view(z), rz_next / rz, view(p));
        rz = rz_next;
        rnorm = norm(r);
    }
    // Recompute the true residual; recursive residuals drift for long runs.
    local.residual = norm(b - a * x) / bnorm;
    local.iterations = it;
    if (!(local.residual <= options.tolerance * 10.0)) {
        std::ostringstream msg;
        msg << "solve_spd: CG did not converge, relative residual " << local.residual << " after " << it
            << " iterations";
        throw SolverError(msg.str());
    }
    if (report) *report = local;
    return x;
}

// ---------------------------------------------------------------------------

BlockSystem::BlockSystem(double delta0, double tau, const CsrMatrix& mass, const CsrMatrix& stiffness)
{
    update(delta0, tau, mass, stiffness);
}

void BlockSystem::build_pattern()
{
    const auto& m = *mass_pattern_;
    const auto& a = *stiffness_pattern_;
    auto p = std::make_shared<SparsityPattern>();
    p->rows = p->cols = 2 * n_;
    p->row_ptr.reserve(2 * n_ + 1);
    p->col_idx.reserve(2 * (m.nnz() + a.nnz()));
    p->row_ptr.push_back(0);
    for (int i = 0; i < n_; ++i) {
        for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) p->col_idx.push_back(m.col_idx[k]);
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) p->col_idx.push_back(n_ + a.col_idx[k]);
        p->row_ptr.push_back(p->nnz());
    }
    for (int i = 0; i < n_; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) p->col_idx.push_back(a.col_idx[k]);
        for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) p->col_idx.push_back(n_ + m.col_idx[k]);
        p->row_ptr.push_back(p->nnz());
    }
    matrix_ = CsrMatrix(std::move(p));
}

void BlockSystem::update(double delta0, double tau, const CsrMatrix& mass, const CsrMatrix& stiffness)
{
    if (mass.rows() != mass.cols() || stiffness.rows() != stiffness.cols() || mass.rows() != stiffness.rows())
        throw SolverError("block system: M and A must be square of equal size");
    delta0_ = delta0;
    tau_ = tau;
    if (mass.pattern_ptr() != mass_pattern_ || stiffness.pattern_ptr() != stiffness_pattern_ ||
        n_ != mass.rows()) {
        n_ = mass.rows();
        mass_pattern_ = mass.pattern_ptr();
        stiffness_pattern_ = stiffness.pattern_ptr();
        build_pattern();
    }
    const auto& m = *mass_pattern_;
    const auto& a = *stiffness_pattern_;
    const auto mv = mass.values();
    const auto av = stiffness.values();
    auto out = matrix_.values();
    std::size_t pos = 0;
    for (int i = 0; i < n_; ++i) {
        for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) out[pos++] = delta0 * mv[k];
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) out[pos++] = tau * av[k];
    }
    for (int i = 0; i < n_; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) out[pos++] = -av[k];
        for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) out[pos++] = mv[k];
    }
}

CsrMatrix BlockSystem::mass_block() const
{
    const auto& m = *mass_pattern_;
    const auto& a = *stiffness_pattern_;
    const auto& p = matrix_.pattern();
    std::vector<double> v(m.nnz());
    const auto values = matrix_.values();
    for (int i = 0; i < n_; ++i) {
        const int start = p.row_ptr[n_ + i] + (a.row_ptr[i + 1] - a.row_ptr[i]);
        for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) v[k] = values[start + (k - m.row_ptr[i])];
    }
    return CsrMatrix(mass_pattern_, std::move(v));
}

CsrMatrix BlockSystem::stiffness_block() const
{
    const auto& a = *stiffness_pattern_;
    const auto& p = matrix_.pattern();
    std::vector<double> v(a.nnz());
    const auto values = matrix_.values();
    for (int i = 0; i < n_; ++i) {
        const int start = p.row_ptr[n_ + i];
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) v[k] = -values[start + (k - a.row_ptr[i])];
    }
    return CsrMatrix(stiffness_pattern_, std::move(v));
}

std::pair<double, double> BlockSystem::residuals(const Vector& u, const Vector& w, const Vector& rhs_u,
                                                 const Vector& rhs_w) const
{
    Vector x(2 * n_);
    x << u, w;
    const Vector bx = matrix_ * x;
    const CsrMatrix m = mass_block();
    const double scale_u = rhs_u.norm() + delta0_ * (m * u).norm();
    const double scale_w = rhs_w.norm() + (m * w).norm();
    return {relative((bx.head(n_) - rhs_u).norm(), scale_u), relative((bx.tail(n_) - rhs_w).norm(), scale_w)};
}

// ---------------------------------------------------------------------------

GmresResult gmres(const std::function<Vector(const Vector&)>& op, const std::function<Vector(const Vector&)>& precond,
                  const Vector& b, const Vector& x0, const GmresOptions& options)
{
    GmresResult out;
    out.x = x0;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        out.x.setZero();
        out.converged = true;
        return out;
    }
    const int m = std::max(1, options.restart);
    const Eigen::Index n = b.size();
    std::vector<Vector> basis(m + 1, Vector(n));
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd cs(m), sn(m), g(m + 1);
    const double target = options.tolerance * bnorm;

    Vector r = b - op(out.x);
    double rnorm = r.norm();
    while (rnorm > target && out.iterations < options.max_iterations) {
        basis[0] = r / rnorm;
        g.setZero();
        g[0] = rnorm;
        int j = 0;
        while (j < m && out.iterations < options.max_iterations) {
            Vector w = op(precond(basis[j]));
            for (int i = 0; i <= j; ++i) {
                hess(i, j) = w.dot(basis[i]);
                w -= hess(i, j) * basis[i];
            }
            hess(j + 1, j) = w.norm();
            if (hess(j + 1, j) > 0.0) basis[j + 1] = w / hess(j + 1, j);
            for (int i = 0; i < j; ++i) {
                const double tmp = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
                hess(i + 1, j) = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
                hess(i, j) = tmp;
            }
            const double denom = std::hypot(hess(j, j), hess(j + 1, j));
            if (denom == 0.0) break;
            cs[j] = hess(j, j) / denom;
            sn[j] = hess(j + 1, j) / denom;
            hess(j, j) = denom;
            hess(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            ++j;
            ++out.iterations;
            if (std::abs(g[j]) <= target) break;
        }
        if (j == 0) break;
        const Eigen::VectorXd y = hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        Vector update = Vector::Zero(n);
        for (int i = 0; i < j; ++i) update += y[i] * basis[i];
        out.x += precond(update);
        r = b - op(out.x);
        const double next = r.norm();
        if (!(next < rnorm) && std::abs(g[j]) > target) {
            rnorm = next;
            break;  // stagnation
        }
        rnorm = next;
    }
    out.residual = rnorm / bnorm;
    out.converged = rnorm <= target;
    return out;
}

BlockSolution gmres_block(const BlockSystem& system, const Vector& rhs_u, const Vector& rhs_w,
                          const GmresOptions& options)
{
    const int n = system.block_size();
    const CsrMatrix& op = system.matrix();
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> mass_factor(system.mass_block().to_eigen());
    if (mass_factor.info() != Eigen::Success) throw SolverError("gmres: mass matrix factorization failed");
    const double delta0 = system.delta0();
    auto precondition = [&](const Vector& v) {
        Vector z(2 * n);
        z.head(n) = mass_factor.solve(v.head(n)) / delta0;
        z.tail(n) = mass_factor.solve(v.tail(n));
        return z;
    };
    Vector b(2 * n);
    b << rhs_u, rhs_w;
    const GmresResult r = gmres([&](const Vector& x) { return op * x; }, precondition, b, Vector::Zero(2 * n), options);
    BlockSolution out;
    out.method = "gmres";
    out.u = r.x.head(n);
    out.w = r.x.tail(n);
    out.iterations = r.iterations;
    std::tie(out.residual_u, out.residual_w) = system.residuals(out.u, out.w, rhs_u, rhs_w);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Iterations after which a reused factorization counts as stale.
constexpr int kStaleIterations = 8;

// Symmetric quasi-definite scaling of the block system values on the same pattern.
CsrMatrix balanced_matrix(const BlockSystem& sys)
{
    const int n = sys.block_size();
    const double root = std::sqrt(sys.tau());
    const CsrMatrix& k = sys.matrix();
    const auto& p = k.pattern();
    std::vector<double> v(k.values().begin(), k.values().end());
    for (int i = 0; i < 2 * n; ++i) {
        for (int e = p.row_ptr[i]; e < p.row_ptr[i + 1]; ++e) {
            const bool left = p.col_idx[e] < n;
            if (i < n)
                v[e] = left ? v[e] : v[e] / root;  // tau A -> sqrt(tau) A
            else
                v[e] = left ? -root * v[e] : -v[e];  // -A -> sqrt(tau) A, M -> -M
        }
    }
    return CsrMatrix(k.pattern_ptr(), std::move(v));
}

}  // namespace

BlockSolver::BlockSolver(BlockMethod method, double tolerance) : method_(method), tolerance_(tolerance) {}

BlockSolution BlockSolver::solve(double delta0, double tau, const CsrMatrix& mass, const CsrMatrix& stiffness,
                                 const Vector& rhs_u, const Vector& rhs_w)
{
    if (!(delta0 > 0.0) || !(tau > 0.0)) throw SolverError("block solve needs delta0 > 0 and tau > 0");
    if (rhs_u.size() != mass.rows() || rhs_w.size() != mass.rows()) throw SolverError("block solve: rhs size mismatch");
    if (!rhs_u.allFinite() || !rhs_w.allFinite()) throw BlowUpError("non-finite right-hand side in the block solve");
    if (system_)
        system_->update(delta0, tau, mass, stiffness);
    else
        system_.emplace(delta0, tau, mass, stiffness);

    BlockSolution out;
    switch (method_) {
    case BlockMethod::factorized:
        out = solve_factorized(rhs_u, rhs_w);
        break;
    case BlockMethod::direct_lu:
        out = solve_lu(rhs_u, rhs_w);
        break;
    case BlockMethod::gmres:
        break;
    }
    if (method_ == BlockMethod::gmres || !(out.max_residual() <= tolerance_)) {
        GmresOptions options;
        options.tolerance = 1e-3 * tolerance_;
        BlockSolution fallback = gmres_block(*system_, rhs_u, rhs_w, options);
        stats_.krylov_iterations += fallback.iterations;
        if (method_ == BlockMethod::gmres || fallback.max_residual() < out.max_residual()) out = std::move(fallback);
    }
    ++stats_.solves;
    if (!(out.max_residual() <= tolerance_) || !out.u.allFinite() || !out.w.allFinite()) {
        std::ostringstream msg;
        msg << "block solve failed: relative residuals " << out.residual_u << ", " << out.residual_w << " exceed "
            << tolerance_;
        throw SolverError(msg.str());
    }
    stats_.max_residual = std::max(stats_.max_residual, out.max_residual());
    return out;
}

void BlockSolver::refactor(const Eigen::SparseMatrix<double>& balanced)
{
    if (analyzed_for_ != system_->matrix().pattern_ptr()) {
        ldlt_.analyzePattern(balanced);
        analyzed_for_ = system_->matrix().pattern_ptr();
    }
    ldlt_.factorize(balanced);
    ++stats_.factorizations;
    have_factor_ = ldlt_.info() == Eigen::Success;
    factor_delta0_ = system_->delta0();
    factor_tau_ = system_->tau();
}

BlockSolution BlockSolver::solve_factorized(const Vector& rhs_u, const Vector& rhs_w)
{
    const BlockSystem& sys = *system_;
    const int n = sys.block_size();
    const double root = std::sqrt(sys.tau());
    const CsrMatrix balanced = balanced_matrix(sys);
    Vector b(2 * n);
    b << rhs_u, -root * rhs_w;

    auto attempt = [&](int max_iterations) {
        GmresOptions options;
        options.restart = max_iterations;
        options.max_iterations = max_iterations;
        options.tolerance = 1e-14;
        const GmresResult r = gmres([&](const Vector& x) { return balanced * x; },
                                    [&](const Vector& v) { return Vector(ldlt_.solve(v)); }, b,
                                    Vector::Zero(2 * n), options);
        stats_.krylov_iterations += r.iterations;
        BlockSolution s;
        s.method = "ldlt";
        s.iterations = r.iterations;
        s.u = r.x.head(n);
        s.w = r.x.tail(n) / root;
        std::tie(s.residual_u, s.residual_w) = sys.residuals(s.u, s.w, rhs_u, rhs_w);
        return s;
    };
    // Reused factors must do clearly better than the tolerance to be kept.
    const double keep = 1e-2 * tolerance_;
    const bool same_scalars = factor_delta0_ == sys.delta0() && factor_tau_ == sys.tau();
    if (have_factor_ && same_scalars && analyzed_for_ == sys.matrix().pattern_ptr()) {
        BlockSolution s = attempt(kStaleIterations);
        if (s.max_residual() <= keep && s.u.allFinite() && s.w.allFinite()) return s;
    }
    refactor(balanced.to_eigen());
    if (!have_factor_) return {};
    return attempt(2 * kStaleIterations);
}

BlockSolution BlockSolver::solve_lu(const Vector& rhs_u, const Vector& rhs_w)
{
    const BlockSystem& sys = *system_;
    const int n = sys.block_size();
    const Eigen::SparseMatrix<double> k = sys.matrix().to_eigen();
    if (analyzed_for_ != sys.matrix().pattern_ptr()) {
        lu_.analyzePattern(k);
        analyzed_for_ = sys.matrix().pattern_ptr();
    }
    lu_.factorize(k);
    ++stats_.factorizations;
    BlockSolution out;
    out.method = "sparse_lu";
    if (lu_.info() != Eigen::Success) return out;
    Vector b(2 * n);
    b << rhs_u, rhs_w;
    Vector x = lu_.solve(b);
    for (int refine = 0;; ++refine) {
        out.u = x.head(n);
        out.w = x.tail(n);
        std::tie(out.residual_u, out.residual_w) = sys.residuals(out.u, out.w, rhs_u, rhs_w);
        if (out.max_residual() <= 1e-2 * tolerance_ || refine == 3) break;
        x += lu_.solve(Vector(b - sys.matrix() * x));
        out.iterations = refine + 1;
    }
    return out;
}

BlockSolution solve_block(double delta0, double tau, const CsrMatrix& mass, const CsrMatrix& stiffness,
                          const Vector& rhs_u, const Vector& rhs_w, double tolerance)
{
    BlockSolver solver(BlockMethod::factorized, tolerance);
    return solver.solve(delta0, tau, mass, stiffness, rhs_u, rhs_w);
}

}  // namespace esfem
