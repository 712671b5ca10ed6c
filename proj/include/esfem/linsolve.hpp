#pragma once

#include "esfem/sparse.hpp"
#include "esfem/types.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

namespace esfem {

struct SolveReport {
    int iterations = 0;
    /// ||A x - b|| / ||b||.
    double residual = 0.0;
};

struct SpdOptions {
    enum class Method { cg, direct };
    Method method = Method::cg;
    double tolerance = 1e-12;
    /// 0 means 10 N.
    int max_iterations = 0;
};

/// Solves A x = b for symmetric positive definite A: Jacobi-preconditioned CG
/// or a sparse Cholesky factorization. Throws SolverError on non-convergence.
Vector solve_spd(const CsrMatrix& a, const Vector& b, const SpdOptions& options = {}, SolveReport* report = nullptr);

/// The 2N x 2N matrix [[delta0 M, tau A], [-A, M]] of one linearly implicit BDF step.
/// Its pattern is the row-wise concatenation of the block patterns at block offsets.
class BlockSystem {
public:
    BlockSystem(double delta0, double tau, const CsrMatrix& mass, const CsrMatrix& stiffness);

    /// Refreshes values; the pattern is rebuilt only if the block patterns changed.
    void update(double delta0, double tau, const CsrMatrix& mass, const CsrMatrix& stiffness);

    const CsrMatrix& matrix() const { return matrix_; }
    int block_size() const { return n_; }
    double delta0() const { return delta0_; }
    double tau() const { return tau_; }

    /// M recovered from the lower-right block (bit-exact).
    CsrMatrix mass_block() const;
    /// A recovered from the lower-left block (bit-exact).
    CsrMatrix stiffness_block() const;

    /// Relative residuals ||r_i|| / (||rhs_i|| + ||D_i x_i||) of both block rows,
    /// with D_1 = delta0 M and D_2 = M.
    std::pair<double, double> residuals(const Vector& u, const Vector& w, const Vector& rhs_u,
                                        const Vector& rhs_w) const;

private:
    void build_pattern();

    int n_ = 0;
    double delta0_ = 1.0;
    double tau_ = 1.0;
    std::shared_ptr<const SparsityPattern> mass_pattern_;
    std::shared_ptr<const SparsityPattern> stiffness_pattern_;
    CsrMatrix matrix_;
};

/// factorized: LDL^T of the symmetric quasi-definite form
///   [[delta0 M, sqrt(tau) A], [sqrt(tau) A, -M]] (u, sqrt(tau) w),
/// reused as a GMRES preconditioner across steps and refreshed when it goes stale.
/// direct_lu: a fresh sparse LU of the block matrix on every call.
/// gmres: restarted GMRES with the block-diagonal preconditioner diag(delta0 M, M).
enum class BlockMethod { factorized, direct_lu, gmres };

struct BlockSolution {
    Vector u;
    Vector w;
    double residual_u = std::numeric_limits<double>::infinity();
    double residual_w = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::string method;

    double max_residual() const { return std::max(residual_u, residual_w); }
};

struct GmresOptions {
    int restart = 50;
    int max_iterations = 5000;
    /// Relative to the norm of the right-hand side.
    double tolerance = 1e-11;
};

struct GmresResult {
    Vector x;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Restarted right-preconditioned GMRES with modified Gram-Schmidt and Givens rotations.
GmresResult gmres(const std::function<Vector(const Vector&)>& op, const std::function<Vector(const Vector&)>& precond,
                  const Vector& b, const Vector& x0, const GmresOptions& options);

/// GMRES on the block system with the block-diagonal preconditioner diag(delta0 M, M).
BlockSolution gmres_block(const BlockSystem& system, const Vector& rhs_u, const Vector& rhs_w,
                          const GmresOptions& options = {});

struct BlockSolverStats {
    long solves = 0;
    long factorizations = 0;
    long krylov_iterations = 0;
    double max_residual = 0.0;
};

/// Reusable solver for a sequence of block systems on one mesh connectivity.
/// Throws SolverError when the residual tolerance cannot be met.
class BlockSolver {
public:
    explicit BlockSolver(BlockMethod method = BlockMethod::factorized, double tolerance = 1e-10);

    BlockSolution solve(double delta0, double tau, const CsrMatrix& mass, const CsrMatrix& stiffness,
                        const Vector& rhs_u, const Vector& rhs_w);

    double tolerance() const { return tolerance_; }
    BlockMethod method() const { return method_; }
    const BlockSolverStats& stats() const { return stats_; }

private:
    BlockSolution solve_factorized(const Vector& rhs_u, const Vector& rhs_w);
    BlockSolution solve_lu(const Vector& rhs_u, const Vector& rhs_w);
    void refactor(const Eigen::SparseMatrix<double>& balanced);

    BlockMethod method_;
    double tolerance_;
    BlockSolverStats stats_;
    std::optional<BlockSystem> system_;

    std::shared_ptr<const SparsityPattern> analyzed_for_;
    double factor_delta0_ = 0.0;
    double factor_tau_ = 0.0;
    bool have_factor_ = false;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

/// One-shot block solve; throws SolverError if the residual tolerance is missed.
BlockSolution solve_block(double delta0, double tau, const CsrMatrix& mass, const CsrMatrix& stiffness,
                          const Vector& rhs_u, const Vector& rhs_w, double tolerance = 1e-10);

}  // namespace esfem
