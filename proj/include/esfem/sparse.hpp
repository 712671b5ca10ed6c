#pragma once

#include "esfem/types.hpp"

#include <Eigen/SparseCore>

#include <memory>
#include <span>
#include <vector>

namespace esfem {

/// Row offsets and sorted, unique column indices of a CSR matrix.
struct SparsityPattern {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;
    std::vector<int> col_idx;

    int nnz() const { return static_cast<int>(col_idx.size()); }
    /// Position of (row, col) in col_idx, or -1 when the entry is structurally zero.
    int find(int row, int col) const;
    /// Throws std::invalid_argument when offsets or indices are inconsistent.
    void validate() const;
};

struct Triplet {
    int row;
    int col;
    double value;
};

/// Compressed sparse row matrix. Matrices assembled on the same mesh share one
/// pattern object, so element scatter maps can be computed once.
class CsrMatrix {
public:
    CsrMatrix() = default;
    explicit CsrMatrix(std::shared_ptr<const SparsityPattern> pattern);
    CsrMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<double> values);

    /// Duplicate entries are summed.
    static CsrMatrix from_triplets(int rows, int cols, std::span<const Triplet> triplets);
    static CsrMatrix identity(int n);

    int rows() const { return pattern_ ? pattern_->rows : 0; }
    int cols() const { return pattern_ ? pattern_->cols : 0; }
    int nnz() const { return pattern_ ? pattern_->nnz() : 0; }
    const SparsityPattern& pattern() const { return *pattern_; }
    const std::shared_ptr<const SparsityPattern>& pattern_ptr() const { return pattern_; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double coeff(int row, int col) const;
    Vector diagonal() const;

    /// y = A x through the active SIMD kernel.
    void multiply(const Vector& x, Vector& y) const;
    Vector operator*(const Vector& x) const;

    /// Largest |A_ij - A_ji| relative to the largest |A_ij|.
    double asymmetry() const;

    Eigen::MatrixXd to_dense() const;
    Eigen::SparseMatrix<double> to_eigen() const;

private:
    std::shared_ptr<const SparsityPattern> pattern_;
    std::vector<double> values_;
};

/// a X + b Y for matrices on the same pattern object.
CsrMatrix linear_combination(double a, const CsrMatrix& x, double b, const CsrMatrix& y);

}  // namespace esfem
