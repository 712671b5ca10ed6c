#include "esfem/sparse.hpp"

#include "esfem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esfem {

int SparsityPattern::find(int row, int col) const
{
    const auto begin = col_idx.begin() + row_ptr[row];
    const auto end = col_idx.begin() + row_ptr[row + 1];
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return -1;
    return static_cast<int>(it - col_idx.begin());
}

void SparsityPattern::validate() const
{
    if (rows < 0 || cols < 0 || static_cast<int>(row_ptr.size()) != rows + 1 || row_ptr.front() != 0 ||
        row_ptr.back() != nnz())
        throw std::invalid_argument("inconsistent CSR row offsets");
    for (int r = 0; r < rows; ++r) {
        if (row_ptr[r] > row_ptr[r + 1]) throw std::invalid_argument("CSR row offsets decrease");
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            if (col_idx[k] < 0 || col_idx[k] >= cols) throw std::invalid_argument("CSR column out of range");
            if (k > row_ptr[r] && col_idx[k] <= col_idx[k - 1])
                throw std::invalid_argument("CSR columns not sorted and unique");
        }
    }
}

CsrMatrix::CsrMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->nnz(), 0.0)
{
}

CsrMatrix::CsrMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values))
{
    if (static_cast<int>(values_.size()) != pattern_->nnz())
        throw std::invalid_argument("CSR value count does not match pattern");
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::span<const Triplet> triplets)
{
    std::vector<Triplet> sorted(triplets.begin(), triplets.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    auto pattern = std::make_shared<SparsityPattern>();
    pattern->rows = rows;
    pattern->cols = cols;
    pattern->row_ptr.assign(rows + 1, 0);
    std::vector<double> values;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& t = sorted[i];
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::invalid_argument("triplet index out of range");
        if (i > 0 && sorted[i - 1].row == t.row && sorted[i - 1].col == t.col) {
            values.back() += t.value;
            continue;
        }
        pattern->col_idx.push_back(t.col);
        values.push_back(t.value);
        ++pattern->row_ptr[t.row + 1];
    }
    for (int r = 0; r < rows; ++r) pattern->row_ptr[r + 1] += pattern->row_ptr[r];
    return CsrMatrix(std::move(pattern), std::move(values));
}

CsrMatrix CsrMatrix::identity(int n)
{
    auto pattern = std::make_shared<SparsityPattern>();
    pattern->rows = pattern->cols = n;
    pattern->row_ptr.resize(n + 1);
    pattern->col_idx.resize(n);
    for (int i = 0; i <= n; ++i) pattern->row_ptr[i] = i;
    for (int i = 0; i < n; ++i) pattern->col_idx[i] = i;
    return CsrMatrix(std::move(pattern), std::vector<double>(n, 1.0));
}

double CsrMatrix::coeff(int row, int col) const
{
    const int k = pattern_->find(row, col);
    return k < 0 ? 0.0 : values_[k];
}

Vector CsrMatrix::diagonal() const
{
    Vector d(rows());
    for (int i = 0; i < rows(); ++i) d[i] = coeff(i, i);
    return d;
}

void CsrMatrix::multiply(const Vector& x, Vector& y) const
{
    if (x.size() != cols()) throw std::invalid_argument("matrix-vector size mismatch");
    y.resize(rows());
    kernels::active().spmv(static_cast<std::size_t>(rows()), pattern_->row_ptr.data(), pattern_->col_idx.data(),
                           values_.data(), x.data(), y.data());
}

Vector CsrMatrix::operator*(const Vector& x) const
{
    Vector y;
    multiply(x, y);
    return y;
}

double CsrMatrix::asymmetry() const
{
    double scale = 0.0;
    double worst = 0.0;
    for (int r = 0; r < rows(); ++r) {
        for (int k = pattern_->row_ptr[r]; k < pattern_->row_ptr[r + 1]; ++k) {
            scale = std::max(scale, std::abs(values_[k]));
            worst = std::max(worst, std::abs(values_[k] - coeff(pattern_->col_idx[k], r)));
        }
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

Eigen::MatrixXd CsrMatrix::to_dense() const
{
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), cols());
    for (int r = 0; r < rows(); ++r)
        for (int k = pattern_->row_ptr[r]; k < pattern_->row_ptr[r + 1]; ++k) d(r, pattern_->col_idx[k]) = values_[k];
    return d;
}

Eigen::SparseMatrix<double> CsrMatrix::to_eigen() const
{
    const Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> view(
        rows(), cols(), nnz(), pattern_->row_ptr.data(), pattern_->col_idx.data(), values_.data());
    return Eigen::SparseMatrix<double>(view);
}

CsrMatrix linear_combination(double a, const CsrMatrix& x, double b, const CsrMatrix& y)
{
    if (x.pattern_ptr() != y.pattern_ptr()) throw std::invalid_argument("linear_combination needs a shared pattern");
    std::vector<double> v(x.nnz());
    const auto xv = x.values();
    const auto yv = y.values();
    for (int k = 0; k < x.nnz(); ++k) v[k] = a * xv[k] + b * yv[k];
    return CsrMatrix(x.pattern_ptr(), std::move(v));
}

}  // namespace esfem
