#ifndef THOSVD_LINALG_HPP
#define THOSVD_LINALG_HPP

#include <utility>
#include <vector>

#include "thosvd/matrix.hpp"

namespace thosvd {

// Thin SVD m = u * diag(s) * v' with k = min(rows, cols) columns.
// s is nonincreasing and nonnegative; u and v have orthonormal columns.
struct SvdResult {
    Matrix u;
    std::vector<double> s;
    Matrix v;
};

// Economy QR m = q * r with q.rows x q.cols = m.rows x m.cols and r upper
// triangular with nonnegative diagonal.
struct QrResult {
    Matrix q;
    Matrix r;
};

// Deterministic thin SVD via one-sided Jacobi on the smaller side.
// Sign convention: the largest-magnitude entry of each left singular vector
// is nonnegative.  Identical input bits give identical output bits.
SvdResult svd(const Matrix& m);

// Top-r left singular subspace of m together with the gap ratio
// sigma_{r+1} / sigma_r (0/0 treated as 0; sigma beyond min(rows,cols) is 0).
std::pair<Matrix, double> leading_left_singular_vectors(const Matrix& m, std::size_t r);

// Householder QR, requires rows >= cols.
QrResult economy_qr(const Matrix& m);

// Moore-Penrose pseudo-inverse; singular values at or below
// rel_tol * sigma_max are truncated.
Matrix pinv(const Matrix& m, double rel_tol = 1e-12);

// Minimum-norm solution of min_A ||A * b_n - x_n||_F, i.e. x_n * pinv(b_n).
Matrix lsq_via_pinv(const Matrix& x_n, const Matrix& b_n);

} // namespace thosvd

#endif
