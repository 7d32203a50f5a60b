#ifndef THOSVD_TEST_HELPERS_HPP
#define THOSVD_TEST_HELPERS_HPP

#include <cmath>
#include <cstdlib>
#include <vector>

#include "thosvd/linalg.hpp"
#include "thosvd/matrix.hpp"
#include "thosvd/rng.hpp"
#include "thosvd/tensor.hpp"

namespace testutil {

inline thosvd::Matrix random_matrix(std::size_t rows, std::size_t cols, thosvd::Rng& rng,
                                    double lo = -1.0, double hi = 1.0) {
    thosvd::Matrix m(rows, cols);
    for (double& x : m.data()) x = lo + (hi - lo) * rng.uniform();
    return m;
}

inline thosvd::Matrix gaussian_matrix(std::size_t rows, std::size_t cols, thosvd::Rng& rng) {
    thosvd::Matrix m(rows, cols);
    for (double& x : m.data()) x = rng.gaussian();
    return m;
}

inline thosvd::DenseTensor random_tensor(const std::vector<std::size_t>& dims,
                                         thosvd::Rng& rng, double lo = -1.0,
                                         double hi = 1.0) {
    thosvd::DenseTensor t((thosvd::Shape(dims)));
    for (double& x : t.data()) x = lo + (hi - lo) * rng.uniform();
    return t;
}

inline double max_abs_diff(const thosvd::Matrix& a, const thosvd::Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline double max_abs_diff(const thosvd::DenseTensor& a, const thosvd::DenseTensor& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double orth_defect(const thosvd::Matrix& a) {
    thosvd::Matrix g = thosvd::matmul_tn(a, a);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return thosvd::fro_norm(g);
}

// Eigenvalues of a symmetric matrix by classic two-sided cyclic Jacobi;
// independent oracle for singular values via the Gram matrix.
inline std::vector<double> symmetric_eigenvalues(thosvd::Matrix a) {
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < 128; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off < 1e-14) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

// Dense linear solve via Gaussian elimination with partial pivoting;
// oracle-side only.
inline std::vector<double> solve_dense(thosvd::Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        const double d = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / d;
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

} // namespace testutil

#endif
