#include "thosvd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace thosvd {

namespace {

// One-sided Jacobi on a tall matrix (rows >= cols): Givens rotations applied
// on the right orthogonalize the columns of b while v accumulates them, so
// that on exit b = u * diag(s) * I and the original input equals b * v'.
// Cyclic pair order and a fixed rotation formula keep the result
// deterministic for identical input bits.
void jacobi_orthogonalize(Matrix& b, Matrix& v) {
    const std::size_t m = b.rows(), n = b.cols();
    const double tol = 1e-15;
    const int max_sweeps = 96;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double* bp = b.col(p);
                double* bq = b.col(q);
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    app += bp[i] * bp[i];
                    aqq += bq[i] * bq[i];
                    apq += bp[i] * bq[i];
                }
                if (app == 0.0 || aqq == 0.0) continue;
                if (std::abs(apq) <= tol * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < m; ++i) {
                    const double xp = bp[i], xq = bq[i];
                    bp[i] = c * xp - s * xq;
                    bq[i] = s * xp + c * xq;
                }
                double* vp = v.col(p);
                double* vq = v.col(q);
                for (std::size_t i = 0; i < n; ++i) {
                    const double xp = vp[i], xq = vq[i];
                    vp[i] = c * xp - s * xq;
                    vq[i] = s * xp + c * xq;
                }
            }
        }
        if (!rotated) break;
    }
}

// Fill zero columns of u (slots where sigma vanished) with unit vectors
// orthogonal to the columns already present, chosen deterministically.
void complete_orthonormal(Matrix& u, const std::vector<std::size_t>& empty_slots) {
    const std::size_t m = u.rows();
    for (std::size_t slot : empty_slots) {
        std::size_t best = 0;
        double best_norm2 = -1.0;
        std::vector<double> best_res;
        std::vector<double> res(m);
        for (std::size_t k = 0; k < m; ++k) {
            std::fill(res.begin(), res.end(), 0.0);
            res[k] = 1.0;
            for (std::size_t j = 0; j < u.cols(); ++j) {
                if (j == slot) continue;
                const double* uj = u.col(j);
                double proj = uj[k];
                for (std::size_t i = 0; i < m; ++i) res[i] -= proj * uj[i];
            }
            double n2 = 0.0;
            for (double x : res) n2 += x * x;
            if (n2 > best_norm2) {
                best_norm2 = n2;
                best = k;
                best_res = res;
            }
        }
        (void)best;
        // one re-orthogonalization pass for accuracy
        for (std::size_t j = 0; j < u.cols(); ++j) {
            if (j == slot) continue;
            const double* uj = u.col(j);
            double proj = 0.0;
            for (std::size_t i = 0; i < m; ++i) proj += uj[i] * best_res[i];
            for (std::size_t i = 0; i < m; ++i) best_res[i] -= proj * uj[i];
        }
        double norm = std::sqrt(
            std::inner_product(best_res.begin(), best_res.end(), best_res.begin(), 0.0));
        double* us = u.col(slot);
        for (std::size_t i = 0; i < m; ++i) us[i] = best_res[i] / norm;
    }
}

// Thin SVD of a tall matrix (rows >= cols), no sign convention applied.
SvdResult svd_tall(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Matrix b = a;
    Matrix v = Matrix::identity(n);
    jacobi_orthogonalize(b, v);

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s2 = 0.0;
        const double* bj = b.col(j);
        for (std::size_t i = 0; i < m; ++i) s2 += bj[i] * bj[i];
        norms[j] = std::sqrt(s2);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

    SvdResult out;
    out.u = Matrix(m, n);
    out.v = Matrix(n, n);
    out.s.resize(n);
    const double sigma_max = norms[order[0]];
    std::vector<std::size_t> empty_slots;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.s[j] = norms[src];
        for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
        if (norms[src] > sigma_max * 1e-306 && norms[src] > 0.0) {
            const double inv = 1.0 / norms[src];
            const double* bs = b.col(src);
            double* uj = out.u.col(j);
            for (std::size_t i = 0; i < m; ++i) uj[i] = bs[i] * inv;
        } else {
            out.s[j] = 0.0;
            empty_slots.push_back(j);
        }
    }
    complete_orthonormal(out.u, empty_slots);
    return out;
}

void apply_sign_convention(SvdResult& r) {
    for (std::size_t j = 0; j < r.u.cols(); ++j) {
        double* uj = r.u.col(j);
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < r.u.rows(); ++i) {
            const double a = std::abs(uj[i]);
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (uj[arg] < 0.0) {
            for (std::size_t i = 0; i < r.u.rows(); ++i) uj[i] = -uj[i];
            double* vj = r.v.col(j);
            for (std::size_t i = 0; i < r.v.rows(); ++i) vj[i] = -vj[i];
        }
    }
}

} // namespace

SvdResult svd(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("svd: empty matrix");
    if (!all_finite(m)) throw std::invalid_argument("svd: non-finite input");
    SvdResult r;
    if (m.rows() >= m.cols()) {
        r = svd_tall(m);
    } else {
        SvdResult t = svd_tall(transpose(m));
        r.u = std::move(t.v);
        r.s = std::move(t.s);
        r.v = std::move(t.u);
    }
    apply_sign_convention(r);
    return r;
}

std::pair<Matrix, double> leading_left_singular_vectors(const Matrix& m, std::size_t r) {
    const std::size_t k = std::min(m.rows(), m.cols());
    if (r == 0 || r > k)
        throw std::invalid_argument("leading_left_singular_vectors: rank out of range");
    SvdResult full = svd(m);
    Matrix u(m.rows(), r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) u(i, j) = full.u(i, j);
    const double sr = full.s[r - 1];
    const double sr1 = (r < k) ? full.s[r] : 0.0;
    const double gap = (sr > 0.0) ? sr1 / sr : 0.0;
    return {std::move(u), gap};
}

QrResult economy_qr(const Matrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows < cols) throw std::invalid_argument("economy_qr: requires rows >= cols");
    Matrix a = m;
    // Householder vectors stored per step; a zero column skips its reflector.
    std::vector<std::vector<double>> reflectors(cols);
    for (std::size_t k = 0; k < cols; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k; i < rows; ++i) norm2 += a(i, k) * a(i, k);
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) continue;
        const double alpha = (a(k, k) >= 0.0) ? -norm : norm;
        std::vector<double> v(rows - k);
        v[0] = a(k, k) - alpha;
        for (std::size_t i = k + 1; i < rows; ++i) v[i - k] = a(i, k);
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = k; j < cols; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < rows; ++i) dot += v[i - k] * a(i, j);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < rows; ++i) a(i, j) -= f * v[i - k];
        }
        a(k, k) = alpha;
        reflectors[k] = std::move(v);
    }

    QrResult out;
    out.r = Matrix(cols, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i <= j; ++i) out.r(i, j) = a(i, j);

    // q = H_0 ... H_{c-1} applied to the thin identity
    out.q = Matrix(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) out.q(j, j) = 1.0;
    for (std::size_t k = cols; k-- > 0;) {
        if (reflectors[k].empty()) continue;
        const std::vector<double>& v = reflectors[k];
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        for (std::size_t j = 0; j < cols; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < rows; ++i) dot += v[i - k] * out.q(i, j);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < rows; ++i) out.q(i, j) -= f * v[i - k];
        }
    }

    // fix signs so diag(r) >= 0
    for (std::size_t j = 0; j < cols; ++j) {
        if (out.r(j, j) < 0.0) {
            for (std::size_t l = j; l < cols; ++l) out.r(j, l) = -out.r(j, l);
            for (std::size_t i = 0; i < rows; ++i) out.q(i, j) = -out.q(i, j);
        }
    }
    return out;
}

Matrix pinv(const Matrix& m, double rel_tol) {
    SvdResult r = svd(m);
    const double cutoff = r.s.empty() ? 0.0 : r.s[0] * rel_tol;
    // v * diag(1/s) * u'
    Matrix vs = r.v;
    for (std::size_t j = 0; j < vs.cols(); ++j) {
        const double inv = (r.s[j] > cutoff) ? 1.0 / r.s[j] : 0.0;
        double* col = vs.col(j);
        for (std::size_t i = 0; i < vs.rows(); ++i) col[i] *= inv;
    }
    return matmul_nt(vs, r.u);
}

Matrix lsq_via_pinv(const Matrix& x_n, const Matrix& b_n) {
    if (x_n.cols() != b_n.cols())
        throw std::invalid_argument("lsq_via_pinv: column counts must match");
    return matmul(x_n, pinv(b_n));
}

} // namespace thosvd
