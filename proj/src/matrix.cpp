#include "thosvd/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace thosvd {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw std::invalid_argument("Matrix: data length does not match rows*cols");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions mismatch");
    Matrix c(a.rows(), b.cols());
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c.col(j);
        for (std::size_t l = 0; l < k; ++l) {
            const double blj = b(l, j);
            if (blj == 0.0) continue;
            const double* al = a.col(l);
            for (std::size_t i = 0; i < m; ++i) cj[i] += al[i] * blj;
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw std::invalid_argument("matmul_tn: inner dimensions mismatch");
    Matrix c(a.cols(), b.cols());
    const std::size_t m = a.rows();
    for (std::size_t j = 0; j < b.cols(); ++j) {
        const double* bj = b.col(j);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double* ai = a.col(i);
            double s = 0.0;
            for (std::size_t l = 0; l < m; ++l) s += ai[l] * bj[l];
            c(i, j) = s;
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw std::invalid_argument("matmul_nt: inner dimensions mismatch");
    Matrix c(a.rows(), b.rows());
    const std::size_t m = a.rows(), k = a.cols();
    for (std::size_t l = 0; l < k; ++l) {
        const double* al = a.col(l);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double bjl = b(j, l);
            if (bjl == 0.0) continue;
            double* cj = c.col(j);
            for (std::size_t i = 0; i < m; ++i) cj[i] += al[i] * bjl;
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

namespace {
void check_same_size(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
}
} // namespace

Matrix add(const Matrix& a, const Matrix& b) {
    check_same_size(a, b, "add");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    check_same_size(a, b, "sub");
    Matrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

Matrix scale(const Matrix& a, double alpha) {
    Matrix c = a;
    for (double& x : c.data()) x *= alpha;
    return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ja = 0; ja < a.cols(); ++ja)
        for (std::size_t jb = 0; jb < b.cols(); ++jb) {
            const std::size_t j = ja * b.cols() + jb;
            for (std::size_t ia = 0; ia < a.rows(); ++ia) {
                const double aij = a(ia, ja);
                if (aij == 0.0) continue;
                for (std::size_t ib = 0; ib < b.rows(); ++ib)
                    k(ia * b.rows() + ib, j) = aij * b(ib, jb);
            }
        }
    return k;
}

double inner(const Matrix& a, const Matrix& b) {
    check_same_size(a, b, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

double fro_norm(const Matrix& a) {
    return std::sqrt(inner(a, a));
}

bool all_finite(const Matrix& a) {
    for (double x : a.data())
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace thosvd
