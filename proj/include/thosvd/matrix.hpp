#ifndef THOSVD_MATRIX_HPP
#define THOSVD_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace thosvd {

// Dense column-major matrix of 64-bit reals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    // pointer to the start of column j
    const double* col(std::size_t j) const { return data_.data() + j * rows_; }
    double* col(std::size_t j) { return data_.data() + j * rows_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);     // a * b
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a' * b
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a * b'
Matrix transpose(const Matrix& a);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double alpha);

// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

double inner(const Matrix& a, const Matrix& b);
double fro_norm(const Matrix& a);

bool all_finite(const Matrix& a);

} // namespace thosvd

#endif
