#ifndef THOSVD_TENSOR_HPP
#define THOSVD_TENSOR_HPP

#include <cstddef>
#include <vector>

#include "thosvd/matrix.hpp"

namespace thosvd {

// Dimensions (m_1, ..., m_N) of an N-way tensor, N >= 1, every m_n >= 1.
class Shape {
public:
    explicit Shape(std::vector<std::size_t> dims);

    std::size_t order() const { return dims_.size(); }
    std::size_t dim(std::size_t n) const { return dims_[n]; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t numel() const { return numel_; }

    bool operator==(const Shape& other) const { return dims_ == other.dims_; }
    bool operator!=(const Shape& other) const { return dims_ != other.dims_; }

private:
    std::vector<std::size_t> dims_;
    std::size_t numel_ = 0;
};

// Dense N-way tensor stored flat in lexicographic (mode-1-fastest) order,
// so element (i_1,...,i_N) sits at i_1 + m_1*(i_2 + m_2*(i_3 + ...)) and the
// flat array equals the vectorization.  Mode indices are 0-based.
class DenseTensor {
public:
    explicit DenseTensor(Shape shape);
    DenseTensor(Shape shape, std::vector<double> data);

    const Shape& shape() const { return shape_; }
    std::size_t order() const { return shape_.order(); }
    std::size_t numel() const { return data_.size(); }

    double operator[](std::size_t flat) const { return data_[flat]; }
    double& operator[](std::size_t flat) { return data_[flat]; }

    double at(const std::vector<std::size_t>& index) const;
    std::size_t flat_index(const std::vector<std::size_t>& index) const;

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    Shape shape_;
    std::vector<double> data_;
};

// Mode-n matricization: columns are mode-n fibers in lexicographic order of
// the remaining indices.  fold_n reverses it exactly (bit-identical).
Matrix unfold(const DenseTensor& t, std::size_t mode);
DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape);

// t x_mode b (or b' when transposed); the mode-n dimension becomes b.rows()
// (b.cols() when transposed).  Implemented as unfold -> multiply -> fold.
DenseTensor mode_product(const DenseTensor& t, const Matrix& b, std::size_t mode,
                         bool transposed = false);

struct ModeFactor {
    const Matrix* mat;
    std::size_t mode;
    bool transposed = false;
};

// Sequential mode products, at most one factor per mode; products along
// distinct modes commute, so factors are applied in ascending mode order.
DenseTensor multi_mode_product(const DenseTensor& t, const std::vector<ModeFactor>& factors);

// vec(t); the layout makes this a zero-copy view of the flat data.
const std::vector<double>& vectorize(const DenseTensor& t);

double inner(const DenseTensor& a, const DenseTensor& b);
double fro_norm(const DenseTensor& t);

DenseTensor add(const DenseTensor& a, const DenseTensor& b);
DenseTensor sub(const DenseTensor& a, const DenseTensor& b);
DenseTensor scale(const DenseTensor& t, double alpha);

} // namespace thosvd

#endif
