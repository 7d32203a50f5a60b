#include "thosvd/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace thosvd {

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("Shape: order must be >= 1");
    numel_ = 1;
    for (std::size_t d : dims_) {
        if (d == 0) throw std::invalid_argument("Shape: dimensions must be >= 1");
        if (d > std::numeric_limits<std::size_t>::max() / numel_)
            throw std::invalid_argument("Shape: element count overflows size_t");
        numel_ *= d;
    }
}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)), data_(shape_.numel(), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_.numel())
        throw std::invalid_argument("DenseTensor: data length does not match shape");
}

std::size_t DenseTensor::flat_index(const std::vector<std::size_t>& index) const {
    if (index.size() != shape_.order())
        throw std::invalid_argument("DenseTensor: index order mismatch");
    std::size_t flat = 0;
    for (std::size_t n = shape_.order(); n-- > 0;) {
        if (index[n] >= shape_.dim(n)) throw std::out_of_range("DenseTensor: index out of range");
        flat = flat * shape_.dim(n) + index[n];
    }
    return flat;
}

double DenseTensor::at(const std::vector<std::size_t>& index) const {
    return data_[flat_index(index)];
}

namespace {

void check_mode(const Shape& shape, std::size_t mode) {
    if (mode >= shape.order()) throw std::invalid_argument("mode index out of range");
}

// Product of dims below the given mode: the flat stride of that mode.
std::size_t mode_stride(const Shape& shape, std::size_t mode) {
    std::size_t s = 1;
    for (std::size_t n = 0; n < mode; ++n) s *= shape.dim(n);
    return s;
}

} // namespace

Matrix unfold(const DenseTensor& t, std::size_t mode) {
    check_mode(t.shape(), mode);
    const std::size_t m = t.shape().dim(mode);
    const std::size_t stride = mode_stride(t.shape(), mode);
    const std::size_t block = stride * m;
    const std::size_t numel = t.numel();
    Matrix out(m, numel / m);
    const double* src = t.data().data();
    std::size_t j = 0;
    for (std::size_t outer = 0; outer < numel; outer += block)
        for (std::size_t lo = 0; lo < stride; ++lo, ++j) {
            double* dst = out.col(j);
            const double* fiber = src + outer + lo;
            for (std::size_t i = 0; i < m; ++i) dst[i] = fiber[i * stride];
        }
    return out;
}

DenseTensor fold(const Matrix& m, std::size_t mode, const Shape& shape) {
    check_mode(shape, mode);
    const std::size_t mn = shape.dim(mode);
    if (m.rows() != mn || m.cols() != shape.numel() / mn)
        throw std::invalid_argument("fold: matrix dimensions do not match shape");
    const std::size_t stride = mode_stride(shape, mode);
    const std::size_t block = stride * mn;
    DenseTensor t(shape);
    double* dst = t.data().data();
    std::size_t j = 0;
    for (std::size_t outer = 0; outer < shape.numel(); outer += block)
        for (std::size_t lo = 0; lo < stride; ++lo, ++j) {
            const double* col = m.col(j);
            double* fiber = dst + outer + lo;
            for (std::size_t i = 0; i < mn; ++i) fiber[i * stride] = col[i];
        }
    return t;
}

DenseTensor mode_product(const DenseTensor& t, const Matrix& b, std::size_t mode,
                         bool transposed) {
    check_mode(t.shape(), mode);
    const std::size_t contracted = transposed ? b.rows() : b.cols();
    const std::size_t produced = transposed ? b.cols() : b.rows();
    if (contracted != t.shape().dim(mode))
        throw std::invalid_argument("mode_product: factor does not match mode dimension");
    Matrix unf = unfold(t, mode);
    Matrix prod = transposed ? matmul_tn(b, unf) : matmul(b, unf);
    std::vector<std::size_t> dims = t.shape().dims();
    dims[mode] = produced;
    return fold(prod, mode, Shape(std::move(dims)));
}

DenseTensor multi_mode_product(const DenseTensor& t, const std::vector<ModeFactor>& factors) {
    std::vector<ModeFactor> ordered = factors;
    std::sort(ordered.begin(), ordered.end(),
              [](const ModeFactor& a, const ModeFactor& b) { return a.mode < b.mode; });
    for (std::size_t i = 1; i < ordered.size(); ++i)
        if (ordered[i].mode == ordered[i - 1].mode)
            throw std::invalid_argument("multi_mode_product: duplicate mode");
    DenseTensor out = t;
    for (const ModeFactor& f : ordered)
        out = mode_product(out, *f.mat, f.mode, f.transposed);
    return out;
}

const std::vector<double>& vectorize(const DenseTensor& t) {
    return t.data();
}

double inner(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) throw std::invalid_argument("inner: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) s += a[i] * b[i];
    return s;
}

double fro_norm(const DenseTensor& t) {
    return std::sqrt(inner(t, t));
}

DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) throw std::invalid_argument("add: shape mismatch");
    DenseTensor c = a;
    for (std::size_t i = 0; i < c.numel(); ++i) c[i] += b[i];
    return c;
}

DenseTensor sub(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) throw std::invalid_argument("sub: shape mismatch");
    DenseTensor c = a;
    for (std::size_t i = 0; i < c.numel(); ++i) c[i] -= b[i];
    return c;
}

DenseTensor scale(const DenseTensor& t, double alpha) {
    DenseTensor c = t;
    for (double& x : c.data()) x *= alpha;
    return c;
}

} // namespace thosvd
