#include "thosvd/observation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "thosvd/linalg.hpp"
#include "thosvd/rng.hpp"

namespace thosvd {

ObservationMask::ObservationMask(Shape shape, std::vector<std::size_t> indices)
    : shape_(std::move(shape)), indices_(std::move(indices)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] >= shape_.numel())
            throw std::invalid_argument("ObservationMask: index out of range");
        if (i > 0 && indices_[i] <= indices_[i - 1])
            throw std::invalid_argument("ObservationMask: indices must be strictly increasing");
    }
}

ObservationMask ObservationMask::full(const Shape& shape) {
    std::vector<std::size_t> idx(shape.numel());
    std::iota(idx.begin(), idx.end(), 0);
    return ObservationMask(shape, std::move(idx));
}

double ObservationMask::sample_ratio() const {
    return static_cast<double>(indices_.size()) / static_cast<double>(shape_.numel());
}

DenseTensor project(const ObservationMask& mask, const DenseTensor& t) {
    if (t.shape() != mask.shape()) throw std::invalid_argument("project: shape mismatch");
    DenseTensor out(t.shape());
    for (std::size_t idx : mask.indices()) out[idx] = t[idx];
    return out;
}

DenseTensor project_complement(const ObservationMask& mask, const DenseTensor& t) {
    if (t.shape() != mask.shape())
        throw std::invalid_argument("project_complement: shape mismatch");
    DenseTensor out = t;
    for (std::size_t idx : mask.indices()) out[idx] = 0.0;
    return out;
}

ObservationMask sample_uniform(const Shape& shape, double sr, std::uint64_t seed) {
    if (!(sr > 0.0) || sr > 1.0)
        throw std::invalid_argument("sample_uniform: sample ratio must be in (0, 1]");
    const std::size_t n = shape.numel();
    const std::size_t count =
        static_cast<std::size_t>(std::llround(sr * static_cast<double>(n)));
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return ObservationMask(shape, std::move(pool));
}

void LinearMeasurement::enforce(DenseTensor& x, const std::vector<double>& measured) const {
    std::vector<double> resid = apply(x);
    if (resid.size() != measured.size())
        throw std::invalid_argument("enforce: measurement length mismatch");
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = measured[i] - resid[i];
    DenseTensor corr = adjoint(gram_solve(resid));
    for (std::size_t i = 0; i < x.numel(); ++i) x[i] += corr[i];
}

SamplingMeasurement::SamplingMeasurement(ObservationMask mask) : mask_(std::move(mask)) {}

std::vector<double> SamplingMeasurement::apply(const DenseTensor& t) const {
    if (t.shape() != mask_.shape()) throw std::invalid_argument("apply: shape mismatch");
    std::vector<double> y(mask_.count());
    const auto& idx = mask_.indices();
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = t[idx[i]];
    return y;
}

DenseTensor SamplingMeasurement::adjoint(const std::vector<double>& y) const {
    if (y.size() != mask_.count()) throw std::invalid_argument("adjoint: length mismatch");
    DenseTensor t(mask_.shape());
    const auto& idx = mask_.indices();
    for (std::size_t i = 0; i < y.size(); ++i) t[idx[i]] = y[i];
    return t;
}

std::vector<double> SamplingMeasurement::gram_solve(const std::vector<double>& y) const {
    if (y.size() != mask_.count()) throw std::invalid_argument("gram_solve: length mismatch");
    return y;
}

void SamplingMeasurement::enforce(DenseTensor& x, const std::vector<double>& measured) const {
    if (x.shape() != mask_.shape()) throw std::invalid_argument("enforce: shape mismatch");
    if (measured.size() != mask_.count())
        throw std::invalid_argument("enforce: measurement length mismatch");
    const auto& idx = mask_.indices();
    for (std::size_t i = 0; i < measured.size(); ++i) x[idx[i]] = measured[i];
}

SamplingMeasurement sampling_as_measurement(ObservationMask mask) {
    return SamplingMeasurement(std::move(mask));
}

DenseMeasurement::DenseMeasurement(Shape domain, Matrix op)
    : domain_(std::move(domain)), op_(std::move(op)) {
    if (op_.cols() != domain_.numel())
        throw std::invalid_argument("DenseMeasurement: operator width must equal numel");
    if (op_.rows() == 0) throw std::invalid_argument("DenseMeasurement: empty operator");
    Matrix gram = matmul_nt(op_, op_);
    SvdResult s = svd(gram);
    gram_well_conditioned_ = s.s[0] > 0.0 && s.s.back() > 1e-12 * s.s[0];
    gram_inv_ = pinv(gram);
}

std::vector<double> DenseMeasurement::apply(const DenseTensor& t) const {
    if (t.shape() != domain_) throw std::invalid_argument("apply: shape mismatch");
    std::vector<double> y(op_.rows(), 0.0);
    for (std::size_t j = 0; j < op_.cols(); ++j) {
        const double xj = t[j];
        if (xj == 0.0) continue;
        const double* col = op_.col(j);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += col[i] * xj;
    }
    return y;
}

DenseTensor DenseMeasurement::adjoint(const std::vector<double>& y) const {
    if (y.size() != op_.rows()) throw std::invalid_argument("adjoint: length mismatch");
    DenseTensor t(domain_);
    for (std::size_t j = 0; j < op_.cols(); ++j) {
        const double* col = op_.col(j);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += col[i] * y[i];
        t[j] = s;
    }
    return t;
}

std::vector<double> DenseMeasurement::gram_solve(const std::vector<double>& y) const {
    if (y.size() != op_.rows()) throw std::invalid_argument("gram_solve: length mismatch");
    if (!gram_well_conditioned_)
        throw std::runtime_error("gram_solve: measurement Gram matrix is ill-conditioned");
    std::vector<double> z(y.size(), 0.0);
    for (std::size_t j = 0; j < gram_inv_.cols(); ++j) {
        const double yj = y[j];
        const double* col = gram_inv_.col(j);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += col[i] * yj;
    }
    return z;
}

} // namespace thosvd
