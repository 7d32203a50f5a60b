#ifndef THOSVD_OBSERVATION_HPP
#define THOSVD_OBSERVATION_HPP

#include <cstdint>
#include <vector>

#include "thosvd/tensor.hpp"

namespace thosvd {

// Index set Omega of observed entries, stored as strictly increasing flat
// indices into the lexicographic layout.
class ObservationMask {
public:
    ObservationMask(Shape shape, std::vector<std::size_t> indices);

    static ObservationMask full(const Shape& shape);

    const Shape& shape() const { return shape_; }
    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t count() const { return indices_.size(); }
    double sample_ratio() const;
    bool is_full() const { return indices_.size() == shape_.numel(); }

private:
    Shape shape_;
    std::vector<std::size_t> indices_;
};

// P_Omega: keep observed entries, zero the rest.  P_Omega^c is the complement.
DenseTensor project(const ObservationMask& mask, const DenseTensor& t);
DenseTensor project_complement(const ObservationMask& mask, const DenseTensor& t);

// Uniform sampling without replacement; |Omega| = round(sr * numel).
// Deterministic given the seed (partial Fisher-Yates over flat indices).
ObservationMask sample_uniform(const Shape& shape, double sr, std::uint64_t seed);

// Abstract linear measurement operator L with adjoint L* and a solver for
// the Gram system (L L*) z = y.
class LinearMeasurement {
public:
    virtual ~LinearMeasurement() = default;

    virtual const Shape& domain_shape() const = 0;
    virtual std::size_t measurement_count() const = 0;
    virtual std::vector<double> apply(const DenseTensor& t) const = 0;
    virtual DenseTensor adjoint(const std::vector<double>& y) const = 0;
    virtual std::vector<double> gram_solve(const std::vector<double>& y) const = 0;

    // Overwrites x with the closest tensor satisfying L(x) = measured,
    // i.e. x + L*(LL*)^{-1}(measured - L(x)).
    virtual void enforce(DenseTensor& x, const std::vector<double>& measured) const;
};

// L = P_Omega as a measurement operator; L L* is the identity, and enforce
// assigns the measured entries exactly.
class SamplingMeasurement final : public LinearMeasurement {
public:
    explicit SamplingMeasurement(ObservationMask mask);

    const Shape& domain_shape() const override { return mask_.shape(); }
    std::size_t measurement_count() const override { return mask_.count(); }
    std::vector<double> apply(const DenseTensor& t) const override;
    DenseTensor adjoint(const std::vector<double>& y) const override;
    std::vector<double> gram_solve(const std::vector<double>& y) const override;
    void enforce(DenseTensor& x, const std::vector<double>& measured) const override;

    const ObservationMask& mask() const { return mask_; }

private:
    ObservationMask mask_;
};

SamplingMeasurement sampling_as_measurement(ObservationMask mask);

// Small explicit operator given by a k x numel matrix acting on vec(x).
// gram_solve factors L L' once and refuses ill-conditioned systems.
class DenseMeasurement final : public LinearMeasurement {
public:
    DenseMeasurement(Shape domain, Matrix op);

    const Shape& domain_shape() const override { return domain_; }
    std::size_t measurement_count() const override { return op_.rows(); }
    std::vector<double> apply(const DenseTensor& t) const override;
    DenseTensor adjoint(const std::vector<double>& y) const override;
    std::vector<double> gram_solve(const std::vector<double>& y) const override;

private:
    Shape domain_;
    Matrix op_;
    Matrix gram_inv_;
    bool gram_well_conditioned_ = true;
};

} // namespace thosvd

#endif
