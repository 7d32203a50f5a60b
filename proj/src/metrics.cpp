#include "thosvd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thosvd/linalg.hpp"

namespace thosvd {

double relative_error(const DenseTensor& rec, const DenseTensor& truth) {
    if (rec.shape() != truth.shape())
        throw std::invalid_argument("relative_error: shape mismatch");
    const double denom = fro_norm(truth);
    if (denom == 0.0) throw std::invalid_argument("relative_error: zero truth tensor");
    return fro_norm(sub(rec, truth)) / denom;
}

namespace {

void check_compatible(const FactorModel& truth, const FactorModel& est) {
    if (truth.factors.size() != est.factors.size())
        throw std::invalid_argument("factor comparison: order mismatch");
    for (std::size_t n = 0; n < truth.factors.size(); ++n) {
        if (truth.factors[n].rows() != est.factors[n].rows() ||
            truth.factors[n].cols() != est.factors[n].cols())
            throw std::invalid_argument("factor comparison: rank mismatch");
    }
}

} // namespace

std::vector<double> per_mode_subspace_errors(const FactorModel& truth,
                                             const FactorModel& est) {
    check_compatible(truth, est);
    std::vector<double> errs;
    errs.reserve(truth.factors.size());
    for (std::size_t n = 0; n < truth.factors.size(); ++n) {
        const double sqrt_r = std::sqrt(static_cast<double>(truth.factors[n].cols()));
        const double overlap = fro_norm(matmul_tn(truth.factors[n], est.factors[n]));
        // the theorem bounds overlap by sqrt(r); clamp roundoff excess
        errs.push_back(std::max(0.0, (sqrt_r - overlap) / sqrt_r));
    }
    return errs;
}

double factor_recovery_error(const FactorModel& truth, const FactorModel& est) {
    check_compatible(truth, est);
    DenseTensor truth_rec = truth.reconstruct();
    const double denom = fro_norm(truth_rec);
    if (denom == 0.0) throw std::invalid_argument("factor_recovery_error: zero ground truth");
    double err = fro_norm(sub(truth_rec, est.reconstruct())) / denom;
    for (double e : per_mode_subspace_errors(truth, est)) err += e;
    return err;
}

bool success(double err, double threshold) {
    return err <= threshold;
}

RecoveryReport recovery_report(const FactorModel& truth, const DenseTensor& truth_tensor,
                               const FactorModel& est, const DenseTensor& rec,
                               double threshold) {
    RecoveryReport report;
    report.relerr = relative_error(rec, truth_tensor);
    report.factor_err = factor_recovery_error(truth, est);
    report.per_mode_subspace_err = per_mode_subspace_errors(truth, est);
    report.success = success(report.factor_err, threshold);
    return report;
}

} // namespace thosvd
