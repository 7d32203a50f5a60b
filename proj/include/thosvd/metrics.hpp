#ifndef THOSVD_METRICS_HPP
#define THOSVD_METRICS_HPP

#include <vector>

#include "thosvd/solvers.hpp"
#include "thosvd/tensor.hpp"

namespace thosvd {

struct RecoveryReport {
    double relerr = 0.0;
    double factor_err = 0.0;
    std::vector<double> per_mode_subspace_err;  // (sqrt(r_n) - ||A_n' Ahat_n||_F) / sqrt(r_n)
    bool success = false;
};

// ||rec - truth||_F / ||truth||_F
double relative_error(const DenseTensor& rec, const DenseTensor& truth);

// Distance of estimated factors to the ground truth: relative reconstruction
// mismatch plus the per-mode subspace terms.  Zero iff the estimate matches
// up to per-mode rotations.
double factor_recovery_error(const FactorModel& truth, const FactorModel& est);

std::vector<double> per_mode_subspace_errors(const FactorModel& truth, const FactorModel& est);

// err <= threshold (inclusive, threshold 1e-2 by default)
bool success(double err, double threshold = 1e-2);

RecoveryReport recovery_report(const FactorModel& truth, const DenseTensor& truth_tensor,
                               const FactorModel& est, const DenseTensor& rec,
                               double threshold = 1e-2);

} // namespace thosvd

#endif
