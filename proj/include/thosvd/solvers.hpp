#ifndef THOSVD_SOLVERS_HPP
#define THOSVD_SOLVERS_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "thosvd/observation.hpp"
#include "thosvd/rng.hpp"
#include "thosvd/tensor.hpp"

namespace thosvd {

struct MultilinearRank {
    std::vector<std::size_t> ranks;

    void validate_against(const Shape& shape) const;
    bool operator==(const MultilinearRank& other) const { return ranks == other.ranks; }
};

// Core tensor plus orthonormal factor matrices A_n (m_n x r_n).
struct FactorModel {
    DenseTensor core;
    std::vector<Matrix> factors;

    DenseTensor reconstruct() const;
    MultilinearRank ranks() const;
};

// Observed entries: values[i] belongs at mask.indices()[i].
struct ObservedData {
    ObservationMask mask;
    std::vector<double> values;

    ObservedData(ObservationMask m, std::vector<double> v);

    DenseTensor to_dense() const;  // zeros off Omega
    double norm() const;           // ||P_Omega(M)||_F
};

ObservedData observe(const ObservationMask& mask, const DenseTensor& truth);

enum class RankStrategyKind { Fixed, Increasing };

struct RankStrategy {
    RankStrategyKind kind = RankStrategyKind::Fixed;
    MultilinearRank start;
    MultilinearRank max;                 // Increasing only
    std::size_t delta = 1;               // Increasing only
    double fit_stall_threshold = 1e-2;   // Increasing only

    static RankStrategy fixed(MultilinearRank ranks);
    static RankStrategy increasing(MultilinearRank start, MultilinearRank max,
                                   std::size_t delta = 1, double fit_stall_threshold = 1e-2);
};

struct SolverConfig {
    double tol = 1e-5;
    std::size_t max_iters = 2000;
    double max_seconds = std::numeric_limits<double>::infinity();
    RankStrategy rank_strategy;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TraceRow {
    std::size_t iteration = 0;
    double fit = 0.0;
    double objective = 0.0;
    double rel_obj_change = 0.0;
    std::vector<double> gap_ratios;  // sigma_{r+1}/sigma_r of G_n, per mode (empty for ALS)
    double x_change = 0.0;
    std::vector<std::size_t> ranks;
    double seconds = 0.0;
    double complement_norm = 0.0;    // ||P_Omega^c(X)||_F, monitored only
};

struct IterationTrace {
    std::vector<TraceRow> rows;
    std::string stop_reason;
    bool overfitting_warning = false;
};

struct SolveResult {
    FactorModel model;
    DenseTensor x;
    IterationTrace trace;
};

// KKT system residuals with multipliers Lambda_n = A_n' G_n G_n' A_n and
// Y = P_Omega(X x_i A_i A_i') - P_Omega(M).
struct KktResidual {
    std::vector<Matrix> lambda;
    DenseTensor y;
    std::vector<double> res_a;     // ||G_n G_n' A_n - A_n Lambda_n||_F per mode
    double res_x = 0.0;            // ||X - X x_i A_i A_i' + P_Omega(Y)||_F
    std::vector<double> res_orth;  // ||A_n' A_n - I||_F per mode
    double res_feas = 0.0;         // ||P_Omega(X - M)||_F
};

// 0.5 * || core x_i A_i - x ||_F^2
double objective_f(const FactorModel& model, const DenseTensor& x);

// 0.5 * || x x_i A_i A_i' - x ||_F^2 for orthonormal factors
double objective_g(const std::vector<Matrix>& factors, const DenseTensor& x);

// Gradient of the restricted objective at a feasible point:
// P_Omega^c(x_hat) - P_Omega^c(x_hat x_i A_i A_i'); supported on Omega^c.
DenseTensor grad_h(const DenseTensor& x_hat, const std::vector<Matrix>& factors,
                   const ObservationMask& mask);
// Same, but verifies P_Omega(x_hat) matches the observed values first.
DenseTensor grad_h(const DenseTensor& x_hat, const std::vector<Matrix>& factors,
                   const ObservedData& data);

struct IhooiState {
    std::vector<Matrix> factors;
    DenseTensor x;
};

struct AlsasState {
    FactorModel model;
    DenseTensor x;
};

// One block-coordinate sweep of each solver; the state stays feasible.
TraceRow ihooi_iterate(IhooiState& state, const ObservedData& data,
                       const MultilinearRank& ranks);
TraceRow alsas_iterate(AlsasState& state, const ObservedData& data);

SolveResult ihooi_solve(const ObservedData& data, const SolverConfig& config);
SolveResult alsas_solve(const ObservedData& data, const SolverConfig& config);

// Complete-data special case, initialized at the truncated HOSVD.
SolveResult hooi_solve(const DenseTensor& data, const MultilinearRank& ranks,
                       const SolverConfig& config);

KktResidual kkt_residual(const std::vector<Matrix>& factors, const DenseTensor& x,
                         const ObservedData& data);

// Rank-increasing step: when |1 - fit_k/fit_{k-1}| stalls below the
// threshold, the mode with the most remaining headroom gains delta columns
// (random, orthonormalized) and the core is zero-padded to match.
// Returns true when the ranks changed.
bool maybe_increase_rank(const IterationTrace& trace, const SolverConfig& config,
                         FactorModel& model, MultilinearRank& ranks, Rng& rng);

// X-update under a general measurement constraint L(x) = measured.
DenseTensor generalized_x_update(const DenseTensor& x_hat,
                                 const std::vector<Matrix>& factors,
                                 const LinearMeasurement& op,
                                 const std::vector<double>& measured);

// Orthonormal basis of a Gaussian matrix; shared by solver initialization
// and the rank-increase augmentation.
Matrix random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng);

} // namespace thosvd

#endif
