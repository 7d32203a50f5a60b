#include "thosvd/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "thosvd/linalg.hpp"

namespace thosvd {

namespace {

constexpr double kOrthTol = 1e-8;

double orth_violation(const Matrix& a) {
    Matrix g = matmul_tn(a, a);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return fro_norm(g);
}

void require_orthonormal(const std::vector<Matrix>& factors, const char* what) {
    for (const Matrix& a : factors)
        if (orth_violation(a) > kOrthTol)
            throw std::invalid_argument(std::string(what) + ": factor is not orthonormal");
}

void check_factor_shapes(const std::vector<Matrix>& factors, const Shape& shape,
                         const char* what) {
    if (factors.size() != shape.order())
        throw std::invalid_argument(std::string(what) + ": one factor per mode required");
    for (std::size_t n = 0; n < factors.size(); ++n)
        if (factors[n].rows() != shape.dim(n))
            throw std::invalid_argument(std::string(what) + ": factor rows mismatch mode dim");
}

// t x_i A_i' over all modes except skip (pass order() to contract every mode)
DenseTensor contract_transposed(const DenseTensor& t, const std::vector<Matrix>& factors,
                                std::size_t skip) {
    DenseTensor out = t;
    for (std::size_t n = 0; n < factors.size(); ++n) {
        if (n == skip) continue;
        out = mode_product(out, factors[n], n, /*transposed=*/true);
    }
    return out;
}

// core x_i A_i over all modes
DenseTensor expand(const DenseTensor& core, const std::vector<Matrix>& factors) {
    DenseTensor out = core;
    for (std::size_t n = 0; n < factors.size(); ++n)
        out = mode_product(out, factors[n], n);
    return out;
}

double fit_on_omega(const DenseTensor& recon, const ObservedData& data) {
    const auto& idx = data.mask.indices();
    double s = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double d = recon[idx[i]] - data.values[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double complement_norm_of(const DenseTensor& x, const ObservationMask& mask) {
    double total = 0.0;
    for (double v : x.data()) total += v * v;
    double omega = 0.0;
    for (std::size_t idx : mask.indices()) omega += x[idx] * x[idx];
    const double c2 = std::max(0.0, total - omega);
    return std::sqrt(c2);
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Appends `count` random columns to a, each orthonormalized against the
// columns before it.
void augment_with_random_columns(Matrix& a, std::size_t count, Rng& rng) {
    const std::size_t m = a.rows();
    for (std::size_t added = 0; added < count; ++added) {
        std::vector<double> v(m);
        double norm = 0.0;
        do {
            for (double& x : v) x = rng.gaussian();
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t j = 0; j < a.cols(); ++j) {
                    const double* aj = a.col(j);
                    double dot = 0.0;
                    for (std::size_t i = 0; i < m; ++i) dot += aj[i] * v[i];
                    for (std::size_t i = 0; i < m; ++i) v[i] -= dot * aj[i];
                }
            }
            norm = 0.0;
            for (double x : v) norm += x * x;
            norm = std::sqrt(norm);
        } while (norm < 1e-8);
        Matrix grown(m, a.cols() + 1);
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t i = 0; i < m; ++i) grown(i, j) = a(i, j);
        for (std::size_t i = 0; i < m; ++i) grown(i, a.cols()) = v[i] / norm;
        a = std::move(grown);
    }
}

DenseTensor zero_pad_mode(const DenseTensor& t, std::size_t mode, std::size_t extra) {
    std::vector<std::size_t> dims = t.shape().dims();
    dims[mode] += extra;
    Shape grown(dims);
    Matrix unf = unfold(t, mode);
    Matrix padded(dims[mode], unf.cols());
    for (std::size_t j = 0; j < unf.cols(); ++j)
        for (std::size_t i = 0; i < unf.rows(); ++i) padded(i, j) = unf(i, j);
    return fold(padded, mode, grown);
}

// eq-style stall test on successive fits; fit_curr == 0 is handled by the
// caller (convergence, not rank growth).
bool rank_increase_due(double fit_prev, double fit_curr, double threshold) {
    if (fit_prev <= 0.0) return false;
    return std::abs(1.0 - fit_curr / fit_prev) <= threshold;
}

// Mode with the most remaining headroom; ties go to the smallest index.
// Returns order() when no mode can grow.
std::size_t pick_growth_mode(const MultilinearRank& ranks, const MultilinearRank& max) {
    std::size_t best = ranks.ranks.size();
    std::size_t best_headroom = 0;
    for (std::size_t n = 0; n < ranks.ranks.size(); ++n) {
        const std::size_t head =
            max.ranks[n] > ranks.ranks[n] ? max.ranks[n] - ranks.ranks[n] : 0;
        if (head > best_headroom) {
            best_headroom = head;
            best = n;
        }
    }
    return best;
}

bool try_increase_rank(double fit_prev, double fit_curr, const RankStrategy& strategy,
                       std::vector<Matrix>& factors, DenseTensor* core,
                       MultilinearRank& ranks, Rng& rng) {
    if (strategy.kind != RankStrategyKind::Increasing) return false;
    if (!rank_increase_due(fit_prev, fit_curr, strategy.fit_stall_threshold)) return false;
    const std::size_t n0 = pick_growth_mode(ranks, strategy.max);
    if (n0 >= ranks.ranks.size()) return false;
    const std::size_t grow =
        std::min(strategy.delta, strategy.max.ranks[n0] - ranks.ranks[n0]);
    augment_with_random_columns(factors[n0], grow, rng);
    if (core != nullptr) *core = zero_pad_mode(*core, n0, grow);
    ranks.ranks[n0] += grow;
    return true;
}

} // namespace

void MultilinearRank::validate_against(const Shape& shape) const {
    if (ranks.size() != shape.order())
        throw std::invalid_argument("MultilinearRank: one rank per mode required");
    for (std::size_t n = 0; n < ranks.size(); ++n)
        if (ranks[n] == 0 || ranks[n] > shape.dim(n))
            throw std::invalid_argument("MultilinearRank: rank out of [1, m_n]");
}

DenseTensor FactorModel::reconstruct() const {
    if (factors.size() != core.order())
        throw std::invalid_argument("reconstruct: one factor per core mode required");
    return expand(core, factors);
}

MultilinearRank FactorModel::ranks() const {
    MultilinearRank r;
    for (const Matrix& a : factors) r.ranks.push_back(a.cols());
    return r;
}

ObservedData::ObservedData(ObservationMask m, std::vector<double> v)
    : mask(std::move(m)), values(std::move(v)) {
    if (values.size() != mask.count())
        throw std::invalid_argument("ObservedData: one value per observed index required");
}

DenseTensor ObservedData::to_dense() const {
    DenseTensor t(mask.shape());
    const auto& idx = mask.indices();
    for (std::size_t i = 0; i < idx.size(); ++i) t[idx[i]] = values[i];
    return t;
}

double ObservedData::norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

ObservedData observe(const ObservationMask& mask, const DenseTensor& truth) {
    if (truth.shape() != mask.shape()) throw std::invalid_argument("observe: shape mismatch");
    std::vector<double> vals(mask.count());
    const auto& idx = mask.indices();
    for (std::size_t i = 0; i < idx.size(); ++i) vals[i] = truth[idx[i]];
    return ObservedData(mask, std::move(vals));
}

RankStrategy RankStrategy::fixed(MultilinearRank ranks) {
    RankStrategy s;
    s.kind = RankStrategyKind::Fixed;
    s.start = std::move(ranks);
    return s;
}

RankStrategy RankStrategy::increasing(MultilinearRank start, MultilinearRank max,
                                      std::size_t delta, double fit_stall_threshold) {
    RankStrategy s;
    s.kind = RankStrategyKind::Increasing;
    s.start = std::move(start);
    s.max = std::move(max);
    s.delta = delta;
    s.fit_stall_threshold = fit_stall_threshold;
    return s;
}

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (rank_strategy.start.ranks.empty())
        throw std::invalid_argument("SolverConfig: rank strategy has no starting ranks");
    if (rank_strategy.kind == RankStrategyKind::Increasing) {
        if (rank_strategy.delta == 0)
            throw std::invalid_argument("SolverConfig: rank delta must be positive");
        if (!(rank_strategy.fit_stall_threshold > 0.0))
            throw std::invalid_argument("SolverConfig: stall threshold must be positive");
        if (rank_strategy.max.ranks.size() != rank_strategy.start.ranks.size())
            throw std::invalid_argument("SolverConfig: start/max rank order mismatch");
        for (std::size_t n = 0; n < rank_strategy.max.ranks.size(); ++n)
            if (rank_strategy.start.ranks[n] > rank_strategy.max.ranks[n])
                throw std::invalid_argument("SolverConfig: start ranks exceed max ranks");
    }
}

double objective_f(const FactorModel& model, const DenseTensor& x) {
    DenseTensor recon = model.reconstruct();
    if (recon.shape() != x.shape()) throw std::invalid_argument("objective_f: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double d = recon[i] - x[i];
        s += d * d;
    }
    return 0.5 * s;
}

double objective_g(const std::vector<Matrix>& factors, const DenseTensor& x) {
    check_factor_shapes(factors, x.shape(), "objective_g");
    require_orthonormal(factors, "objective_g");
    DenseTensor recon = expand(contract_transposed(x, factors, factors.size()), factors);
    double s = 0.0;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double d = recon[i] - x[i];
        s += d * d;
    }
    return 0.5 * s;
}

DenseTensor grad_h(const DenseTensor& x_hat, const std::vector<Matrix>& factors,
                   const ObservationMask& mask) {
    if (x_hat.shape() != mask.shape()) throw std::invalid_argument("grad_h: shape mismatch");
    check_factor_shapes(factors, x_hat.shape(), "grad_h");
    require_orthonormal(factors, "grad_h");
    DenseTensor recon = expand(contract_transposed(x_hat, factors, factors.size()), factors);
    DenseTensor g(x_hat.shape());
    for (std::size_t i = 0; i < g.numel(); ++i) g[i] = x_hat[i] - recon[i];
    for (std::size_t idx : mask.indices()) g[idx] = 0.0;
    return g;
}

DenseTensor grad_h(const DenseTensor& x_hat, const std::vector<Matrix>& factors,
                   const ObservedData& data) {
    const auto& idx = data.mask.indices();
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (x_hat[idx[i]] != data.values[i])
            throw std::invalid_argument("grad_h: x_hat does not match the observed entries");
    return grad_h(x_hat, factors, data.mask);
}

TraceRow ihooi_iterate(IhooiState& state, const ObservedData& data,
                       const MultilinearRank& ranks) {
    const Shape& shape = state.x.shape();
    if (shape != data.mask.shape()) throw std::invalid_argument("ihooi_iterate: shape mismatch");
    check_factor_shapes(state.factors, shape, "ihooi_iterate");
    ranks.validate_against(shape);
    const std::size_t order = shape.order();

    TraceRow row;
    row.gap_ratios.resize(order);
    for (std::size_t n = 0; n < order; ++n) {
        DenseTensor contracted = contract_transposed(state.x, state.factors, n);
        Matrix g = unfold(contracted, n);
        auto [u, gap] = leading_left_singular_vectors(g, ranks.ranks[n]);
        state.factors[n] = std::move(u);
        row.gap_ratios[n] = gap;
    }

    // X-update (keeps the observed entries fixed)
    DenseTensor recon =
        expand(contract_transposed(state.x, state.factors, order), state.factors);
    if (data.mask.is_full()) {
        // no free entries: x stays put and the update product already gives
        // the fit and objective of the new iterate
        double fit2 = 0.0;
        for (std::size_t i = 0; i < recon.numel(); ++i) {
            const double d = recon[i] - state.x[i];
            fit2 += d * d;
        }
        row.fit = std::sqrt(fit2);
        row.objective = 0.5 * fit2;
        row.x_change = 0.0;
        row.complement_norm = 0.0;
        row.ranks = ranks.ranks;
        return row;
    }

    const auto& idx = data.mask.indices();
    double xchg2 = 0.0;
    {
        std::size_t p = 0;
        for (std::size_t flat = 0; flat < recon.numel(); ++flat) {
            if (p < idx.size() && idx[p] == flat) {
                recon[flat] = data.values[p];
                ++p;
            } else {
                const double d = recon[flat] - state.x[flat];
                xchg2 += d * d;
            }
        }
    }
    state.x = std::move(recon);

    DenseTensor recon2 =
        expand(contract_transposed(state.x, state.factors, order), state.factors);
    row.fit = fit_on_omega(recon2, data);
    double s = 0.0;
    for (std::size_t i = 0; i < recon2.numel(); ++i) {
        const double d = recon2[i] - state.x[i];
        s += d * d;
    }
    row.objective = 0.5 * s;
    row.x_change = std::sqrt(xchg2);
    row.complement_norm = complement_norm_of(state.x, data.mask);
    row.ranks = ranks.ranks;
    return row;
}

TraceRow alsas_iterate(AlsasState& state, const ObservedData& data) {
    const Shape& shape = state.x.shape();
    if (shape != data.mask.shape()) throw std::invalid_argument("alsas_iterate: shape mismatch");
    check_factor_shapes(state.model.factors, shape, "alsas_iterate");
    std::vector<Matrix>& factors = state.model.factors;
    const std::size_t order = shape.order();

    // core update, closed form for orthonormal factors
    DenseTensor core = contract_transposed(state.x, factors, order);

    // per-mode least squares against B_n built from already-updated factors
    for (std::size_t n = 0; n < order; ++n) {
        DenseTensor b = core;
        for (std::size_t i = 0; i < order; ++i) {
            if (i == n) continue;
            b = mode_product(b, factors[i], i);
        }
        factors[n] = lsq_via_pinv(unfold(state.x, n), unfold(b, n));
    }

    // QR renormalization; the R factors fold into the core
    for (std::size_t n = 0; n < order; ++n) {
        QrResult qr = economy_qr(factors[n]);
        factors[n] = std::move(qr.q);
        core = mode_product(core, qr.r, n);
    }
    state.model.core = std::move(core);

    DenseTensor recon = expand(state.model.core, factors);
    TraceRow row;
    row.fit = fit_on_omega(recon, data);
    row.objective = 0.5 * row.fit * row.fit;

    const auto& idx = data.mask.indices();
    double xchg2 = 0.0;
    {
        std::size_t p = 0;
        for (std::size_t flat = 0; flat < recon.numel(); ++flat) {
            if (p < idx.size() && idx[p] == flat) {
                recon[flat] = data.values[p];
                ++p;
            } else {
                const double d = recon[flat] - state.x[flat];
                xchg2 += d * d;
            }
        }
    }
    state.x = std::move(recon);
    row.x_change = std::sqrt(xchg2);
    row.complement_norm =
        data.mask.is_full() ? 0.0 : complement_norm_of(state.x, data.mask);
    row.ranks = state.model.ranks().ranks;
    return row;
}

namespace {

enum class SolverKind { Ihooi, Alsas };

SolveResult solve_driver(const ObservedData& data, const SolverConfig& config,
                         SolverKind kind, const std::vector<Matrix>* init_factors) {
    config.validate();
    if (data.mask.count() == 0) throw std::invalid_argument("solve: empty observation set");
    const Shape& shape = data.mask.shape();
    MultilinearRank ranks = config.rank_strategy.start;
    ranks.validate_against(shape);
    if (config.rank_strategy.kind == RankStrategyKind::Increasing)
        config.rank_strategy.max.validate_against(shape);

    SolveResult result{FactorModel{DenseTensor(shape), {}}, DenseTensor(shape), {}};
    IterationTrace& trace = result.trace;
    if (!data.mask.is_full()) {
        bool all_full_rank = true;
        for (std::size_t n = 0; n < shape.order(); ++n)
            if (ranks.ranks[n] < shape.dim(n)) all_full_rank = false;
        trace.overfitting_warning = all_full_rank;
    }

    Rng rng(config.seed);
    std::vector<Matrix> factors;
    if (init_factors != nullptr) {
        factors = *init_factors;
    } else {
        for (std::size_t n = 0; n < shape.order(); ++n)
            factors.push_back(random_orthonormal(shape.dim(n), ranks.ranks[n], rng));
    }
    DenseTensor x0 = data.to_dense();
    const double norm_omega = data.norm();

    IhooiState ih{factors, x0};
    AlsasState als{FactorModel{DenseTensor(shape), {}}, x0};
    if (kind == SolverKind::Alsas) {
        als.model.factors = factors;
        als.model.core = contract_transposed(x0, factors, shape.order());
    }

    // objective at the initial point, for the first relative-change test
    double obj_prev;
    double fit_prev;
    {
        DenseTensor recon0 = (kind == SolverKind::Ihooi)
                                 ? expand(contract_transposed(x0, factors, shape.order()), factors)
                                 : expand(als.model.core, als.model.factors);
        fit_prev = fit_on_omega(recon0, data);
        double s = 0.0;
        for (std::size_t i = 0; i < recon0.numel(); ++i) {
            const double d = recon0[i] - x0[i];
            s += d * d;
        }
        obj_prev = 0.5 * s;
    }

    Stopwatch clock;
    for (std::size_t k = 0; k < config.max_iters; ++k) {
        TraceRow row = (kind == SolverKind::Ihooi) ? ihooi_iterate(ih, data, ranks)
                                                   : alsas_iterate(als, data);
        row.iteration = k;
        row.seconds = clock.seconds();
        row.rel_obj_change = std::abs(row.objective - obj_prev) / (1.0 + obj_prev);
        trace.rows.push_back(row);

        if (norm_omega > 0.0 && row.fit / norm_omega <= config.tol) {
            trace.stop_reason = "fit_tol";
            break;
        }
        bool increased = false;
        if (config.rank_strategy.kind == RankStrategyKind::Increasing) {
            if (row.fit == 0.0) {
                trace.stop_reason = "fit_zero";
                break;
            }
            std::vector<Matrix>& live_factors =
                (kind == SolverKind::Ihooi) ? ih.factors : als.model.factors;
            DenseTensor* live_core = (kind == SolverKind::Alsas) ? &als.model.core : nullptr;
            increased = try_increase_rank(fit_prev, row.fit, config.rank_strategy,
                                          live_factors, live_core, ranks, rng);
        }
        if (!increased && row.rel_obj_change <= config.tol) {
            trace.stop_reason = "obj_tol";
            break;
        }
        if (row.seconds >= config.max_seconds) {
            trace.stop_reason = "max_seconds";
            break;
        }
        fit_prev = row.fit;
        obj_prev = row.objective;
    }
    if (trace.stop_reason.empty()) trace.stop_reason = "max_iters";

    if (kind == SolverKind::Ihooi) {
        result.model.factors = std::move(ih.factors);
        result.model.core =
            contract_transposed(ih.x, result.model.factors, shape.order());
        result.x = std::move(ih.x);
    } else {
        result.model = std::move(als.model);
        result.x = std::move(als.x);
    }
    return result;
}

} // namespace

SolveResult ihooi_solve(const ObservedData& data, const SolverConfig& config) {
    return solve_driver(data, config, SolverKind::Ihooi, nullptr);
}

SolveResult alsas_solve(const ObservedData& data, const SolverConfig& config) {
    return solve_driver(data, config, SolverKind::Alsas, nullptr);
}

SolveResult hooi_solve(const DenseTensor& data, const MultilinearRank& ranks,
                       const SolverConfig& config) {
    ranks.validate_against(data.shape());
    for (double v : data.data())
        if (!std::isfinite(v)) throw std::invalid_argument("hooi_solve: non-finite input");
    // truncated HOSVD start, refined by the sweeps
    std::vector<Matrix> init;
    for (std::size_t n = 0; n < data.order(); ++n)
        init.push_back(leading_left_singular_vectors(unfold(data, n), ranks.ranks[n]).first);
    ObservedData full = observe(ObservationMask::full(data.shape()), data);
    SolverConfig cfg = config;
    cfg.rank_strategy = RankStrategy::fixed(ranks);
    return solve_driver(full, cfg, SolverKind::Ihooi, &init);
}

KktResidual kkt_residual(const std::vector<Matrix>& factors, const DenseTensor& x,
                         const ObservedData& data) {
    const Shape& shape = x.shape();
    if (shape != data.mask.shape()) throw std::invalid_argument("kkt_residual: shape mismatch");
    check_factor_shapes(factors, shape, "kkt_residual");
    const std::size_t order = shape.order();

    KktResidual res{{}, DenseTensor(shape), {}, 0.0, {}, 0.0};
    res.lambda.reserve(order);
    res.res_a.reserve(order);
    res.res_orth.reserve(order);
    for (std::size_t n = 0; n < order; ++n) {
        Matrix g = unfold(contract_transposed(x, factors, n), n);
        Matrix w = matmul_tn(g, factors[n]);   // G' A
        Matrix lambda = matmul_tn(w, w);       // A' G G' A, symmetric by construction
        res.res_a.push_back(fro_norm(sub(matmul(g, w), matmul(factors[n], lambda))));
        Matrix orth = matmul_tn(factors[n], factors[n]);
        for (std::size_t i = 0; i < orth.rows(); ++i) orth(i, i) -= 1.0;
        res.res_orth.push_back(fro_norm(orth));
        res.lambda.push_back(std::move(lambda));
    }

    DenseTensor recon = expand(contract_transposed(x, factors, order), factors);
    const auto& idx = data.mask.indices();
    for (std::size_t i = 0; i < idx.size(); ++i)
        res.y[idx[i]] = recon[idx[i]] - data.values[i];

    DenseTensor t(shape);
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = x[i] - recon[i];
    for (std::size_t i = 0; i < idx.size(); ++i) t[idx[i]] += res.y[idx[i]];
    res.res_x = fro_norm(t);

    double feas2 = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double d = x[idx[i]] - data.values[i];
        feas2 += d * d;
    }
    res.res_feas = std::sqrt(feas2);
    return res;
}

bool maybe_increase_rank(const IterationTrace& trace, const SolverConfig& config,
                         FactorModel& model, MultilinearRank& ranks, Rng& rng) {
    if (config.rank_strategy.kind != RankStrategyKind::Increasing) return false;
    if (trace.rows.size() < 2) return false;
    const double fit_prev = trace.rows[trace.rows.size() - 2].fit;
    const double fit_curr = trace.rows.back().fit;
    if (fit_curr == 0.0) return false;
    return try_increase_rank(fit_prev, fit_curr, config.rank_strategy, model.factors,
                             &model.core, ranks, rng);
}

DenseTensor generalized_x_update(const DenseTensor& x_hat,
                                 const std::vector<Matrix>& factors,
                                 const LinearMeasurement& op,
                                 const std::vector<double>& measured) {
    if (x_hat.shape() != op.domain_shape())
        throw std::invalid_argument("generalized_x_update: shape mismatch");
    if (measured.size() != op.measurement_count())
        throw std::invalid_argument("generalized_x_update: measurement length mismatch");
    check_factor_shapes(factors, x_hat.shape(), "generalized_x_update");
    DenseTensor recon =
        expand(contract_transposed(x_hat, factors, factors.size()), factors);
    op.enforce(recon, measured);
    return recon;
}

Matrix random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng) {
    if (cols > rows) throw std::invalid_argument("random_orthonormal: cols must be <= rows");
    Matrix g(rows, cols);
    for (double& x : g.data()) x = rng.gaussian();
    return economy_qr(g).q;
}

} // namespace thosvd
