#include "thosvd/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "thosvd/linalg.hpp"
#include "thosvd/rng.hpp"

namespace thosvd {

namespace {

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (double& x : m.data()) x = rng.gaussian();
    return m;
}

void check_numerical_ranks(const DenseTensor& t, const MultilinearRank& ranks) {
    for (std::size_t n = 0; n < t.order(); ++n) {
        SvdResult s = svd(unfold(t, n));
        std::size_t rank = 0;
        const double cutoff = s.s.empty() ? 0.0 : 1e-8 * s.s[0];
        for (double sigma : s.s)
            if (sigma > cutoff) ++rank;
        if (rank != ranks.ranks[n])
            throw std::runtime_error("generate: instance missed the requested rank");
    }
}

} // namespace

std::pair<FactorModel, DenseTensor> generate(const GeneratorSpec& spec) {
    spec.ranks.validate_against(spec.shape);
    const std::size_t order = spec.shape.order();
    Rng rng(spec.seed);

    FactorModel model{DenseTensor(Shape(spec.ranks.ranks)), {}};
    if (spec.family == GeneratorFamily::Gaussian) {
        for (double& x : model.core.data()) x = rng.gaussian();
        if (spec.orthonormalize_factors) {
            for (std::size_t n = 0; n < order; ++n)
                model.factors.push_back(
                    economy_qr(gaussian_matrix(spec.shape.dim(n), spec.ranks.ranks[n], rng)).q);
        } else {
            // raw Gaussian factors build the tensor; the returned model folds
            // their QR triangles into the core so the product is unchanged
            for (std::size_t n = 0; n < order; ++n) {
                QrResult qr =
                    economy_qr(gaussian_matrix(spec.shape.dim(n), spec.ranks.ranks[n], rng));
                model.core = mode_product(model.core, qr.r, n);
                model.factors.push_back(std::move(qr.q));
            }
        }
    } else {
        for (double& x : model.core.data()) x = rng.uniform();
        for (std::size_t n = 0; n < order; ++n) {
            Matrix q =
                economy_qr(gaussian_matrix(spec.shape.dim(n), spec.ranks.ranks[n], rng)).q;
            // power-law column scaling diag(i^-0.5), folded into the core
            Matrix d(spec.ranks.ranks[n], spec.ranks.ranks[n]);
            for (std::size_t i = 0; i < d.rows(); ++i)
                d(i, i) = std::pow(static_cast<double>(i + 1), -0.5);
            model.core = mode_product(model.core, d, n);
            model.factors.push_back(std::move(q));
        }
    }

    DenseTensor truth = model.reconstruct();
    check_numerical_ranks(truth, spec.ranks);
    return {std::move(model), std::move(truth)};
}

DenseTensor add_noise(const DenseTensor& t, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be nonnegative");
    if (sigma == 0.0) return t;
    Rng rng(seed);
    DenseTensor out = t;
    for (double& x : out.data()) x += sigma * rng.gaussian();
    return out;
}

} // namespace thosvd
