#ifndef THOSVD_SYNTHETIC_HPP
#define THOSVD_SYNTHETIC_HPP

#include <cstdint>
#include <utility>

#include "thosvd/solvers.hpp"
#include "thosvd/tensor.hpp"

namespace thosvd {

enum class GeneratorFamily { Gaussian, PowerLaw };

// Random low-multilinear-rank test instance.
//  Gaussian: core and factors i.i.d. standard normal.
//  PowerLaw: core uniform on [0,1), factors are orthonormal bases scaled by
//            diag(i^-0.5), so the unfoldings have power-law singular values.
struct GeneratorSpec {
    GeneratorFamily family = GeneratorFamily::Gaussian;
    Shape shape;
    MultilinearRank ranks;
    std::uint64_t seed = 0;
    bool orthonormalize_factors = true;
};

// Ground-truth model (orthonormal factors; any scaling folded into the core)
// and its reconstruction.  Deterministic per seed; every instance is checked
// to have the requested multilinear rank.
std::pair<FactorModel, DenseTensor> generate(const GeneratorSpec& spec);

// t + sigma * gaussian noise; sigma == 0 returns t bit-identically.
DenseTensor add_noise(const DenseTensor& t, double sigma, std::uint64_t seed);

} // namespace thosvd

#endif
