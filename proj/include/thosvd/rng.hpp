#ifndef THOSVD_RNG_HPP
#define THOSVD_RNG_HPP

#include <array>
#include <cstdint>
#include <initializer_list>

namespace thosvd {

// xoshiro256++ generator (Blackman & Vigna), state expanded from the seed
// with splitmix64.  All experiment randomness flows through this type so
// results are reproducible across runs given the same seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();

    // uniform double in [0, 1) with 53 random bits
    double uniform();

    // uniform integer in [0, bound), bias-free
    std::uint64_t below(std::uint64_t bound);

    // standard normal via Box-Muller (two fresh uniforms per call)
    double gaussian();

    // splitmix64-based combine for deriving per-task seeds
    static std::uint64_t mix(std::initializer_list<std::uint64_t> words);

private:
    std::array<std::uint64_t, 4> state_;
};

} // namespace thosvd

#endif
