#include <doctest.h>

#include <cstring>

#include "helpers.hpp"
#include "thosvd/linalg.hpp"
#include "thosvd/synthetic.hpp"

using namespace thosvd;

TEST_CASE("generation is deterministic per seed") {
    GeneratorSpec spec{GeneratorFamily::Gaussian, Shape({6, 5, 4}),
                       MultilinearRank{{2, 3, 2}}, 99, true};
    auto [m1, t1] = generate(spec);
    auto [m2, t2] = generate(spec);
    CHECK(std::memcmp(t1.data().data(), t2.data().data(), t1.numel() * 8) == 0);
    spec.seed = 100;
    auto [m3, t3] = generate(spec);
    CHECK(testutil::max_abs_diff(t1, t3) > 0.0);
}

TEST_CASE("generated models satisfy the factor model invariants") {
    for (GeneratorFamily family : {GeneratorFamily::Gaussian, GeneratorFamily::PowerLaw}) {
        for (bool orth : {true, false}) {
            GeneratorSpec spec{family, Shape({7, 6, 5}), MultilinearRank{{3, 2, 2}}, 5, orth};
            auto [model, truth] = generate(spec);
            for (const Matrix& a : model.factors) CHECK(testutil::orth_defect(a) <= 1e-10);
            CHECK(fro_norm(sub(model.reconstruct(), truth)) <= 1e-12 * fro_norm(truth));
        }
    }
}

TEST_CASE("full-rank request yields strictly positive smallest singular values") {
    auto [model, truth] = generate({GeneratorFamily::Gaussian, Shape({4, 4, 4}),
                                    MultilinearRank{{4, 4, 4}}, 21, true});
    for (std::size_t n = 0; n < 3; ++n) {
        SvdResult s = svd(unfold(truth, n));
        CHECK(s.s.back() > 0.0);
    }
}

TEST_CASE("unfolding numerical ranks equal the requested ranks") {
    auto [model, truth] = generate({GeneratorFamily::Gaussian, Shape({20, 20, 20}),
                                    MultilinearRank{{3, 3, 3}}, 8, true});
    for (std::size_t n = 0; n < 3; ++n) {
        SvdResult s = svd(unfold(truth, n));
        std::size_t rank = 0;
        for (double sigma : s.s)
            if (sigma > 1e-8 * s.s[0]) ++rank;
        CHECK(rank == 3);
    }
}

TEST_CASE("generation rejects ranks above the dimensions") {
    CHECK_THROWS_AS(generate({GeneratorFamily::Gaussian, Shape({3, 3}),
                              MultilinearRank{{4, 2}}, 0, true}),
                    std::invalid_argument);
}

TEST_CASE("noise injection") {
    Rng rng(601);
    DenseTensor t = testutil::random_tensor({10, 10, 10}, rng);
    DenseTensor same = add_noise(t, 0.0, 4);
    CHECK(std::memcmp(same.data().data(), t.data().data(), t.numel() * 8) == 0);

    const double sigma = 0.3;
    DenseTensor noisy = add_noise(t, sigma, 4);
    DenseTensor noisy2 = add_noise(t, sigma, 4);
    CHECK(std::memcmp(noisy.data().data(), noisy2.data().data(), t.numel() * 8) == 0);

    double energy = 0.0;
    for (std::size_t i = 0; i < t.numel(); ++i) {
        const double d = noisy[i] - t[i];
        energy += d * d;
    }
    const double scaled = energy / (sigma * sigma * static_cast<double>(t.numel()));
    CHECK(scaled >= 0.8);
    CHECK(scaled <= 1.2);

    CHECK_THROWS_AS(add_noise(t, -1.0, 0), std::invalid_argument);
}
