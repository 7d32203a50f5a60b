#include <doctest.h>

#include <cstring>
#include <filesystem>

#include "helpers.hpp"
#include "thosvd/io.hpp"

using namespace thosvd;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("thosvd_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("binary tensor round trip is bit exact") {
    TempDir dir;
    Rng rng(701);
    DenseTensor t = testutil::random_tensor({3, 5, 2}, rng);
    t[0] = -0.0;
    t[1] = 1e-308;
    save_tensor_binary(t, dir.file("t.thos"));
    DenseTensor back = load_tensor_binary(dir.file("t.thos"));
    REQUIRE(back.shape() == t.shape());
    CHECK(std::memcmp(back.data().data(), t.data().data(), t.numel() * 8) == 0);
}

TEST_CASE("text tensor round trip is value exact") {
    TempDir dir;
    Rng rng(703);
    DenseTensor t = testutil::random_tensor({4, 3}, rng, -10.0, 10.0);
    save_tensor_text(t, dir.file("t.txt"));
    DenseTensor back = load_tensor_text(dir.file("t.txt"));
    REQUIRE(back.shape() == t.shape());
    // 17 significant digits reproduce doubles exactly
    CHECK(std::memcmp(back.data().data(), t.data().data(), t.numel() * 8) == 0);
}

TEST_CASE("corrupt tensor files are rejected") {
    TempDir dir;
    {
        std::ofstream f(dir.file("bad.thos"), std::ios::binary);
        f << "NOPE";
    }
    CHECK_THROWS_AS(load_tensor_binary(dir.file("bad.thos")), std::runtime_error);
    CHECK_THROWS_AS(load_tensor_binary(dir.file("missing.thos")), std::runtime_error);
}

TEST_CASE("mask round trip") {
    TempDir dir;
    ObservationMask mask = sample_uniform(Shape({4, 5, 3}), 0.4, 31);
    save_mask(mask, dir.file("mask.txt"));
    ObservationMask back = load_mask(dir.file("mask.txt"));
    CHECK(back.shape() == mask.shape());
    CHECK(back.indices() == mask.indices());
}

TEST_CASE("manifest round trip") {
    TempDir dir;
    GeneratorSpec spec{GeneratorFamily::PowerLaw, Shape({10, 9, 8}),
                       MultilinearRank{{3, 2, 4}}, 777, false};
    save_manifest(spec, dir.file("manifest.txt"));
    GeneratorSpec back = load_manifest(dir.file("manifest.txt"));
    CHECK(back.family == GeneratorFamily::PowerLaw);
    CHECK(back.shape == spec.shape);
    CHECK(back.ranks.ranks == spec.ranks.ranks);
    CHECK(back.seed == 777);
    CHECK(back.orthonormalize_factors == false);
}
