#include <catch2/catch.hpp>

#include "gagt/rng.hpp"

using gagt::SplitMix64;

TEST_CASE("same seed reproduces the same stream", "[rng]") {
    SplitMix64 a(1234567), b(1234567);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("uniform01 stays in [0, 1) and is roughly centered", "[rng]") {
    SplitMix64 rng(7);
    double sum = 0.0;
    constexpr int kDraws = 20000;
    for (int i = 0; i < kDraws; ++i) {
        double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    REQUIRE(sum / kDraws == Approx(0.5).margin(0.02));
}

TEST_CASE("below(n) respects the bound and covers small ranges", "[rng]") {
    SplitMix64 rng(99);
    bool seen[5] = {false, false, false, false, false};
    for (int i = 0; i < 1000; ++i) {
        auto v = rng.below(5);
        REQUIRE(v < 5);
        seen[v] = true;
    }
    for (bool s : seen) REQUIRE(s);
}

TEST_CASE("normal draws have the right first two moments", "[rng]") {
    SplitMix64 rng(2024);
    constexpr int kDraws = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
        double z = rng.normal();
        sum += z;
        sum_sq += z * z;
    }
    const double mean = sum / kDraws;
    const double variance = sum_sq / kDraws - mean * mean;
    REQUIRE(mean == Approx(0.0).margin(0.03));
    REQUIRE(variance == Approx(1.0).margin(0.05));
}
