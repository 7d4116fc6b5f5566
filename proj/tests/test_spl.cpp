#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "splnc/error.hpp"
#include "splnc/spl.hpp"

using namespace splnc;

namespace {

NeighborLosses make(double center, std::vector<double> neighbors) {
    NeighborLosses nl;
    nl.center = center;
    for (double l : neighbors) nl.neighbors[nl.count++] = l;
    return nl;
}

}  // namespace

TEST_CASE("binary weights") {
    CHECK(weight_binary(0.5, 1.0) == 1.0);
    CHECK(weight_binary(1.0, 1.0) == 0.0);
    CHECK(weight_binary(0.0, 1e-9) == 1.0);
    CHECK_THROWS_AS(weight_binary(0.1, 0.0), Error);
}

TEST_CASE("linear weights") {
    CHECK(weight_linear(0.25, 1.0) == 0.75);
    CHECK(weight_linear(2.0, 2.0) == 0.0);
    CHECK(weight_linear(0.0, 0.3) == 1.0);
    try {
        weight_linear(0.1, -1.0);
        FAIL("expected NonPositivePace");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositivePace);
    }
}

TEST_CASE("neighborhood entropy") {
    CHECK(neighborhood_gamma(make(0, std::vector<double>(8, 0.3)), EntropyMode::normalized) ==
          doctest::Approx(std::log(8.0)));
    CHECK(neighborhood_gamma(make(0, {1, 0, 0, 0, 0, 0, 0, 0}), EntropyMode::normalized) == 0.0);
    CHECK(neighborhood_gamma(make(0, {0.1, 0.2, 0.3, 0.4}), EntropyMode::normalized) ==
          doctest::Approx(oracle::shannon({0.1, 0.2, 0.3, 0.4})).epsilon(1e-14));
    CHECK(neighborhood_gamma(make(0, {}), EntropyMode::normalized) == 0.0);
    CHECK(neighborhood_gamma(make(0, {0, 0, 0}), EntropyMode::literal) == 0.0);

    // Literal mode divides by the mean: p_j = L_j / mean.
    const std::vector<double> l{0.1, 0.2, 0.3, 0.4};
    double want = 0.0;
    for (double x : l) want -= (x / 0.25) * std::log(x / 0.25);
    CHECK(neighborhood_gamma(make(0, l), EntropyMode::literal) == doctest::Approx(std::max(want, 0.0)));

    std::mt19937_64 g(31);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> n(1 + t % 8);
        for (auto& x : n) x = u(g);
        const double gam = neighborhood_gamma(make(0, n), EntropyMode::normalized);
        CHECK(gam >= 0.0);
        CHECK(gam <= std::log(8.0) + 1e-12);
    }
}

TEST_CASE("neighborhood weights") {
    CHECK(weight_neighborhood(make(0.1, std::vector<double>(8, 0.1)), 1.0, EntropyMode::normalized) ==
          doctest::Approx(1.0 - (0.1 + 0.1 * std::log(8.0))).epsilon(1e-12));
    CHECK(weight_neighborhood(make(0.0, std::vector<double>(8, 0.0)), 0.5, EntropyMode::normalized) == 1.0);
    CHECK(weight_neighborhood(make(0.7, {0.2, 0.9, 0.0}), 0.7, EntropyMode::normalized) == 0.0);
    CHECK_THROWS_AS(weight_neighborhood(make(0.1, {}), 0.0, EntropyMode::normalized), Error);
}

TEST_CASE("no neighbors reduces bitwise to the linear rule") {
    std::mt19937_64 g(32);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int t = 0; t < 10000; ++t) {
        const double l = u(g), lam = u(g) + 1e-6;
        for (auto mode : {EntropyMode::normalized, EntropyMode::literal})
            CHECK(std::bit_cast<std::uint64_t>(weight_neighborhood(make(l, {}), lam, mode)) ==
                  std::bit_cast<std::uint64_t>(weight_linear(l, lam)));
    }
}

TEST_CASE("weights stay in the unit interval") {
    std::mt19937_64 g(33);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int t = 0; t < 5000; ++t) {
        const double lam = u(g) + 1e-3;
        std::vector<double> n(t % 9);
        for (auto& x : n) x = u(g);
        const double l = u(g);
        for (double w : {weight_binary(l, lam), weight_linear(l, lam),
                         weight_neighborhood(make(l, n), lam, EntropyMode::normalized),
                         weight_neighborhood(make(l, n), lam, EntropyMode::literal)}) {
            CHECK(w >= 0.0);
            CHECK(w <= 1.0);
        }
    }
}

TEST_CASE("inclusion never shrinks as the pace grows under frozen losses") {
    std::mt19937_64 g(34);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::vector<NeighborLosses> samples;
    for (int i = 0; i < 200; ++i) {
        std::vector<double> n(i % 9);
        for (auto& x : n) x = u(g);
        samples.push_back(make(u(g), n));
    }
    std::vector<bool> included(samples.size(), false);
    for (double lam = 0.01; lam < 100.0; lam *= 1.3)
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const bool now = weight_neighborhood(samples[i], lam, EntropyMode::normalized) > 0.0;
            if (included[i]) CHECK(now);
            included[i] = now;
        }
}

TEST_CASE("pace schedule") {
    SplState s({0.0, 1.0}, 0.1, 1.05);
    s = advance_pace(s);
    CHECK(s.lambda == doctest::Approx(0.105).epsilon(1e-15));
    CHECK(s.iteration == 1);
    CHECK(s.weights == std::vector<double>{0.0, 1.0});

    SplState d({}, 1.0, 2.0);
    CHECK(advance_pace(d).lambda == 2.0);

    SplState m({}, 0.37, 1.05);
    for (int i = 0; i < 150; ++i) m = advance_pace(m);
    CHECK(std::abs(m.lambda - 0.37 * std::pow(1.05, 150)) <= 1e-12 * m.lambda);

    CHECK_THROWS_AS(SplState({}, 0.0, 1.05), Error);
    CHECK_THROWS_AS(SplState({}, 0.1, 1.0), Error);
    CHECK_THROWS_AS(SplState({1.5}, 0.1, 1.05), Error);
}

TEST_CASE("initial pace") {
    const std::vector<double> ones(7, 1.0);
    CHECK(init_pace(ones, 0.3) == 1.0);
    const std::vector<double> ten{10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
    CHECK(init_pace(ten, 0.3) == 3.0);
    const std::vector<double> zero{0.0};
    CHECK(init_pace(zero, 0.3) == 1e-6);
    try {
        init_pace(std::vector<double>{}, 0.3);
        FAIL("expected EmptyInput");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyInput);
    }
}
