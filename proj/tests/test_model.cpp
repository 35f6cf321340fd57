#include <doctest.h>

#include <cmath>

#include "rwt/baselines.hpp"
#include "rwt/estimator.hpp"
#include "rwt/model.hpp"
#include "support/oracles.hpp"

using namespace rwt;

TEST_CASE("sparse density evaluation") {
    SUBCASE("uniform density from its single coefficient") {
        const int d = 5;
        SparseDensity f(d);
        f.set(BitVector::zeros(d), walsh_norm(d));
        SplitMix64 rng(41);
        for (int rep = 0; rep < 10; ++rep)
            CHECK(f.evaluate(oracles::random_index(rng, d)) ==
                  doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    }
    SUBCASE("empty map evaluates to zero") {
        SparseDensity f(4);
        CHECK(f.evaluate(BitVector::zeros(4)) == 0.0);
    }
    SUBCASE("agrees with the dense table route at d=4") {
        const int d = 4;
        SplitMix64 rng(43);
        DenseVector table(d);
        double total = 0.0;
        for (double& x : table.values) {
            x = rng.next_double();
            total += x;
        }
        for (double& x : table.values) x /= total;
        const DenseVector spectrum = fwht(table);
        SparseDensity f(d);
        for (std::uint64_t i = 0; i < spectrum.size(); ++i)
            f.set(BitVector::from_lex_index(i, d), spectrum.values[i]);
        for (std::uint64_t xb = 0; xb < (1ULL << d); ++xb) {
            const BitVector x(xb, d);
            CHECK(f.evaluate(x) == doctest::Approx(table.at(x)).epsilon(1e-12));
        }
    }
    SUBCASE("dimension mismatch") {
        SparseDensity f(4);
        CHECK_THROWS_AS(f.evaluate(BitVector::zeros(5)), std::invalid_argument);
    }
}

TEST_CASE("mixture density") {
    SUBCASE("all-half single component is uniform") {
        BernoulliMixture mix(3, {1.0}, {{0.5, 0.5, 0.5}});
        for (std::uint64_t xb = 0; xb < 8; ++xb)
            CHECK(mixture_density(mix, BitVector(xb, 3)) == doctest::Approx(0.125));
    }
    SUBCASE("degenerate point mass") {
        BernoulliMixture mix(4, {1.0}, {{1.0, 1.0, 1.0, 1.0}});
        CHECK(mixture_density(mix, BitVector::from_string("1111")) == doctest::Approx(1.0));
        CHECK(mixture_density(mix, BitVector::from_string("1101")) == doctest::Approx(0.0));
    }
    SUBCASE("benchmark mixture sums to one over the cube") {
        const auto mix = make_benchmark_mixture(15, 10, 3, 0.9, 99);
        double total = 0.0;
        for (std::uint64_t xb = 0; xb < (1ULL << 15); ++xb)
            total += mixture_density(mix, BitVector(xb, 15));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("invariants rejected") {
        CHECK_THROWS_AS(BernoulliMixture(3, {0.5, 0.4}, {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(BernoulliMixture(3, {1.0}, {{1.5, 0.5, 0.5}}), std::invalid_argument);
    }
}

TEST_CASE("mixture walsh coefficients") {
    SUBCASE("zero index is the normalization coefficient") {
        const auto mix = oracles::random_mixture(9, 4, 51);
        CHECK(mixture_walsh_coefficient(mix, BitVector::zeros(9)) ==
              doctest::Approx(walsh_norm(9)).epsilon(1e-14));
    }
    SUBCASE("unbiased covariates kill every nonzero index") {
        BernoulliMixture mix(5, {1.0}, {{0.5, 0.5, 0.5, 0.5, 0.5}});
        SplitMix64 rng(53);
        for (int rep = 0; rep < 10; ++rep) {
            BitVector s = oracles::random_index(rng, 5);
            if (s.bits == 0) s = BitVector::from_string("10000");
            CHECK(mixture_walsh_coefficient(mix, s) == doctest::Approx(0.0));
        }
    }
    SUBCASE("closed form matches the dense transform") {
        for (int d : {6, 10, 12}) {
            const auto mix = oracles::random_mixture(d, 3, 1000 + static_cast<std::uint64_t>(d));
            const DenseVector spectrum = fwht(mixture_dense_table(mix));
            SplitMix64 rng(57);
            for (int rep = 0; rep < 50; ++rep) {
                const BitVector s = oracles::random_index(rng, d);
                CHECK(mixture_walsh_coefficient(mix, s) ==
                      doctest::Approx(spectrum.at(s)).epsilon(1e-10));
            }
        }
        // benchmark mixture at d=15 against the dense oracle
        const auto mix = make_benchmark_mixture(15, 10, 3, 0.9, 7);
        const DenseVector spectrum = fwht(mixture_dense_table(mix));
        SplitMix64 rng(59);
        for (int rep = 0; rep < 200; ++rep) {
            const BitVector s = oracles::random_index(rng, 15);
            CHECK(mixture_walsh_coefficient(mix, s) ==
                  doctest::Approx(spectrum.at(s)).epsilon(1e-10));
        }
    }
}

TEST_CASE("sampling") {
    SUBCASE("point mass component") {
        BernoulliMixture mix(6, {1.0}, {{1, 1, 1, 1, 1, 1}});
        const auto data = sample(mix, 20, 5);
        for (std::size_t i = 0; i < data.size(); ++i)
            CHECK(data.sample(i) == BitVector::from_string("111111"));
    }
    SUBCASE("determinism per seed") {
        const auto mix = oracles::random_mixture(10, 3, 61);
        const auto a = sample(mix, 500, 12345);
        const auto b = sample(mix, 500, 12345);
        const auto c = sample(mix, 500, 54321);
        CHECK(a.samples() == b.samples());
        CHECK(a.samples() != c.samples());
    }
    SUBCASE("biased covariate marginals at d=15") {
        const auto mix = make_benchmark_mixture(15, 10, 3, 0.9, 21);
        const std::size_t n = 100000;
        const auto data = sample(mix, n, 77);
        for (int i = 0; i < 15; ++i) {
            double truth = 0.0;
            for (std::size_t c = 0; c < mix.component_count(); ++c)
                truth += mix.weights[c] * mix.components[c][static_cast<std::size_t>(i)];
            std::size_t ones = 0;
            for (std::uint64_t x : data.samples()) ones += (x >> i) & 1;
            const double freq = static_cast<double>(ones) / static_cast<double>(n);
            CHECK(std::abs(freq - truth) < 0.01);
        }
    }
    SUBCASE("n must be positive") {
        const auto mix = oracles::random_mixture(4, 2, 63);
        CHECK_THROWS_AS(sample(mix, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("weak lp radius") {
    SUBCASE("uniform density is in the unit-radius class") {
        const int d = 8;
        std::vector<double> mags{walsh_norm(d)};
        for (int i = 1; i < 20; ++i) mags.push_back(0.0);
        for (double p : {0.5, 1.0, 2.0})
            CHECK(weak_lp_radius(mags, p) == doctest::Approx(walsh_norm(d)));
    }
    SUBCASE("exact inverse-square law at p=1") {
        std::vector<double> mags;
        for (int m = 1; m <= 64; ++m)
            mags.push_back(1.0 / (static_cast<double>(m) * static_cast<double>(m)));
        CHECK(weak_lp_radius(mags, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("any density obeys the 1/sqrt(M) coefficient bound") {
        const int d = 8;
        const auto mix = oracles::random_mixture(d, 3, 67);
        const DenseVector spectrum = fwht(mixture_dense_table(mix));
        for (double v : spectrum.values) CHECK(std::abs(v) <= walsh_norm(d) + 1e-12);
    }
    SUBCASE("radius scales linearly") {
        std::vector<double> mags{0.5, 0.25, 0.125, 0.0625};
        const double base = weak_lp_radius(mags, 1.0);
        for (double& m : mags) m *= 3.0;
        CHECK(weak_lp_radius(mags, 1.0) == doctest::Approx(3.0 * base).epsilon(1e-12));
    }
    SUBCASE("unsorted input rejected") {
        CHECK_THROWS_AS(weak_lp_radius({0.1, 0.5}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(weak_lp_radius({0.5, 0.1}, 0.0), std::invalid_argument);
    }
}

TEST_CASE("clip and renormalize") {
    SUBCASE("a valid density passes through unchanged") {
        const int d = 4;
        SparseDensity f(d);
        f.set(BitVector::zeros(d), walsh_norm(d));
        const auto clipped = clip_and_renormalize_exact(f);
        CHECK(clipped.normalizer == doctest::Approx(1.0).epsilon(1e-12));
        for (std::uint64_t xb = 0; xb < 16; ++xb)
            CHECK(clipped.table.at(BitVector(xb, 4)) == doctest::Approx(1.0 / 16.0));
    }
    SUBCASE("output is a probability density whenever Z > 0") {
        SplitMix64 rng(71);
        const int d = 6;
        SparseDensity f(d);
        f.set(BitVector::zeros(d), walsh_norm(d));
        for (int rep = 0; rep < 10; ++rep)
            f.set(oracles::random_index(rng, d), 0.4 * (rng.next_double() - 0.5));
        const auto clipped = clip_and_renormalize_exact(f);
        double total = 0.0;
        for (double v : clipped.table.values) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("monte carlo normalizer tracks the exact one at d=12") {
        SplitMix64 rng(73);
        const int d = 12;
        SparseDensity f(d);
        f.set(BitVector::zeros(d), walsh_norm(d));
        for (int rep = 0; rep < 25; ++rep)
            f.set(oracles::random_index(rng, d), 0.02 * (rng.next_double() - 0.5));
        const auto exact = clip_and_renormalize_exact(f);
        const auto mc = clip_and_renormalize_monte_carlo(f, 1000000, 3);
        CHECK(std::abs(mc.normalizer - exact.normalizer) / exact.normalizer < 0.02);
    }
    SUBCASE("all-nonpositive estimate is an error") {
        SparseDensity f(4);
        f.set(BitVector::zeros(4), -walsh_norm(4));
        CHECK_THROWS_AS(clip_and_renormalize_exact(f), std::domain_error);
    }
}
