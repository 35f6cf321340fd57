#include <doctest.h>

#include <cmath>

#include "rwt/baselines.hpp"
#include "rwt/estimator.hpp"
#include "rwt/risk.hpp"
#include "support/oracles.hpp"

using namespace rwt;

TEST_CASE("total energy") {
    SUBCASE("uniform density") {
        const int d = 7;
        BernoulliMixture uniform(d, {1.0}, {std::vector<double>(d, 0.5)});
        CHECK(total_energy(uniform) == doctest::Approx(std::ldexp(1.0, -d)).epsilon(1e-14));
    }
    SUBCASE("point mass") {
        BernoulliMixture point(5, {1.0}, {{1, 0, 1, 0, 1}});
        CHECK(total_energy(point) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("closed form equals dense enumeration at d=12") {
        const auto mix = make_benchmark_mixture(12, 6, 3, 0.9, 53);
        const auto table = mixture_dense_table(mix);
        CHECK(total_energy(mix) == doctest::Approx(total_energy(table)).epsilon(1e-12));
    }
}

TEST_CASE("parseval risk report") {
    const int d = 8;
    const auto mix = make_benchmark_mixture(d, 4, 3, 0.9, 59);
    const auto truth = truth_from_mixture(mix);

    SUBCASE("truth measured against itself is zero") {
        SparseDensity exact(d);
        for (std::uint64_t bits = 0; bits < (1ULL << d); ++bits)
            exact.set(BitVector(bits, d), mixture_walsh_coefficient(mix, BitVector(bits, d)));
        const auto r = mse_exact(exact, truth);
        CHECK(r.mse == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(r.variance_term == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(r.bias_term == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("empty estimate carries the full energy as bias") {
        const auto r = mse_exact(SparseDensity(d), truth);
        CHECK(r.mse == doctest::Approx(total_energy(mix)).epsilon(1e-14));
        CHECK(r.variance_term == 0.0);
        CHECK(r.retained == 0);
    }
    SUBCASE("report is additive and matches dense enumeration") {
        const auto data = sample(mix, 900, 61);
        const auto est = rwt_estimate(data, ThresholdSchedule::constant(d)).density;
        const auto r = mse_exact(est, truth);
        CHECK(r.mse == doctest::Approx(r.variance_term + r.bias_term).epsilon(1e-12));
        double l2 = 0.0;
        for (std::uint64_t xb = 0; xb < (1ULL << d); ++xb) {
            const BitVector x(xb, d);
            const double diff = est.evaluate(x) - mixture_density(mix, x);
            l2 += diff * diff;
        }
        CHECK(r.mse == doctest::Approx(l2).epsilon(1e-10));
    }
}

TEST_CASE("sampled risk") {
    const int d = 12;
    const auto mix = make_benchmark_mixture(d, 5, 3, 0.9, 67);
    const auto truth = truth_from_mixture(mix);
    const auto data = sample(mix, 3000, 71);
    const auto est = rwt_estimate(data, ThresholdSchedule::constant(d)).density;
    auto truth_eval = [&](const BitVector& x) { return mixture_density(mix, x); };

    SUBCASE("estimate against itself is exactly zero") {
        auto self_eval = [&](const BitVector& x) { return est.evaluate(x); };
        CHECK(mse_sampled(est, self_eval, 2000, 5) == 0.0);
    }
    SUBCASE("deterministic per seed") {
        CHECK(mse_sampled(est, truth_eval, 5000, 9) == mse_sampled(est, truth_eval, 5000, 9));
    }
    SUBCASE("converges to the exact value") {
        const double exact = mse_exact(est, truth).mse;
        const double coarse = mse_sampled(est, truth_eval, 1000, 13);
        const double fine = mse_sampled(est, truth_eval, 1000000, 13);
        CHECK(std::abs(fine - exact) / exact < 0.05);
        CHECK(std::abs(fine - exact) <= std::abs(coarse - exact) + 0.05 * exact);
    }
}

TEST_CASE("risk csv row") {
    RiskReport r;
    r.estimator = "rwt";
    r.dim = 15;
    r.n = 1000;
    r.seed = 3;
    r.schedule = "constant";
    r.mse = 0.125;
    r.variance_term = 0.0625;
    r.bias_term = 0.0625;
    r.retained = 42;
    r.calls = 99;
    r.time_ms = 1.5;
    CHECK(RiskReport::csv_header() ==
          "estimator,d,n,seed,schedule,mse,variance_term,bias_term,retained,calls,time_ms");
    CHECK(r.csv_row() == "rwt,15,1000,3,constant,0.125,0.0625,0.0625,42,99,1.5");
}
