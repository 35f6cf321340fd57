#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "rwt/baselines.hpp"
#include "rwt/model.hpp"

namespace rwt {

// Squared L2 distance to truth split into the retained-coefficient error and
// the rejected-energy remainder; mse == variance_term + bias_term by
// construction whenever the truth is exact.
struct RiskReport {
    std::string estimator;
    int dim = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string schedule;
    double mse = 0.0;
    double variance_term = 0.0;
    double bias_term = 0.0;
    std::uint64_t retained = 0;
    std::uint64_t calls = 0;
    double time_ms = 0.0;
    std::string truth_source = "analytic_mixture";

    static std::string csv_header();
    std::string csv_row() const;
};

// Parseval evaluation: variance over retained keys, bias as the energy left
// in the rejected indices.
RiskReport mse_exact(const SparseDensity& estimate, const CoefficientTruth& truth);

// 2^d * mean over uniform probe points of (f_hat(x) - f(x))^2; unbiased for
// the squared L2 distance, deterministic per seed.
double mse_sampled(const SparseDensity& estimate,
                   const std::function<double(const BitVector&)>& truth_density,
                   std::size_t probe_count, std::uint64_t seed);

} // namespace rwt
