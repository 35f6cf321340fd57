#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>

#include "rwt/estimator.hpp"
#include "rwt/model.hpp"

namespace rwt {

// Exact coefficient access for a ground-truth density: theta(s) for any index
// plus the total energy sum_s theta_s^2 = sum_x f(x)^2.
struct CoefficientTruth {
    int dim = 0;
    std::function<double(const BitVector&)> theta;
    double energy = 0.0;
};

CoefficientTruth truth_from_mixture(const BernoulliMixture& mix);
CoefficientTruth truth_from_dense(const DenseVector& table, int oracle_cap = kOracleCapDim);

// sum_x f(x)^2 for a mixture in closed form:
// sum_{c,c'} w_c w_c' prod_i (p_{c,i} p_{c',i} + (1-p_{c,i})(1-p_{c',i})).
double total_energy(const BernoulliMixture& mix);
double total_energy(const DenseVector& table);

// Termwise hard thresholding: retain s iff theta_hat_s^2 > 2/(M(n+1)),
// strictly. Requires all 2^d empirical coefficients.
SparseDensity ott_kronmal(const Dataset& data, int oracle_cap = kOracleCapDim);

// Oracle-threshold estimator: retain s iff the TRUE theta_s^2 > 1/(M(n+1)),
// strictly; retained values are the empirical estimates.
SparseDensity ideal_estimator(const Dataset& data, const CoefficientTruth& truth,
                              int oracle_cap = kOracleCapDim);

// Empirical frequency of every observed point; evaluable without 2^d storage.
struct HistogramDensity {
    int dim = 0;
    std::unordered_map<std::uint64_t, double> mass; // point -> relative frequency

    double evaluate(const BitVector& x) const {
        if (x.len != dim) throw std::invalid_argument("HistogramDensity: length != dim");
        auto it = mass.find(x.bits);
        return it == mass.end() ? 0.0 : it->second;
    }
};

HistogramDensity histogram_estimator(const Dataset& data);

// All 2^d empirical coefficients, nothing rejected.
SparseDensity unthresholded_estimator(const Dataset& data, int oracle_cap = kOracleCapDim);

struct ThresholdSearchResult {
    double threshold = 0.0; // on squared empirical coefficients
    SparseDensity estimate;
    double mse = 0.0;
};

// Minimizes the true MSE over every threshold at which the retained set can
// change: the distinct squared empirical coefficients, plus 0 and +infinity.
// Ties resolve to the smaller threshold.
ThresholdSearchResult exhaustive_threshold_search(const Dataset& data,
                                                  const CoefficientTruth& truth,
                                                  int oracle_cap = kOracleCapDim);

} // namespace rwt
