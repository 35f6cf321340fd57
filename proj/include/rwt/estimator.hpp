#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "rwt/model.hpp"
#include "rwt/schedule.hpp"

namespace rwt {

// Canonical scalings. Every code path that turns an integer sign sum
// A = sum_i (-1)^{s.X_i} into a coefficient, or an integer pair sum
// S = sum_{i,j} c_i c_j I{suffix match} into a weight, must go through these
// two helpers so that independent routes produce bit-identical doubles.
inline double coefficient_from_sign_sum(std::int64_t a, std::size_t n, int dim) {
    return walsh_norm(dim) * (static_cast<double>(a) / static_cast<double>(n));
}

inline double weight_from_pair_sum(std::int64_t s, std::size_t n, int k) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    return std::ldexp(static_cast<double>(s) / n2, -k);
}

// theta_hat_s = (1/n) sum_i chi_s(X_i)
double empirical_coefficient(const Dataset& data, const BitVector& s);

// Integer sign sums A_s = sum_i (-1)^{s.X_i} for all 2^d indices, entry i
// belonging to the lexicographically i-th index. Exact; the basis of every
// boundary-sensitive thresholding comparison.
std::vector<std::int64_t> empirical_sign_sums(const Dataset& data,
                                              int oracle_cap = kOracleCapDim);

// All 2^d empirical coefficients at once (integer histogram + exact integer
// butterflies, scaled once). Entry i of the result is the coefficient of the
// lexicographically i-th index.
DenseVector empirical_all_coefficients(const Dataset& data, int oracle_cap = kOracleCapDim);

// W_hat_u as the sum of squared empirical coefficients over every suffix
// extension of u. Literal evaluation; this is the slow reference route.
double weight_direct(const Dataset& data, const BitVector& u, int suffix_cap = 26);

// W_hat_u as the pairwise statistic
//   (1/n^2) sum_i sum_j chi_u(pi_k X_i) chi_u(pi_k X_j) I{sigma_k X_i = sigma_k X_j},
// O(n^2) with packed-suffix equality. u may be empty (k = 0), in which case
// this is the pairwise collision statistic (1/n^2) sum I{X_i = X_j}.
double weight_indirect(const Dataset& data, const BitVector& u);

// Weights of all 2^b one-step extensions of u, in one pass over the samples.
// Element e (packed, bit 0 = component k+1) equals weight_indirect(data, u.e).
std::vector<double> child_weights(const Dataset& data, const BitVector& u, int step_bits);

struct RwtResult {
    SparseDensity density;
    TraversalStats stats;
};

// Recursive thresholding over the prefix tree: an index s is retained iff the
// estimated subtree weight of every prefix of s clears its level threshold,
// s passes the order cap when configured, and s survives per-level top-q
// selection when configured. Retained values are the empirical coefficients.
RwtResult rwt_estimate(const Dataset& data, const ThresholdSchedule& schedule,
                       const TraversalConfig& config = TraversalConfig{});

// Slow oracle: evaluates the accepting-set definition literally via
// weight_direct at every level. Test use only; top-q is not supported.
std::set<std::uint64_t> accepting_set_reference(const Dataset& data,
                                                const ThresholdSchedule& schedule,
                                                const TraversalConfig& config = TraversalConfig{});

// Smallest alpha satisfying n C1 (2^k a^2 ∧ 2^{k/2} a) >= ln(2^k d / delta)
// with a = (1/5) sqrt(alpha/n) - sqrt(C2^2 / (2^k n)), by monotone bisection.
// The constants C1, C2 are the caller's burden; no defaults exist.
double min_alpha_for_failure_budget(int k, std::size_t n, int dim, double delta, double c1,
                                    double c2);

} // namespace rwt
