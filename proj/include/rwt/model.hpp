#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "rwt/bitvec.hpp"
#include "rwt/rng.hpp"
#include "rwt/walsh.hpp"

namespace rwt {

// Sparse set of Walsh coefficients of a function on {0,1}^dim. Keys are the
// packed index bits; explicit zeros are not stored.
struct SparseDensity {
    int dim = 0;
    std::unordered_map<std::uint64_t, double> coeffs;

    SparseDensity() = default;
    explicit SparseDensity(int d) : dim(d) {}

    void set(const BitVector& s, double value) {
        if (s.len != dim) throw std::invalid_argument("SparseDensity: index length != dim");
        if (value != 0.0) coeffs[s.bits] = value;
    }

    std::size_t size() const { return coeffs.size(); }

    // f_hat(x) = sum_s theta_s chi_s(x), over stored coefficients only.
    double evaluate(const BitVector& x) const;

    // Indices in lexicographic order; canonical ordering for output files.
    std::vector<BitVector> sorted_indices() const;
};

inline double eval_density(const SparseDensity& f, const BitVector& x) { return f.evaluate(x); }

// Mixture of product-Bernoulli components; the synthetic ground truth.
struct BernoulliMixture {
    int dim = 0;
    std::vector<double> weights;
    std::vector<std::vector<double>> components; // components[c][i] = P(x^(i+1) = 1)

    BernoulliMixture(int d, std::vector<double> w, std::vector<std::vector<double>> comps);

    std::size_t component_count() const { return weights.size(); }
};

// n packed samples on {0,1}^dim, immutable after construction.
class Dataset {
  public:
    Dataset(int dim, std::vector<std::uint64_t> samples);

    int dim() const { return dim_; }
    std::size_t size() const { return samples_.size(); }
    const std::vector<std::uint64_t>& samples() const { return samples_; }
    BitVector sample(std::size_t i) const { return BitVector(samples_[i], dim_); }

  private:
    int dim_;
    std::vector<std::uint64_t> samples_;
};

double mixture_density(const BernoulliMixture& mix, const BitVector& x);

// Closed form: theta_s = sum_c w_c 2^{-d/2} prod_{i in supp(s)} (1 - 2 p_{c,i}).
// Lets exact coefficient truth scale to d = 50 without dense enumeration.
double mixture_walsh_coefficient(const BernoulliMixture& mix, const BitVector& s);

// Dense table of the mixture density (oracle use, d <= cap).
DenseVector mixture_dense_table(const BernoulliMixture& mix, int oracle_cap = kOracleCapDim);

// n i.i.d. draws, deterministic per seed: component by inverse CDF on the
// weights, then independent Bernoulli bits, all from one SplitMix64 stream.
Dataset sample(const BernoulliMixture& mix, std::size_t n, std::uint64_t seed);

// The benchmark family: `components` product densities on {0,1}^dim, each
// with `biased_count` seed-chosen covariates at Bernoulli(bias) and the rest
// at Bernoulli(1/2); equal mixture weights.
BernoulliMixture make_benchmark_mixture(int dim, int components, int biased_count, double bias,
                                        std::uint64_t seed);

// Smallest R with |theta_(m)| <= R m^{-1/p} given magnitudes sorted
// non-increasing, i.e. max_m |theta_(m)| m^{1/p}.
double weak_lp_radius(const std::vector<double>& sorted_magnitudes, double p);

// max(f_hat, 0) / Z. Exact mode materializes the dense table; the Monte Carlo
// mode estimates Z from uniform probe points and keeps the evaluator implicit.
struct ClippedDensity {
    int dim = 0;
    double normalizer = 0.0;            // Z estimate used for scaling
    bool exact = false;
    DenseVector table;                  // filled in exact mode only
    std::function<double(const BitVector&)> eval; // normalized clipped density
};

ClippedDensity clip_and_renormalize_exact(const SparseDensity& f, int oracle_cap = kOracleCapDim);
ClippedDensity clip_and_renormalize_monte_carlo(const SparseDensity& f, std::size_t probe_count,
                                                std::uint64_t seed);

} // namespace rwt
