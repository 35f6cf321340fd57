#include "rwt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rwt {

double SparseDensity::evaluate(const BitVector& x) const {
    if (x.len != dim) throw std::invalid_argument("SparseDensity: point length != dim");
    const double norm = walsh_norm(dim);
    double acc = 0.0;
    for (const auto& [bits, theta] : coeffs) {
        const int parity = std::popcount(bits & x.bits) & 1;
        acc += parity ? -theta : theta;
    }
    return acc * norm;
}

std::vector<BitVector> SparseDensity::sorted_indices() const {
    std::vector<BitVector> out;
    out.reserve(coeffs.size());
    for (const auto& [bits, theta] : coeffs) out.emplace_back(bits, dim);
    std::sort(out.begin(), out.end(),
              [](const BitVector& a, const BitVector& b) { return a.lex_index() < b.lex_index(); });
    return out;
}

BernoulliMixture::BernoulliMixture(int d, std::vector<double> w,
                                   std::vector<std::vector<double>> comps)
    : dim(d), weights(std::move(w)), components(std::move(comps)) {
    if (d < 1 || d > 64) throw std::invalid_argument("BernoulliMixture: dim out of [1,64]");
    if (weights.empty() || weights.size() != components.size())
        throw std::invalid_argument("BernoulliMixture: weights/components size mismatch");
    double total = 0.0;
    for (double wc : weights) {
        if (wc < 0.0) throw std::invalid_argument("BernoulliMixture: negative weight");
        total += wc;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("BernoulliMixture: weights must sum to 1");
    for (const auto& comp : components) {
        if (static_cast<int>(comp.size()) != d)
            throw std::invalid_argument("BernoulliMixture: component length != dim");
        for (double p : comp)
            if (p < 0.0 || p > 1.0)
                throw std::invalid_argument("BernoulliMixture: probability outside [0,1]");
    }
}

Dataset::Dataset(int dim, std::vector<std::uint64_t> samples)
    : dim_(dim), samples_(std::move(samples)) {
    if (dim < 1 || dim > 64) throw std::invalid_argument("Dataset: dim out of [1,64]");
    if (samples_.empty()) throw std::invalid_argument("Dataset: needs at least one sample");
    const std::uint64_t m = BitVector::mask(dim);
    for (std::uint64_t s : samples_)
        if (s & ~m) throw std::invalid_argument("Dataset: sample has bits beyond dim");
}

double mixture_density(const BernoulliMixture& mix, const BitVector& x) {
    if (x.len != mix.dim) throw std::invalid_argument("mixture_density: point length != dim");
    double acc = 0.0;
    for (std::size_t c = 0; c < mix.component_count(); ++c) {
        double prod = mix.weights[c];
        const auto& p = mix.components[c];
        for (int i = 0; i < mix.dim; ++i)
            prod *= ((x.bits >> i) & 1) ? p[static_cast<std::size_t>(i)]
                                        : 1.0 - p[static_cast<std::size_t>(i)];
        acc += prod;
    }
    return acc;
}

double mixture_walsh_coefficient(const BernoulliMixture& mix, const BitVector& s) {
    if (s.len != mix.dim) throw std::invalid_argument("mixture_walsh_coefficient: length != dim");
    double acc = 0.0;
    for (std::size_t c = 0; c < mix.component_count(); ++c) {
        double prod = mix.weights[c];
        const auto& p = mix.components[c];
        for (int i = 0; i < mix.dim; ++i)
            if ((s.bits >> i) & 1) prod *= 1.0 - 2.0 * p[static_cast<std::size_t>(i)];
        acc += prod;
    }
    return acc * walsh_norm(mix.dim);
}

DenseVector mixture_dense_table(const BernoulliMixture& mix, int oracle_cap) {
    if (mix.dim > oracle_cap)
        throw capacity_error("mixture_dense_table: dim over cap");
    DenseVector table(mix.dim);
    const std::uint64_t count = 1ULL << mix.dim;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        const BitVector x(bits, mix.dim);
        table.at(x) = mixture_density(mix, x);
    }
    return table;
}

Dataset sample(const BernoulliMixture& mix, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    SplitMix64 rng(substream_seed(seed, "mixture-sample"));
    std::vector<std::uint64_t> draws;
    draws.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.next_double();
        std::size_t c = 0;
        double cum = 0.0;
        for (; c + 1 < mix.component_count(); ++c) {
            cum += mix.weights[c];
            if (u < cum) break;
        }
        const auto& p = mix.components[c];
        std::uint64_t bits = 0;
        for (int j = 0; j < mix.dim; ++j)
            if (rng.next_bernoulli(p[static_cast<std::size_t>(j)])) bits |= 1ULL << j;
        draws.push_back(bits);
    }
    return Dataset(mix.dim, std::move(draws));
}

BernoulliMixture make_benchmark_mixture(int dim, int components, int biased_count, double bias,
                                        std::uint64_t seed) {
    if (biased_count < 0 || biased_count > dim)
        throw std::invalid_argument("make_benchmark_mixture: biased_count out of [0,dim]");
    SplitMix64 rng(substream_seed(seed, "mixture-columns"));
    std::vector<std::vector<double>> comps;
    comps.reserve(static_cast<std::size_t>(components));
    std::vector<int> cols(static_cast<std::size_t>(dim));
    for (int c = 0; c < components; ++c) {
        std::iota(cols.begin(), cols.end(), 0);
        // partial Fisher-Yates: the first biased_count entries are the biased columns
        for (int j = 0; j < biased_count; ++j) {
            const auto pick = j + static_cast<int>(rng.next_below(
                                      static_cast<std::uint64_t>(dim - j)));
            std::swap(cols[static_cast<std::size_t>(j)], cols[static_cast<std::size_t>(pick)]);
        }
        std::vector<double> p(static_cast<std::size_t>(dim), 0.5);
        for (int j = 0; j < biased_count; ++j) p[static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])] = bias;
        comps.push_back(std::move(p));
    }
    std::vector<double> w(static_cast<std::size_t>(components),
                          1.0 / static_cast<double>(components));
    // force the exact-sum invariant under inexact division
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    return BernoulliMixture(dim, std::move(w), std::move(comps));
}

double weak_lp_radius(const std::vector<double>& sorted_magnitudes, double p) {
    if (p <= 0.0) throw std::invalid_argument("weak_lp_radius: p must be positive");
    double radius = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < sorted_magnitudes.size(); ++m) {
        const double mag = std::abs(sorted_magnitudes[m]);
        if (mag > prev + 1e-15)
            throw std::invalid_argument("weak_lp_radius: magnitudes not sorted non-increasing");
        prev = mag;
        radius = std::max(radius, mag * std::pow(static_cast<double>(m + 1), 1.0 / p));
    }
    return radius;
}

namespace {

DenseVector sparse_to_dense(const SparseDensity& f, int oracle_cap) {
    if (f.dim > oracle_cap) throw capacity_error("clip_and_renormalize: dim over cap");
    // scatter coefficients and invert: fwht is an involution
    DenseVector spectrum(f.dim);
    for (const auto& [bits, theta] : f.coeffs) spectrum.at(BitVector(bits, f.dim)) = theta;
    return fwht(spectrum, oracle_cap);
}

} // namespace

ClippedDensity clip_and_renormalize_exact(const SparseDensity& f, int oracle_cap) {
    DenseVector table = sparse_to_dense(f, oracle_cap);
    double z = 0.0;
    for (double& v : table.values) {
        v = std::max(v, 0.0);
        z += v;
    }
    if (z <= 0.0) throw std::domain_error("clip_and_renormalize: estimate is nonpositive everywhere");
    for (double& v : table.values) v /= z;
    ClippedDensity out;
    out.dim = f.dim;
    out.normalizer = z;
    out.exact = true;
    out.table = std::move(table);
    auto tbl = out.table; // evaluator owns a copy; the struct stays value-like
    out.eval = [tbl](const BitVector& x) { return tbl.at(x); };
    return out;
}

ClippedDensity clip_and_renormalize_monte_carlo(const SparseDensity& f, std::size_t probe_count,
                                                std::uint64_t seed) {
    if (probe_count < 1) throw std::invalid_argument("clip_and_renormalize: probe_count >= 1");
    SplitMix64 rng(substream_seed(seed, "clip-renorm"));
    const std::uint64_t m = BitVector::mask(f.dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < probe_count; ++i) {
        const BitVector x(rng.next_u64() & m, f.dim);
        acc += std::max(f.evaluate(x), 0.0);
    }
    // Z_hat = 2^d * mean of clipped values
    const double z = std::ldexp(acc / static_cast<double>(probe_count), f.dim);
    if (z <= 0.0) throw std::domain_error("clip_and_renormalize: estimate is nonpositive everywhere");
    ClippedDensity out;
    out.dim = f.dim;
    out.normalizer = z;
    out.exact = false;
    SparseDensity keep = f;
    out.eval = [keep, z](const BitVector& x) { return std::max(keep.evaluate(x), 0.0) / z; };
    return out;
}

} // namespace rwt
