#include "rwt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rwt/errors.hpp"

namespace rwt {

double total_energy(const BernoulliMixture& mix) {
    double acc = 0.0;
    for (std::size_t c = 0; c < mix.component_count(); ++c) {
        for (std::size_t c2 = 0; c2 < mix.component_count(); ++c2) {
            double prod = mix.weights[c] * mix.weights[c2];
            for (int i = 0; i < mix.dim; ++i) {
                const double p = mix.components[c][static_cast<std::size_t>(i)];
                const double q = mix.components[c2][static_cast<std::size_t>(i)];
                prod *= p * q + (1.0 - p) * (1.0 - q);
            }
            acc += prod;
        }
    }
    return acc;
}

double total_energy(const DenseVector& table) {
    double acc = 0.0;
    for (double v : table.values) acc += v * v;
    return acc;
}

CoefficientTruth truth_from_mixture(const BernoulliMixture& mix) {
    CoefficientTruth t;
    t.dim = mix.dim;
    t.energy = total_energy(mix);
    BernoulliMixture copy = mix;
    t.theta = [copy](const BitVector& s) { return mixture_walsh_coefficient(copy, s); };
    return t;
}

CoefficientTruth truth_from_dense(const DenseVector& table, int oracle_cap) {
    CoefficientTruth t;
    t.dim = table.dim;
    t.energy = total_energy(table);
    DenseVector spectrum = fwht(table, oracle_cap);
    t.theta = [spectrum](const BitVector& s) { return spectrum.at(s); };
    return t;
}

SparseDensity ott_kronmal(const Dataset& data, int oracle_cap) {
    const int d = data.dim();
    const auto sums = empirical_sign_sums(data, oracle_cap);
    const std::size_t n = data.size();
    // theta_hat^2 > 2/(M(n+1))  <=>  A^2 (n+1) > 2 n^2, exactly in integers
    // (fits 64 bits for any n this code handles)
    const std::int64_t rhs = 2 * static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n);
    SparseDensity out(d);
    for (std::uint64_t i = 0; i < sums.size(); ++i) {
        const std::int64_t a = sums[i];
        if (a * a * static_cast<std::int64_t>(n + 1) > rhs)
            out.set(BitVector::from_lex_index(i, d), coefficient_from_sign_sum(a, n, d));
    }
    return out;
}

SparseDensity ideal_estimator(const Dataset& data, const CoefficientTruth& truth,
                              int oracle_cap) {
    const int d = data.dim();
    if (truth.dim != d) throw std::invalid_argument("ideal_estimator: truth dim != data dim");
    const DenseVector theta = empirical_all_coefficients(data, oracle_cap);
    const double thr = 1.0 / (std::ldexp(static_cast<double>(data.size()) + 1.0, d));
    SparseDensity out(d);
    for (std::uint64_t i = 0; i < theta.size(); ++i) {
        const BitVector s = BitVector::from_lex_index(i, d);
        const double t = truth.theta(s);
        if (t * t > thr) out.set(s, theta.values[i]);
    }
    return out;
}

HistogramDensity histogram_estimator(const Dataset& data) {
    HistogramDensity h;
    h.dim = data.dim();
    const double unit = 1.0 / static_cast<double>(data.size());
    for (std::uint64_t x : data.samples()) h.mass[x] += unit;
    return h;
}

SparseDensity unthresholded_estimator(const Dataset& data, int oracle_cap) {
    const int d = data.dim();
    const DenseVector theta = empirical_all_coefficients(data, oracle_cap);
    SparseDensity out(d);
    for (std::uint64_t i = 0; i < theta.size(); ++i)
        out.set(BitVector::from_lex_index(i, d), theta.values[i]);
    return out;
}

ThresholdSearchResult exhaustive_threshold_search(const Dataset& data,
                                                  const CoefficientTruth& truth,
                                                  int oracle_cap) {
    const int d = data.dim();
    if (truth.dim != d)
        throw std::invalid_argument("exhaustive_threshold_search: truth dim != data dim");
    const DenseVector theta = empirical_all_coefficients(data, oracle_cap);
    const std::uint64_t m = theta.size();

    struct Entry {
        double sq;        // theta_hat^2, the sort key
        double var_term;  // (theta_hat - theta)^2
        double sq_true;   // theta^2
    };
    std::vector<Entry> entries(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        const double est = theta.values[i];
        const double tru = truth.theta(BitVector::from_lex_index(i, d));
        entries[i] = {est * est, (est - tru) * (est - tru), tru * tru};
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.sq > b.sq; });

    // MSE of "retain the j largest": prefix of variance terms plus the energy
    // not covered by the retained true coefficients.
    double best_mse = truth.energy; // j = 0, threshold +infinity
    double best_thr = std::numeric_limits<double>::infinity();
    double var_acc = 0.0, true_acc = 0.0;
    for (std::uint64_t j = 0; j < m; ++j) {
        var_acc += entries[j].var_term;
        true_acc += entries[j].sq_true;
        if (j + 1 < m && entries[j + 1].sq == entries[j].sq) continue; // same cut
        const double mse = var_acc + (truth.energy - true_acc);
        const double thr = entries[j].sq; // retain every theta_hat^2 >= thr
        if (mse < best_mse || (mse == best_mse && thr < best_thr)) {
            best_mse = mse;
            best_thr = thr;
        }
    }
    // candidate 0 retains everything too; on an MSE tie it wins as the
    // smaller threshold
    const double mse_all = var_acc + (truth.energy - true_acc);
    if (mse_all < best_mse || (mse_all == best_mse && best_thr > 0.0)) {
        best_mse = mse_all;
        best_thr = 0.0;
    }

    ThresholdSearchResult out;
    out.threshold = best_thr;
    out.mse = best_mse;
    out.estimate = SparseDensity(d);
    for (std::uint64_t i = 0; i < m; ++i) {
        const double v = theta.values[i];
        if (v * v >= best_thr) out.estimate.set(BitVector::from_lex_index(i, d), v);
    }
    return out;
}

} // namespace rwt
