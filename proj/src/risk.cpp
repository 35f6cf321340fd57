#include "rwt/risk.hpp"

#include <cmath>
#include <sstream>

#include "rwt/rng.hpp"

namespace rwt {

std::string RiskReport::csv_header() {
    return "estimator,d,n,seed,schedule,mse,variance_term,bias_term,retained,calls,time_ms";
}

std::string RiskReport::csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << estimator << ',' << dim << ',' << n << ',' << seed << ',' << schedule << ',' << mse
       << ',' << variance_term << ',' << bias_term << ',' << retained << ',' << calls << ','
       << time_ms;
    return os.str();
}

RiskReport mse_exact(const SparseDensity& estimate, const CoefficientTruth& truth) {
    if (estimate.dim != truth.dim) throw std::invalid_argument("mse_exact: dim mismatch");
    RiskReport r;
    r.dim = estimate.dim;
    r.retained = estimate.size();
    double var_term = 0.0;
    double retained_energy = 0.0;
    for (const auto& [bits, est] : estimate.coeffs) {
        const double t = truth.theta(BitVector(bits, estimate.dim));
        var_term += (est - t) * (est - t);
        retained_energy += t * t;
    }
    r.variance_term = var_term;
    r.bias_term = truth.energy - retained_energy;
    r.mse = r.variance_term + r.bias_term;
    return r;
}

double mse_sampled(const SparseDensity& estimate,
                   const std::function<double(const BitVector&)>& truth_density,
                   std::size_t probe_count, std::uint64_t seed) {
    if (probe_count < 1) throw std::invalid_argument("mse_sampled: probe_count >= 1");
    SplitMix64 rng(substream_seed(seed, "mse-probes"));
    const std::uint64_t m = BitVector::mask(estimate.dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < probe_count; ++i) {
        const BitVector x(rng.next_u64() & m, estimate.dim);
        const double diff = estimate.evaluate(x) - truth_density(x);
        acc += diff * diff;
    }
    return std::ldexp(acc / static_cast<double>(probe_count), estimate.dim);
}

} // namespace rwt
