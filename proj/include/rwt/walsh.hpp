#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rwt/bitvec.hpp"
#include "rwt/errors.hpp"

namespace rwt {

inline constexpr int kOracleCapDim = 25; // dense 2^d tables refuse above this

// 2^{-k/2} with one rounding at most: exact power of two for even k,
// correctly rounded sqrt(1/2) scaled by an exact power of two for odd k.
inline double walsh_norm(int k) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    if ((k & 1) == 0) return std::ldexp(1.0, -k / 2);
    return std::ldexp(inv_sqrt2, -(k - 1) / 2);
}

// chi_s(x) = 2^{-k/2} (-1)^{s.x}
inline double walsh_eval(const BitVector& s, const BitVector& x) {
    if (s.len != x.len || s.len < 1)
        throw std::invalid_argument("walsh_eval: index and point must share length >= 1");
    const int parity = std::popcount(s.bits & x.bits) & 1;
    const double norm = walsh_norm(s.len);
    return parity ? -norm : norm;
}

// Tensor identity chi_s(x) == chi_{pi_l(s)}(pi_l(x)) * chi_{sigma_l(s)}(sigma_l(x)).
// Test helper; returns whether the identity holds within 1e-12 relative.
inline bool walsh_factorization_check(const BitVector& s, int l, const BitVector& x) {
    if (s.len != x.len) throw std::invalid_argument("walsh_factorization_check: length mismatch");
    if (l < 1 || l > s.len) throw std::invalid_argument("walsh_factorization_check: l out of range");
    const double lhs = walsh_eval(s, x);
    double rhs = 1.0;
    if (l >= 1) {
        const BitVector sp = prefix(s, l), xp = prefix(x, l);
        rhs *= walsh_eval(sp, xp);
    }
    if (l < s.len) {
        const BitVector ss = suffix(s, l), xs = suffix(x, l);
        rhs *= walsh_eval(ss, xs);
    }
    return std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs));
}

// A real table indexed by the lexicographically ordered elements of {0,1}^dim.
struct DenseVector {
    int dim = 0;
    std::vector<double> values; // size 2^dim, entry i belongs to the rank-i string

    DenseVector() = default;
    explicit DenseVector(int d) : dim(d) {
        if (d < 1 || d > 63) throw std::invalid_argument("DenseVector: dim out of [1,63]");
        values.assign(std::size_t{1} << d, 0.0);
    }

    double& at(const BitVector& x) { return values[x.lex_index()]; }
    double at(const BitVector& x) const { return values[x.lex_index()]; }
    std::size_t size() const { return values.size(); }
};

// In-place unnormalized Walsh-Hadamard butterfly. Works for any element type
// supporting +/-; on integer inputs every intermediate stays exact.
template <typename T>
void wht_unnormalized(std::vector<T>& v) {
    const std::size_t n = v.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const T a = v[j];
                const T b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

// Orthonormal fast Walsh-Hadamard transform: output[s] = sum_x v[x] chi_s(x).
// The 2^{-d/2} normalization is applied once at the end (not per stage), so
// integer-valued inputs stay exact through the butterflies. The transform is
// its own inverse under this convention.
inline DenseVector fwht(const DenseVector& v, int oracle_cap = kOracleCapDim) {
    if (v.dim > oracle_cap)
        throw capacity_error("fwht: dim " + std::to_string(v.dim) + " over cap " +
                             std::to_string(oracle_cap));
    DenseVector out = v;
    wht_unnormalized(out.values);
    const double norm = walsh_norm(v.dim);
    for (double& x : out.values) x *= norm;
    return out;
}

} // namespace rwt
