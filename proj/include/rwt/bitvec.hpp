#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rwt {

// A binary string x = (x^(1), ..., x^(len)) on {0,1}^len, len <= 64.
// Storage: component x^(j) lives in bit j-1 of `bits`; bits above `len` are
// zero. Prefix, suffix and append are then single shift/mask operations.
// The lexicographic rank of a string reads x^(1) as the most significant
// digit, so rank and packed value are bit-reversals of each other.
struct BitVector {
    std::uint64_t bits = 0;
    int len = 0;

    BitVector() = default;
    BitVector(std::uint64_t b, int l) : bits(b), len(l) {
        if (l < 0 || l > 64) throw std::invalid_argument("BitVector: length out of [0,64]");
        if (l < 64) bits &= mask(l);
    }

    static std::uint64_t mask(int l) { return l >= 64 ? ~0ULL : ((1ULL << l) - 1); }

    static BitVector zeros(int l) { return BitVector(0, l); }

    // Parses "10110" with x^(1) first.
    static BitVector from_string(const std::string& s) {
        if (s.size() > 64) throw std::invalid_argument("BitVector: string longer than 64");
        std::uint64_t b = 0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (s[j] == '1')
                b |= 1ULL << j;
            else if (s[j] != '0')
                throw std::invalid_argument("BitVector: character other than 0/1");
        }
        return BitVector(b, static_cast<int>(s.size()));
    }

    // 1-based component access.
    int component(int j) const {
        if (j < 1 || j > len) throw std::invalid_argument("BitVector: component index out of range");
        return static_cast<int>((bits >> (j - 1)) & 1);
    }

    int popcount() const { return std::popcount(bits); }

    std::string to_string() const {
        std::string s(static_cast<std::size_t>(len), '0');
        for (int j = 0; j < len; ++j)
            if ((bits >> j) & 1) s[static_cast<std::size_t>(j)] = '1';
        return s;
    }

    // Rank in the lexicographic ordering of {0,1}^len (x^(1) most significant).
    std::uint64_t lex_index() const {
        std::uint64_t r = 0;
        for (int j = 0; j < len; ++j) r = (r << 1) | ((bits >> j) & 1);
        return r;
    }

    static BitVector from_lex_index(std::uint64_t index, int l) {
        std::uint64_t b = 0;
        for (int j = l - 1; j >= 0; --j) {
            b |= (index & 1) << j;
            index >>= 1;
        }
        return BitVector(b, l);
    }

    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.len == b.len && a.bits == b.bits;
    }
};

// First k components.
inline BitVector prefix(const BitVector& x, int k) {
    if (k < 0 || k > x.len) throw std::invalid_argument("prefix: k out of [0,len]");
    return BitVector(x.bits & BitVector::mask(k), k);
}

// Last len-k components.
inline BitVector suffix(const BitVector& x, int k) {
    if (k < 0 || k > x.len) throw std::invalid_argument("suffix: k out of [0,len]");
    return BitVector(x.bits >> k, x.len - k);
}

inline BitVector concat(const BitVector& y, const BitVector& z) {
    if (y.len + z.len > 64) throw std::invalid_argument("concat: combined length over 64");
    return BitVector(y.bits | (z.bits << y.len), y.len + z.len);
}

inline BitVector append(const BitVector& u, int bit) {
    if (u.len >= 64) throw std::invalid_argument("append: length over 64");
    return BitVector(u.bits | (static_cast<std::uint64_t>(bit & 1) << u.len), u.len + 1);
}

// Lexicographic comparison (x^(1) weighs most).
inline bool lex_less(const BitVector& a, const BitVector& b) {
    if (a.len != b.len) return a.len < b.len;
    return a.lex_index() < b.lex_index();
}

} // namespace rwt
