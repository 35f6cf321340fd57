#pragma once

#include <cstdint>
#include <string_view>

namespace rwt {

// SplitMix64: counter-based 64-bit generator. Chosen for the reproducibility
// contract: the same seed yields the same stream on every platform and in
// every ordering of concurrent use (each consumer owns its own state).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_double() < p; }

    // Uniform integer in [0, bound) via rejection-free 128-bit multiply.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

  private:
    std::uint64_t state_;
};

// FNV-1a over a purpose tag; used to derive independent substreams from one
// user-facing seed: substream_seed(seed, "synth") etc. Documented contract:
// seed' = splitmix(seed XOR fnv1a(tag) XOR index).
inline std::uint64_t fnv1a64(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view tag,
                                    std::uint64_t index = 0) {
    SplitMix64 mix(seed ^ fnv1a64(tag) ^ (0x6a09e667f3bcc909ULL * (index + 1)));
    return mix.next_u64();
}

} // namespace rwt
