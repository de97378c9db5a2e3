#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vigil {

/// splitmix64; the project's one mixing primitive. Every random draw is a
/// pure function of (seed, stream keys, counter) so that runs differing only
/// in injected announcements still sample identical delays for unrelated
/// traffic (matched-seed experiment comparisons depend on this).
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr uint64_t mix64(uint64_t a, uint64_t b) { return mix64(mix64(a) ^ b); }
constexpr uint64_t mix64(uint64_t a, uint64_t b, uint64_t c) {
    return mix64(mix64(a, b) ^ c);
}
constexpr uint64_t mix64(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    return mix64(mix64(a, b, c) ^ d);
}

/// Uniform draw in [lo, hi] from a mixed word.
constexpr int64_t bounded(uint64_t word, int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(word % static_cast<uint64_t>(hi - lo + 1));
}

/// FNV-1a, for keying draw streams by name (std::hash is not pinned).
inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Delay distribution descriptor used for link propagation and source
/// delivery latency. Samples are strictly positive milliseconds.
struct DelaySpec {
    enum class Kind { Fixed, Uniform };
    Kind kind = Kind::Uniform;
    int64_t lo_ms = 10;
    int64_t hi_ms = 1000;

    static DelaySpec fixed(int64_t ms) { return {Kind::Fixed, ms, ms}; }
    static DelaySpec uniform(int64_t lo, int64_t hi) { return {Kind::Uniform, lo, hi}; }

    void validate() const {
        if (lo_ms <= 0 || hi_ms < lo_ms)
            throw std::invalid_argument("delay spec needs 0 < lo <= hi, got " +
                                        std::to_string(lo_ms) + ".." +
                                        std::to_string(hi_ms));
    }

    int64_t sample(uint64_t word) const {
        return kind == Kind::Fixed ? lo_ms : bounded(word, lo_ms, hi_ms);
    }

    bool operator==(const DelaySpec&) const = default;
};

}  // namespace vigil
