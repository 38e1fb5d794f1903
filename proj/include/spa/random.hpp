#pragma once

#include <bit>
#include <cstdint>

namespace spa {

// rrmxmx (Pelle Evensen): a 64-bit bijective mixer. Applied to a Weyl sequence it
// behaves as a counter-based generator with no state beyond the counter.
constexpr std::uint64_t mix64(std::uint64_t v) noexcept {
    v ^= std::rotr(v, 49) ^ std::rotr(v, 24);
    v *= 0x9FB21C651E98DF25ULL;
    v ^= v >> 28;
    v *= 0x9FB21C651E98DF25ULL;
    return v ^ (v >> 28);
}

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

/// Uniform on [0, 1) with 53 random bits.
constexpr double unit_closed_open(std::uint64_t h) noexcept {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1] with 53 random bits.
constexpr double unit_open_closed(std::uint64_t h) noexcept {
    return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

/// Independent stream namespaces derived from one master seed.
enum class Stream : std::uint64_t {
    pair = 0x1,
    arrival_gap = 0x2,
    arrival_position = 0x3,
    strip_count = 0x4,
    strip_position = 0x5,
    strip_time = 0x6,
};

/// Stateless keyed randomness. Every value is a pure function of
/// (master seed, stream, key), so regenerating a run with a longer horizon, or
/// reading the same pair from a different construction, gives identical draws.
class PairRandomness {
public:
    explicit PairRandomness(std::uint64_t master_seed) noexcept
        : seed_(master_seed), pair_base_(derive(master_seed, Stream::pair)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Per-younger-vertex row key; pair draws for a fixed younger vertex are
    /// consecutive points of a Weyl sequence starting at this key.
    std::uint64_t row(std::uint64_t younger_key) const noexcept {
        return mix64(pair_base_ ^ mix64(younger_key + golden_gamma));
    }

    /// V(y, x) in (0, 1] from a precomputed row.
    static double from_row(std::uint64_t row_key, std::uint64_t older_key) noexcept {
        return unit_open_closed(mix64(row_key + (older_key + 1) * golden_gamma));
    }

    double pair(std::uint64_t younger_key, std::uint64_t older_key) const noexcept {
        return from_row(row(younger_key), older_key);
    }

    /// Uniform on [0, 1) indexed by (stream, key, sub).
    double uniform(Stream stream, std::uint64_t key, std::uint64_t sub = 0) const noexcept {
        const std::uint64_t base = derive(seed_, stream);
        return unit_closed_open(mix64(mix64(base ^ mix64(key + golden_gamma)) + (sub + 1) * golden_gamma));
    }

private:
    static std::uint64_t derive(std::uint64_t seed, Stream stream) noexcept {
        return mix64(mix64(seed) ^ (static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ULL));
    }

    std::uint64_t seed_;
    std::uint64_t pair_base_;
};

}  // namespace spa
