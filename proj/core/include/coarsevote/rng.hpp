#pragma once

#include <cstdint>

namespace coarsevote {

/// Counter-based generator: value(seed, i) depends only on (seed, i), so a
/// stream of draws is reproducible independent of iteration order and of any
/// partitioning across workers. SplitMix64 finalizer over a keyed counter.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x637f6e64637574ULL))) {}

    /// Draw with the given index; identical (seed, stream, index) -> identical value.
    std::uint64_t at(std::uint64_t index) const { return mix(key_ + index * 0x9e3779b97f4a7c15ULL); }

    /// Uniform double in [0, 1).
    double unit_at(std::uint64_t index) const {
        return static_cast<double>(at(index) >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

}  // namespace coarsevote
