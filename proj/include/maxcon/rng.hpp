// SPDX-License-Identifier: Apache-2.0

#ifndef MAXCON_RNG_HPP
#define MAXCON_RNG_HPP

#include <cstdint>

namespace maxcon {

/// SplitMix64 generator. Small, portable and fully specified, so the
/// data suites it defines are reproducible from the seed alone.
///
/// Substreams are derived with `split(tag)`, which mixes the tag into the
/// current state without advancing the parent stream. The synthetic data
/// generator draws each point from its own substream (see dataio.cpp), so
/// points can be generated independently and in any order.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) {
        // Rejection sampling to avoid modulo bias.
        const std::uint64_t limit = n * (~0ULL / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Derive an independent substream keyed by `tag`.
    SplitMix64 split(std::uint64_t tag) const {
        SplitMix64 probe(state_ ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
        return SplitMix64(probe.next_u64());
    }

private:
    std::uint64_t state_;
};

}  // namespace maxcon

#endif  // MAXCON_RNG_HPP
