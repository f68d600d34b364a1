#pragma once

#include <cstdint>

namespace reorg {

// SplitMix64 (Vigna / Steele-Lea-Flood). One 64-bit state word, one
// xor-multiply finalizer per draw. Used both as the sampling generator and
// as the seed-derivation hash for parallel substreams.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in (0, 1]; never returns 0 so log(u) is finite.
    double uniform01() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Substream derivation: master seed -> stream index -> independent substream
// seed. Chunked samplers use stream = chunk index, so results do not depend
// on how chunks are scheduled across threads.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 h(seed ^ (0xA0761D6478BD642FULL + stream * 0xE7037ED1A0B428DBULL));
    return h.next();
}

}  // namespace reorg
