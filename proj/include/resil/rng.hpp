#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace resil {

/// Named substreams split off one master seed. Each stream is an independent
/// mt19937_64 seeded through std::seed_seq with {seed low word, seed high
/// word, stream id}; both the engine and seed_seq are fully specified by the
/// standard, so sequences are identical on every conforming platform.
enum class Substream : std::uint32_t {
    chain = 1,
    fading = 2,
};

using Rng = std::mt19937_64;

inline Rng make_substream(std::uint64_t seed, Substream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Rng(seq);
}

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
/// std::uniform_real_distribution is not bit-specified across standard
/// libraries, hence the explicit conversion.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unit-mean exponential variate (Rayleigh-fading power gain).
inline double exponential1(Rng& rng) {
    return -std::log1p(-uniform01(rng));
}

} // namespace resil
