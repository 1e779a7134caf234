#pragma once

// Seeded randomness shared by the simulator, media source and session setup.
//
// Generator: std::mt19937_64 (output fully specified by the C++ standard).
// Seeding rule: each consumer draws from its own stream, seeded with
// derive_seed(user_seed, stream_id), where derive_seed is one SplitMix64
// step over (user_seed + stream_id * golden gamma). Uniform reals take the
// top 53 bits of one draw, so values do not depend on the standard library's
// distribution implementation.

#include <cstdint>
#include <random>

namespace iaxrsw {

inline constexpr const char* kRngName = "mt19937_64/splitmix64-seeded";

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(seed + stream * 0x9E3779B97F4A7C15ULL);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double next_unit()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace iaxrsw
