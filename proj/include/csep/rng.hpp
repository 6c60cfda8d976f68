#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace csep {

// Reproducible random stream: xoshiro256++ seeded from (seed, stream) via
// splitmix64. The same (seed, stream) pair always replays the same draw
// sequence, independent of platform stdlib details, so distributions
// (gaussian, cauchy) are generated here rather than with <random> adaptors.
class RandomStream {
public:
    static constexpr std::string_view algorithm = "xoshiro256++";

    RandomStream() : RandomStream(1, 0) {}
    RandomStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64();

    // Uniform on [0,1), 53-bit resolution.
    double uniform01();

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via the polar (Marsaglia) method; second draw cached.
    double gaussian();

    // Standard Cauchy via inverse CDF: tan(pi (U - 1/2)).
    double cauchy();

private:
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

} // namespace csep
