#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace rbergomi {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// Pure function of (key, counter): any (seed, stream, index) triple addresses
// its random block directly, which is what makes Monte Carlo output
// independent of thread count.
struct Philox4x32 {
    static constexpr std::uint32_t kW32A = 0x9E3779B9u;
    static constexpr std::uint32_t kW32B = 0xBB67AE85u;
    static constexpr std::uint32_t kM4x32A = 0xD2511F53u;
    static constexpr std::uint32_t kM4x32B = 0xCD9E8D57u;

    static std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t stream,
                                              std::uint64_t index) {
        std::uint32_t k0 = static_cast<std::uint32_t>(seed);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
        std::uint32_t c0 = static_cast<std::uint32_t>(index);
        std::uint32_t c1 = static_cast<std::uint32_t>(index >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(stream);
        std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM4x32A) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM4x32B) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += kW32A;
            k1 += kW32B;
        }
        return {c0, c1, c2, c3};
    }
};

// Standard normals addressed by (seed, stream, i): one Philox block yields two
// Box-Muller normals from two 53-bit uniforms. Stateless and splittable.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    double operator()(std::uint64_t i) const {
        const auto b = Philox4x32::block(seed_, stream_, i >> 1);
        const double u1 = to_unit(b[0], b[1]);
        const double u2 = to_unit(b[2], b[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return (i & 1u) ? r * std::sin(a) : r * std::cos(a);
    }

private:
    // 53-bit uniform in (0, 1]
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
        return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace rbergomi
