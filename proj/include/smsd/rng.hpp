#pragma once

#include <cmath>
#include <cstdint>

namespace smsd {

// xoshiro256++ seeded through the splitmix64 finalizer. Every Monte Carlo
// trial owns its own stream, keyed by (master seed, stream, substream); the
// sweep engine uses (snr index, trial index) so results do not depend on the
// number of worker threads. The generator and the Gaussian transform below
// are fixed: identical keys reproduce identical draws on any platform.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t substream) {
        std::uint64_t key = master_seed;
        key = mix(key ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
        key = mix(key ^ (0xC2B2AE3D27D4EB4FULL * (substream + 1)));
        for (auto& w : s_) {
            key += 0x9E3779B97F4A7C15ULL;
            w = mix(key);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1) with 53 significant bits
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // top n bits of one draw, n <= 32
    std::uint32_t bits(int n) {
        return n == 0 ? 0u : static_cast<std::uint32_t>(next_u64() >> (64 - n));
    }

    // standard normal via Box-Muller; second value of each pair is cached
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));  // log(1-u1), 1-u1 in (0,1]
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace smsd
