#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace qdcav::rng {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Pure function of (counter, key).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key)
{
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

// Independent random stream identified by (seed, stream). Draws are a pure
// function of (seed, stream, draw index), so work can be split across
// threads in any way without changing results.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream)
    {
    }

    std::uint32_t next_u32()
    {
        if (lane_ == 4) refill();
        return block_[lane_++];
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform on the open interval (0, 1).
    double uniform()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Box–Muller; the second variate is cached.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phi = 2.0 * 3.14159265358979323846 * uniform();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    // Inversion by sequential search; large means are split into chunks.
    std::uint64_t poisson(double mean)
    {
        std::uint64_t total = 0;
        while (mean > 200.0) {
            total += poisson_small(200.0);
            mean -= 200.0;
        }
        return total + poisson_small(mean);
    }

private:
    std::uint64_t poisson_small(double mean)
    {
        if (mean <= 0.0) return 0;
        double p = std::exp(-mean);
        double cdf = p;
        const double u = uniform();
        std::uint64_t k = 0;
        while (u > cdf && p > 0.0) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

    void refill()
    {
        block_ = philox4x32_10({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                               key_);
        ++counter_;
        lane_ = 0;
    }

    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    PhiloxCounter block_{};
    int lane_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Tags the top byte of a stream id so different consumers of one seed never
// share a stream.
constexpr std::uint64_t stream_id(std::uint8_t purpose, std::uint64_t index)
{
    return (static_cast<std::uint64_t>(purpose) << 56) | (index & 0x00FF'FFFF'FFFF'FFFFull);
}

}  // namespace qdcav::rng
