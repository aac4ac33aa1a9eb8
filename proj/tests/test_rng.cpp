#include "qdcav/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace qdcav::rng;

TEST_CASE("Philox4x32-10 known-answer vectors")
{
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff})
          == PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0})
          == PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct")
{
    Stream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::vector<std::uint64_t> va, vb, vc, vd;
    for (int i = 0; i < 64; ++i) {
        va.push_back(a.next_u64());
        vb.push_back(b.next_u64());
        vc.push_back(c.next_u64());
        vd.push_back(d.next_u64());
    }
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(va != vd);
    CHECK(stream_id(1, 5) != stream_id(2, 5));
}

TEST_CASE("distribution moments")
{
    Stream s(1, 0);
    constexpr int n = 400000;
    double su = 0, se = 0, sn = 0, sn2 = 0, sp = 0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        su += u;
        se += s.exponential(2.0);
        const double z = s.normal();
        sn += z;
        sn2 += z * z;
        sp += static_cast<double>(s.poisson(0.1));
    }
    // 5σ bounds.
    CHECK(std::abs(su / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(se / n - 0.5) < 5.0 * 0.5 / std::sqrt(n));
    CHECK(std::abs(sn / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(sn2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(sp / n - 0.1) < 5.0 * std::sqrt(0.1 / n));

    Stream big(9, 0);
    double sb = 0;
    for (int i = 0; i < 20000; ++i) sb += static_cast<double>(big.poisson(450.0));
    CHECK(std::abs(sb / 20000 - 450.0) < 5.0 * std::sqrt(450.0 / 20000));
    CHECK(big.poisson(0.0) == 0);
}
