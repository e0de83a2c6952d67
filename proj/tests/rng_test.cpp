#include <array>
#include <cstdint>
#include <random>

#include <doctest.h>

#include "manet/rng.hpp"

using manet::philox4x32_10;
using manet::RandomStream;

TEST_CASE("philox known answers")
{
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    CHECK(philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and independent of each other")
{
    RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
        CHECK(x != d());
    }
    // Drawing from one stream leaves another untouched.
    RandomStream e(42, 8);
    CHECK(RandomStream(42, 8)() == e());
}

TEST_CASE("uniform draws lie in range and work with std distributions")
{
    RandomStream r(1, 2);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        const double v = r.uniform_pos();
        CHECK((u >= 0.0 && u < 1.0));
        CHECK((v > 0.0 && v <= 1.0));
        sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
    std::poisson_distribution<int> pois(3.0);
    double s = 0;
    for (int i = 0; i < 20000; ++i)
        s += pois(r);
    CHECK(s / 20000 == doctest::Approx(3.0).epsilon(0.03));
}
