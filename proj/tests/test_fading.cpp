#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "divekit/fading.hpp"
#include "divekit/rng.hpp"

using namespace divekit;

TEST_CASE("atoms and basic operations, M=2") {
    const auto a0 = FadingFunction::atom(2, 0);
    const auto a1 = FadingFunction::atom(2, 1);

    // truth table over a = 00,01,10,11 (bit m of a = state of block m)
    CHECK(!a0.bit(0b00));
    CHECK(a0.bit(0b01));
    CHECK(!a0.bit(0b10));
    CHECK(a0.bit(0b11));

    const auto both = ff_and(a0, a1);
    CHECK(!both.bit(0b00));
    CHECK(!both.bit(0b01));
    CHECK(!both.bit(0b10));
    CHECK(both.bit(0b11));

    const auto either = ff_or(a0, a1);
    CHECK(either == FadingFunction::full_diversity(2));
    CHECK(either.is_full_diversity());

    // idempotence, absorption, identities
    CHECK(ff_and(a0, a0) == a0);
    CHECK(ff_or(ff_and(a0, a1), a0) == a0);
    CHECK(ff_or(a0, FadingFunction::zero(2)) == a0);
    CHECK(ff_and(a0, FadingFunction::full_diversity(2)) == a0);
}

TEST_CASE("mismatched block counts are rejected") {
    CHECK_THROWS(ff_and(FadingFunction::atom(2, 0), FadingFunction::atom(3, 0)));
}

TEST_CASE("diversity order") {
    CHECK(diversity_order(ff_or(FadingFunction::atom(2, 0), FadingFunction::atom(2, 1))) == 2);
    CHECK(diversity_order(FadingFunction::atom(2, 0)) == 1);
    CHECK(diversity_order(FadingFunction::zero(2)) == 0);
    CHECK(diversity_order(FadingFunction::zero(5)) == 0);

    // A0*A1*A2 fails whenever any single block fades: order 1 by enumeration
    auto f = FadingFunction::atom(3, 0);
    f &= FadingFunction::atom(3, 1);
    f &= FadingFunction::atom(3, 2);
    int oracle = 3 + 1;
    for (std::uint32_t a = 0; a < 8; ++a) {
        if (f.bit(a)) continue;
        int zeros = 0;
        for (int m = 0; m < 3; ++m)
            if (!(a >> m & 1)) ++zeros;
        oracle = std::min(oracle, zeros);
    }
    CHECK(oracle == 1);
    CHECK(diversity_order(f) == 1);
}

TEST_CASE("monotonicity closure of AND/OR over atoms") {
    Rng rng(12345);
    for (int round = 0; round < 200; ++round) {
        const int m_blocks = 2 + static_cast<int>(rng.next_below(3));
        FadingFunction f = FadingFunction::atom(m_blocks, static_cast<int>(rng.next_below(m_blocks)));
        for (int step = 0; step < 6; ++step) {
            const auto g =
                FadingFunction::atom(m_blocks, static_cast<int>(rng.next_below(m_blocks)));
            if (rng.next_below(2))
                f |= g;
            else
                f &= g;
        }
        CHECK(f.is_monotone());
        CHECK(!f.bit(0));
    }
}

TEST_CASE("hex round-trip") {
    Rng rng(99);
    for (const int m_blocks : {1, 2, 3, 4, 6, 7, 9}) {
        FadingFunction f(m_blocks);
        for (std::uint32_t a = 0; a < f.table_size(); ++a)
            if (rng.next_below(2)) f.set_bit(a, true);
        CHECK(FadingFunction::from_hex(m_blocks, f.to_hex()) == f);
    }
}

TEST_CASE("realization index encoding") {
    const auto r = FadingRealization::from_index(4, 0b1010);
    CHECK(r.bits == std::vector<std::uint8_t>{0, 1, 0, 1});
    CHECK(r.index() == 0b1010);
}
