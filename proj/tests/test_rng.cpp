#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "pcsilab/rng.hpp"

using namespace pcsilab;

TEST_CASE("seeded source replays identically") {
    SeededSource a(42), b(42), c(43);
    std::vector<std::uint64_t> va, vb, vc;
    for (int i = 0; i < 64; ++i) {
        va.push_back(a.uniform(97));
        vb.push_back(b.uniform(97));
        vc.push_back(c.uniform(97));
    }
    CHECK(va == vb);
    CHECK(va != vc);
}

TEST_CASE("seeded draws stay in range and hit every value") {
    SeededSource src(7);
    std::map<std::uint64_t, int> seen;
    for (int i = 0; i < 2000; ++i) ++seen[src.uniform(5)];
    CHECK(seen.size() == 5);
    for (const auto& [v, n] : seen) {
        CHECK(v < 5);
        CHECK(n > 200);
    }
}

TEST_CASE("tape source enumerates a uniform grid") {
    TapeSource t;
    std::map<std::pair<std::uint64_t, std::uint64_t>, Rational> leaves;
    do {
        t.rewind();
        auto a = t.uniform(2);
        auto b = t.uniform(3);
        leaves[{a, b}] = t.leaf_probability();
    } while (t.advance());
    REQUIRE(leaves.size() == 6);
    Rational total(0);
    for (const auto& [k, p] : leaves) {
        CHECK(p == Rational(1, 6));
        total += p;
    }
    CHECK(total == Rational(1));
}

TEST_CASE("tape source handles value-dependent domains") {
    // First coin 0 -> three follow-ups, first coin 1 -> two.
    TapeSource t;
    Rational total(0);
    int leaves = 0;
    do {
        t.rewind();
        auto a = t.uniform(2);
        t.uniform(a == 0 ? 3 : 2);
        total += t.leaf_probability();
        ++leaves;
    } while (t.advance());
    CHECK(leaves == 5);
    CHECK(total == Rational(1));
}
