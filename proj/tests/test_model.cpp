#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "pcsilab/model.hpp"
#include "pcsilab/stats.hpp"

using namespace pcsilab;

TEST_CASE("message sampling is deterministic per seed") {
    Params p{2, 3, 2, 1};
    auto a = sample_messages(p, 77);
    auto b = sample_messages(p, 77);
    auto c = sample_messages(p, 78);
    CHECK(a.W == b.W);
    CHECK(a.W != c.W);
    CHECK(a.W.size() == 3);
    CHECK(a.W[0].size() == 1);
}

TEST_CASE("sampled symbols look uniform") {
    Params p{5, 1, 1, 100000};
    auto s = sample_messages(p, 123);
    std::vector<std::uint64_t> counts(5, 0);
    for (Fe v : s.W[0]) ++counts[v];
    const double expected = 100000.0 / 5.0;
    double chi2 = 0;
    for (auto c : counts) {
        double d = double(c) - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi_square_sf(chi2, 4) > 0.001);
}

TEST_CASE("scenario enumeration counts") {
    CHECK(enumerate_scenarios(Params{2, 4, 3, 1}, Variant::PcsiII, PrivacyMode::ThetaS).size() ==
          12);
    CHECK(enumerate_scenarios(Params{2, 4, 3, 1}, Variant::PcsiI, PrivacyMode::ThetaS).size() ==
          4);
    CHECK(enumerate_scenarios(Params{3, 4, 3, 1}, Variant::PcsiII, PrivacyMode::ThetaSLambda)
              .size() == 96);
    CHECK(enumerate_scenarios(Params{2, 4, 2, 1}, Variant::Pcsi, PrivacyMode::ThetaS).size() ==
          24);
    CHECK_THROWS_AS(enumerate_scenarios(Params{2, 4, 4, 1}, Variant::PcsiI, PrivacyMode::ThetaS),
                    std::invalid_argument);
}

TEST_CASE("scenario enumeration is lexicographic and feasible") {
    auto list = enumerate_scenarios(Params{3, 3, 2, 1}, Variant::PcsiII, PrivacyMode::ThetaS);
    REQUIRE(list.size() == 6);
    CHECK(list[0].S == std::vector<std::uint32_t>{1, 2});
    CHECK(list[0].theta == 1);
    CHECK(list[1].theta == 2);
    CHECK(list[2].S == std::vector<std::uint32_t>{1, 3});
    for (const auto& sc : list) CHECK(sc.theta_in_S());
}

TEST_CASE("lambda indexing is a bijection") {
    std::set<std::vector<Fe>> seen;
    for (std::uint64_t i = 0; i < lambda_count(4, 3); ++i) {
        auto lam = lambda_at(4, 3, i);
        for (Fe l : lam) CHECK(l != 0);
        seen.insert(lam);
    }
    CHECK(seen.size() == 27);
}

TEST_CASE("side information computation") {
    Field f2(2, 1);
    Params p{2, 3, 2, 4};
    auto store = sample_messages(p, 5);
    Scenario sc{Variant::PcsiII, 1, {1, 2}, {1, 1}};
    auto y = compute_Y(f2, store, sc);
    for (std::uint32_t i = 0; i < 4; ++i)
        CHECK(y[i] == (store.W[0][i] ^ store.W[1][i]));  // all-ones over F_2 is XOR
}

TEST_CASE("side information matches direct recomputation over F_5") {
    Field f5(5, 1);
    Params p{5, 3, 2, 3};
    auto store = sample_messages(p, 9);
    Scenario sc{Variant::PcsiII, 2, {1, 2}, {3, 4}};
    auto y = compute_Y(f5, store, sc);
    for (std::uint32_t i = 0; i < 3; ++i)
        CHECK(y[i] == f5.add(f5.mul(3, store.W[0][i]), f5.mul(4, store.W[1][i])));
}

TEST_CASE("scaling the coefficients scales the side information") {
    Field f3(3, 1);
    Params p{3, 3, 2, 2};
    auto store = sample_messages(p, 10);
    Scenario sc{Variant::PcsiII, 1, {1, 3}, {1, 2}};
    Scenario sc2 = sc;
    sc2.lambda = {2, 1};  // doubled over F_3
    auto y = compute_Y(f3, store, sc);
    auto y2 = compute_Y(f3, store, sc2);
    for (std::uint32_t i = 0; i < 2; ++i) CHECK(y2[i] == f3.mul(2, y[i]));
}

TEST_CASE("Y is surjective for fixed support and coefficients") {
    // q=2, L=1, M=2: as W_S ranges over all values, Y covers F_2.
    Field f2(2, 1);
    Scenario sc{Variant::PcsiII, 1, {1, 2}, {1, 1}};
    std::set<Fe> values;
    MessageStore store{2, 2, 1, {{0}, {0}}};
    for (Fe a = 0; a < 2; ++a)
        for (Fe b = 0; b < 2; ++b) {
            store.W[0][0] = a;
            store.W[1][0] = b;
            values.insert(compute_Y(f2, store, sc)[0]);
        }
    CHECK(values.size() == 2);
}

TEST_CASE("store serialization carries the documented schema") {
    Params p{3, 2, 1, 2};
    auto store = sample_messages(p, 4);
    Scenario sc{Variant::PcsiI, 2, {1}, {2}};
    auto j = store_to_json(p, sc, store);
    CHECK(j.at("q") == 3);
    CHECK(j.at("K") == 2);
    CHECK(j.at("M") == 1);
    CHECK(j.at("L") == 2);
    CHECK(j.at("variant") == "PCSI-I");
    CHECK(j.at("theta") == 2);
    CHECK(j.at("S").size() == 1);
    CHECK(j.at("lambda").size() == 1);
    CHECK(j.at("W").size() == 2);
}
