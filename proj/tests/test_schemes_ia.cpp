#include <catch2/catch_amalgamated.hpp>

#include "pcsilab/auditor.hpp"
#include "pcsilab/schemes/ia.hpp"

using namespace pcsilab;

namespace {

Tower tower4() { return Tower(Field(2, 2)); }

}  // namespace

TEST_CASE("worked F_4 example: downloads (A1, B2, C1+C2) recover A") {
    Tower t = tower4();
    IaPcsi2 s(t, 3, 2);
    // lambda_1 = 1+x (code 3), lambda_2 = x (code 2); retrieve message 1.
    Scenario sc{Variant::PcsiII, 1, {1, 2}, {3, 2}};

    // Single off-support draw; coin 2 selects the row [1, 1].
    TapeSource coins;
    coins.uniform(3);
    coins.advance();
    coins.advance();
    coins.rewind();
    auto qr = s.make_query(sc, coins);
    const auto& rows = qr.query.blocks.at(0).rows;
    CHECK(rows[0] == std::vector<Fe>{1, 0});  // second row of M_{1+x}: picks A_1
    CHECK(rows[1] == std::vector<Fe>{0, 1});  // first row of M_x: picks B_2
    CHECK(rows[2] == std::vector<Fe>{1, 1});  // random half of C: C_1 + C_2

    Field f4(2, 2);
    Params p{4, 3, 2, 1};
    detail::StoreOdometer odo(p);
    do {
        const MessageStore& store = odo.store();
        Answer ans = s.answer(qr.query, store);
        Vec2 va = t.vec_rep(store.message(1)[0]);
        Vec2 vb = t.vec_rep(store.message(2)[0]);
        Vec2 vc = t.vec_rep(store.message(3)[0]);
        REQUIRE(ans.blocks[0].symbols[0] == va.v[0]);
        REQUIRE(ans.blocks[0].symbols[1] == vb.v[1]);
        REQUIRE(ans.blocks[0].symbols[2] == (vc.v[0] ^ vc.v[1]));

        auto y = compute_Y(f4, store, sc);
        // V_Y(1) = A_1 + A_2 + B_2 for these coefficients.
        SideInfo csi = s.retain_csi(y);
        REQUIRE(csi.y[0] == (va.v[0] ^ va.v[1] ^ vb.v[1]));

        auto decoded = s.decode(ans, qr.state, csi);
        REQUIRE(decoded == store.message(1));
    } while (odo.advance());
}

TEST_CASE("unit coefficient at theta means the two halves stack directly") {
    Tower t = tower4();
    IaPcsi2 s(t, 3, 2);
    Scenario sc{Variant::PcsiII, 1, {1, 3}, {1, 2}};  // lambda_t = 1
    SeededSource rng(3);
    auto qr = s.make_query(sc, rng);
    // Row for theta is the second row of the identity.
    CHECK(qr.query.blocks.at(0).rows[0] == std::vector<Fe>{0, 1});
}

TEST_CASE("exhaustive replay over q=4, K=4, M=2") {
    Tower t = tower4();
    IaPcsi2 s(t, 4, 2);
    Field f4(2, 2);
    auto rep = audit_correctness(s, f4, true);
    CHECK(rep.failures == 0);
    // scenarios: C(4,2)*2 pairs * 9 coefficient vectors; coins 3^2; stores 4^4.
    CHECK(rep.trials == 12ull * 9 * 9 * 256);
}

TEST_CASE("alignment property: cancelling downloads leaves the first-row projection") {
    Tower t = tower4();
    const Field& fs = t.fs();
    IaPcsi2 s(t, 4, 2);
    Field f4(2, 2);
    Params p = s.params();
    SplitMix64 seeder(21);
    for (const auto& sc : enumerate_scenarios(p, Variant::PcsiII, PrivacyMode::ThetaSLambda)) {
        MessageStore store = sample_messages(p, seeder.next());
        SeededSource coins(seeder.next());
        auto qr = s.make_query(sc, coins);
        Answer ans = s.answer(qr.query, store);
        Fe acc = s.retain_csi(compute_Y(f4, store, sc)).y[0];
        for (auto idx : sc.S)
            if (idx != sc.theta) acc = fs.sub(acc, ans.blocks[0].symbols[idx - 1]);
        Mat2 rep = t.mat_rep(sc.lambda[sc.theta_pos() - 1]);
        Vec2 vw = t.vec_rep(store.message(sc.theta)[0]);
        Fe expect = fs.add(fs.mul(rep.m[0][0], vw.v[0]), fs.mul(rep.m[0][1], vw.v[1]));
        REQUIRE(acc == expect);
    }
}

TEST_CASE("rate identity and csi fraction") {
    Tower t = tower4();
    IaPcsi2 s(t, 5, 2);
    CHECK(s.rate() == Rational(2, 5));
    CHECK(s.csi_alpha() == Rational(1, 2));
    Field f4(2, 2);
    Params p = s.params();
    auto store = sample_messages(p, 1);
    Scenario sc{Variant::PcsiII, 2, {2, 4}, {3, 1}};
    SeededSource rng(8);
    auto tr = run_round(s, store, f4, sc, rng);
    CHECK(tr.download_cost == Rational(5, 2));
    CHECK(Rational(p.L) / tr.download_cost == s.rate());
    CHECK(tr.decoded == store.message(2));
}

TEST_CASE("construction and scenario validation") {
    Tower t = tower4();
    CHECK_THROWS_AS(IaPcsi2(t, 3, 4), std::invalid_argument);  // M > K
    CHECK_THROWS_AS(IaPcsi2(t, 3, 1), std::invalid_argument);  // M < 2
    IaPcsi2 s(t, 3, 2);
    SeededSource rng(0);
    Scenario bad{Variant::PcsiII, 3, {1, 2}, {1, 1}};  // theta not in S
    CHECK_THROWS_AS(s.make_query(bad, rng), std::invalid_argument);
    Scenario zero{Variant::PcsiII, 1, {1, 2}, {0, 1}};  // zero coefficient
    CHECK_THROWS_AS(s.make_query(zero, rng), std::invalid_argument);
}
