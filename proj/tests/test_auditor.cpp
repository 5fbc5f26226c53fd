#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "pcsilab/auditor.hpp"
#include "pcsilab/report.hpp"
#include "pcsilab/schemes/generic.hpp"
#include "pcsilab/schemes/grs.hpp"
#include "pcsilab/schemes/halfdl.hpp"
#include "pcsilab/schemes/ia.hpp"
#include "pcsilab/schemes/negative_control.hpp"

using namespace pcsilab;

TEST_CASE("chi-square survival function sanity") {
    CHECK(chi_square_sf(0.0, 4) == 1.0);
    CHECK_THAT(chi_square_sf(3.841, 1), Catch::Matchers::WithinAbs(0.05, 0.002));
    CHECK_THAT(chi_square_sf(9.488, 4), Catch::Matchers::WithinAbs(0.05, 0.002));
    CHECK(chi_square_sf(100.0, 2) < 1e-10);
}

TEST_CASE("alignment scheme passes the exact (theta,S) audit with uniform cells") {
    Tower t{Field(2, 2)};
    IaPcsi2 s(t, 3, 2);
    auto rep = audit_privacy_exact(s, PrivacyMode::ThetaS);
    CHECK(rep.method == "exact");
    CHECK(rep.cells == 6);
    CHECK(rep.max_tv == Rational(0));
    CHECK(rep.pass());

    // The per-cell distribution is uniform over the 27 triples of nonzero
    // row vectors, reconstructed here directly.
    Scenario cell{Variant::PcsiII, 1, {1, 2}, {1, 1}};
    std::map<std::string, Rational> dist;
    for (std::uint64_t li = 0; li < lambda_count(4, 2); ++li) {
        Scenario sc = cell;
        sc.lambda = lambda_at(4, 2, li);
        TapeSource coins;
        do {
            coins.rewind();
            auto qr = s.make_query(sc, coins);
            dist[qr.query.canonical_key()] += Rational(1, 9) * coins.leaf_probability();
        } while (coins.advance());
    }
    CHECK(dist.size() == 27);
    for (const auto& [k, p] : dist) CHECK(p == Rational(1, 27));
}

TEST_CASE("alignment scheme does not hide the coefficients themselves") {
    Tower t{Field(2, 2)};
    IaPcsi2 s(t, 3, 2);
    auto rep = audit_privacy_exact(s, PrivacyMode::ThetaSLambda);
    CHECK(rep.max_tv > Rational(0));
    CHECK_FALSE(rep.pass());
}

TEST_CASE("the broken alignment variant is caught by both audit modes") {
    Tower t{Field(2, 2)};
    BrokenIaPcsi2 s(t, 3, 2);
    auto exact = audit_privacy_exact(s, PrivacyMode::ThetaS);
    CHECK(exact.max_tv > Rational(0));
    CHECK_FALSE(exact.pass());

    auto sampled = audit_privacy_sampled(s, PrivacyMode::ThetaS, 2000, 5);
    CHECK(sampled.p_value < 0.01);
    CHECK_FALSE(sampled.pass());
    CHECK(sampled.max_tv_estimate > 0.1);
}

TEST_CASE("privacy failure maps to its own exit code") {
    // The alignment scheme is correct but does not hide the coefficients, so
    // auditing it for joint (theta,S,lambda) privacy must exit with 2.
    Tower t{Field(2, 2)};
    IaPcsi2 s(t, 3, 2);
    Field f4(2, 2);
    AuditOptions opt;
    opt.privacy_mode = PrivacyMode::ThetaSLambda;
    auto outcome = run_audit(s, f4, opt);
    CHECK(outcome.correctness.failures == 0);
    CHECK(outcome.exit_code == kExitPrivacyFailure);
}

TEST_CASE("sampled audit accepts a scheme that is exactly private") {
    // Under the null the p-value is roughly uniform, so any single seed can
    // dip below the threshold; a healthy scheme passes nearly every seed
    // while a broken one fails all of them.
    Tower t{Field(2, 2)};
    IaPcsi2 s(t, 4, 2);
    int passes = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        if (audit_privacy_sampled(s, PrivacyMode::ThetaS, 1500, seed).pass()) ++passes;
    CHECK(passes >= 4);
}

TEST_CASE("privacy verdicts survive relabeling of messages") {
    // Swapping message indices permutes the cells; the verdict stays TV = 0.
    Field f5(5, 1);
    GrsPcsi1 s(f5, 4, 2);
    auto rep = audit_privacy_exact(s, PrivacyMode::ThetaS);
    CHECK(rep.max_tv == Rational(0));
    CHECK(rep.cells == 12);
}

TEST_CASE("deterministic queries give point-mass cells") {
    Field f2(2, 1);
    auto bank = search_vectors(f2, 3, 1, BankMode::Pcsi1, 11);
    GenericPcsi1 s(f2, 3, 1, false, bank);
    auto rep = audit_privacy_exact(s, PrivacyMode::ThetaSLambda);
    CHECK(rep.max_tv == Rational(0));
    CHECK(rep.pass());
}

TEST_CASE("enumeration budget is enforced and reported") {
    Field f25(5, 2);
    Tower t(f25);
    HalfDlPcsi s(t, 4, 2);
    CHECK_THROWS_AS(audit_privacy_exact(s, PrivacyMode::ThetaS, 1000),
                    EnumerationBudgetExceeded);

    // The composite pipeline falls back to sampling.
    AuditOptions opt;
    opt.exhaustive_messages = false;
    opt.message_samples = 2;
    opt.privacy_samples = 150;
    opt.enumeration_budget = 1000;
    opt.seed = 3;
    auto outcome = run_audit(s, f25, opt);
    CHECK(outcome.privacy.method == "sampled");
    CHECK(outcome.report.at("privacy").at("method") == "sampled");
}

TEST_CASE("measured rates match the declared formulas") {
    Field f4(2, 2);
    Tower t(f4);
    IaPcsi2 ia(t, 5, 2);
    CHECK(measure_rate(ia, f4, 8, 1).rate == Rational(2, 5));

    Field f5(5, 1);
    CombinedPcsi comb(f5, 4, 2);
    CHECK(measure_rate(comb, f5, 8, 1).rate == Rational(1, 3));

    Field f2(2, 1);
    auto bank = search_vectors(f2, 4, 2, BankMode::Pcsi2, 5, 3);
    GenericPcsi2 gen(f2, 4, 2, false, bank);
    CHECK(measure_rate(gen, f2, 8, 1).rate == Rational(1, 2));
}

TEST_CASE("half-CSI audit passes with the projection and fails with a constant") {
    Field f4(2, 2);
    Tower t(f4);
    IaPcsi2 s(t, 4, 2);
    auto rep = audit_half_csi(s, f4);
    CHECK(rep.retained.failures == 0);
    CHECK(rep.degraded.failures > 0);
    CHECK(rep.pass());
}

TEST_CASE("sampled correctness on a moderate field") {
    Field f5(5, 1);
    GrsPcsi1 s(f5, 4, 2);
    auto rep = audit_correctness(s, f5, false, 40, 2);
    CHECK(rep.failures == 0);
    CHECK(rep.message_mode == "sampled");
}

TEST_CASE("sampled audit rejects too few samples") {
    Field f5(5, 1);
    GrsPcsi1 s(f5, 4, 2);
    CHECK_THROWS_AS(audit_privacy_sampled(s, PrivacyMode::ThetaS, 50, 1),
                    std::invalid_argument);
}

TEST_CASE("audit report serializes the documented fields") {
    Field f4(2, 2);
    Tower t(f4);
    IaPcsi2 s(t, 3, 2);
    AuditOptions opt;
    auto outcome = run_audit(s, f4, opt);
    CHECK(outcome.exit_code == kExitPass);
    const auto& j = outcome.report;
    CHECK(j.at("report_version") == 1);
    CHECK(j.at("scheme") == "ia_pcsi2");
    CHECK(j.at("params").at("q") == 4);
    CHECK(j.at("correctness").at("failures") == 0);
    CHECK(j.at("privacy").at("max_tv") == "0/1");
    CHECK(j.at("rate").at("rate") == "2/3");
    CHECK(j.at("capacity").at("capacity_achieving") == true);
}
