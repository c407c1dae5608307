#include <gtest/gtest.h>

#include <numeric>

#include "heightforge/heightforge.hpp"
#include "heightforge/io.hpp"

using namespace heightforge;

namespace {

WeierstrassCurve e37() { return make_curve(0, 0, 1, -1, 0); }
WeierstrassCurve cm32() { return make_curve(0, 0, 0, -1, 0); }

QuadraticPoint q481() {
    QuadraticField K(481);
    return {QuadraticElement(5), QuadraticElement(BigRational(-1, 2), BigRational(1, 2), K)};
}

// smallest k in (1, m), prime to m, with k = 1 mod m/p
long tau_oracle(long m, long p) {
    for (long k = 2; k < m; ++k)
        if (std::gcd(k, m) == 1 && (k - 1) % (m / p) == 0) return k;
    return -1;
}

CorpusConfig small_corpus() {
    CorpusConfig c;
    c.rational_bound = 30;
    c.x_min = -3;
    c.x_max = 5;
    c.max_multiple = 2;
    return c;
}

}  // namespace

// ---------------------------------------------------------------- ramified

TEST(AdTau, Examples) {
    EXPECT_EQ(ad_tau_construct(4, 2).k, 3);
    EXPECT_EQ(ad_tau_construct(9, 3).k, 4);
    EXPECT_EQ(ad_tau_construct(12, 3).k, 5);
    for (auto [m, p] : std::vector<std::pair<long, long>>{{4, 2}, {8, 2}, {12, 2}, {9, 3}, {12, 3}, {25, 5}, {27, 3},
                                                           {20, 5}, {49, 7}}) {
        auto t = ad_tau_construct(m, p);
        EXPECT_EQ(t.k, tau_oracle(m, p)) << m << " " << p;
        EXPECT_EQ(t.k % (m / p), 1 % (m / p));
        EXPECT_NE(t.k % m, 1);
    }
    EXPECT_THROW(ad_tau_construct(9, 2), argument_error);
    EXPECT_THROW(ad_tau_construct(6, 2), argument_error);  // Q(zeta_6) = Q(zeta_3)
    EXPECT_THROW(ad_tau_construct(3, 3), argument_error);
}

TEST(AdCongruence, Examples) {
    auto tau = ad_tau_construct(4, 2);
    for (long a = -5; a <= 5; ++a)
        for (long b = -5; b <= 5; ++b) {
            CyclotomicElement x(4, {BigInt(a), BigInt(b), 0, 0});
            EXPECT_TRUE(ad_congruence_holds(x, tau, 2));
            // (a - bi)^2 - (a + bi)^2 = -4abi
            auto diff = apply_automorphism(x, tau).pow(2) - x.pow(2);
            EXPECT_EQ(diff, CyclotomicElement::constant(4, -4 * a * b) * CyclotomicElement::zeta(4));
        }
    auto t9 = ad_tau_construct(9, 3);
    auto z = CyclotomicElement::zeta(9);
    EXPECT_EQ(apply_automorphism(z, t9).pow(3) - z.pow(3), CyclotomicElement(9));
}

TEST(AdCongruence, AllPairsPass) {
    for (auto [m, p] : std::vector<std::pair<long, long>>{{4, 2}, {8, 2}, {12, 2}, {9, 3}, {12, 3}, {25, 5}}) {
        auto w = verify_ad_congruence(m, p, 200, 7);
        EXPECT_TRUE(w.all_pass) << m << " " << p;
        EXPECT_EQ(w.samples.size(), 200u);
        EXPECT_GT(w.exhaustive_checked, 0u);
        EXPECT_EQ(w.checked, w.exhaustive_checked + 200);
    }
}

TEST(AdCongruence, FailsOutsideInertia) {
    // k = 2 moves zeta_3 inside Q(zeta_9); the congruence fails for zeta_9 itself
    auto g = GaloisAutomorphism::cyclotomic_power(2, 9);
    EXPECT_FALSE(ad_congruence_holds(CyclotomicElement::zeta(9), g, 3));
}

TEST(AdCongruence, Deterministic) {
    auto a = verify_ad_congruence(12, 3, 50, 99), b = verify_ad_congruence(12, 3, 50, 99);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i], b.samples[i]);
}

TEST(Ramified, E37Over481) {
    auto r = ramified_point_check(e37(), 481, q481(), 13);
    EXPECT_EQ(r.outcome, RamifiedOutcome::checked);
    ASSERT_TRUE(r.kernel_witness.has_value());
    EXPECT_GE(*r.kernel_witness, BigRational(1, 2));
    ASSERT_TRUE(r.valuation.has_value());
    EXPECT_GE(*r.valuation, 2);
    EXPECT_TRUE(r.bound_met);
    EXPECT_GE(*r.local_height, log(Real(13)) - Real("1e-40"));
    EXPECT_FALSE(r.Pprime.infinity);
}

TEST(Ramified, DescentAndGuards) {
    auto d = ramified_point_check(e37(), 5, lift_point(RationalPoint(0, 0), 5), 5);
    EXPECT_EQ(d.outcome, RamifiedOutcome::descent);
    EXPECT_TRUE(d.Pprime.infinity);
    auto t = ramified_point_check(cm32(), 5, lift_point(RationalPoint(0, 0), 5), 5);
    EXPECT_EQ(t.outcome, RamifiedOutcome::torsion);
    EXPECT_EQ(t.torsion_order, 2);
    EXPECT_THROW(ramified_point_check(e37(), 481, q481(), 5), argument_error);   // not ramified
    EXPECT_THROW(ramified_point_check(e37(), 481, q481(), 37), argument_error);  // bad reduction
}

TEST(TorsionEscape, IdentityAllSmall) {
    for (long m = 1; m <= 24; ++m)
        for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
            auto t = torsion_escape_identity(m, p);
            EXPECT_TRUE(t.verified);
            EXPECT_EQ(t.a, IntPolynomial::constant(p));
        }
    // m = 3: b = -(2 + X)
    EXPECT_EQ(torsion_escape_identity(3, 7).b, (IntPolynomial{-2, -1}));
    EXPECT_TRUE(torsion_escape_identity(2, 5).b == IntPolynomial::constant(-1));
}

// ---------------------------------------------------------------- pipeline

TEST(Bound, Constants) {
    auto b7 = compute_bound(7);
    EXPECT_EQ(b7.C_unramified, BigRational(1, 234));
    EXPECT_EQ(b7.C_ramified, BigRational(1, 882));
    EXPECT_EQ(b7.C, BigRational(1, 882));
    auto b5 = compute_bound(5);
    EXPECT_EQ(b5.C_unramified, BigRational(1, 138));
    EXPECT_EQ(b5.C, BigRational(1, 450));
    auto b2 = compute_bound(2);
    EXPECT_EQ(b2.C_unramified, BigRational(1, 39));
    EXPECT_EQ(b2.C, BigRational(1, 72));
    for (long p = 2; p < 200; p = next_prime(p).get_si()) {
        auto b = compute_bound(p);
        EXPECT_EQ(3 * (1 + 4 * p + p * p) * b.C_unramified, 1);
        EXPECT_EQ(18 * p * p * b.C_ramified, 1);
        EXPECT_GT(b.C, 0);
        EXPECT_LT(b.C, 1);
        EXPECT_EQ(b.C, std::min(b.C_unramified, b.C_ramified));
    }
    EXPECT_THROW(compute_bound(9), argument_error);
}

TEST(Surjectivity, E37AndIsogenousControl) {
    auto e = surjectivity_heuristic(e37(), 7, 500);
    auto again = surjectivity_heuristic(e37(), 7, 500);
    EXPECT_EQ(e.status, again.status);
    EXPECT_EQ(e.max_projective_order, again.max_projective_order);
    EXPECT_EQ(e.status, HeuristicStatus::heuristic_pass);
    // 11a1 has a rational 5-isogeny: every char poly is reducible mod 5
    auto r = surjectivity_heuristic(make_curve(0, -1, 1, -10, -20), 5, 500);
    EXPECT_NE(r.status, HeuristicStatus::heuristic_pass);
    EXPECT_FALSE(r.borel_excluded);
    // p = 2 through the 2-division cubic
    EXPECT_EQ(surjectivity_heuristic(e37(), 2, 200).status, HeuristicStatus::heuristic_pass);
    // y^2 = x^3 - x has full rational 2-torsion
    EXPECT_NE(surjectivity_heuristic(cm32(), 2, 200).status, HeuristicStatus::heuristic_pass);
}

TEST(C1, EmpiricalStableAndBelowDerived) {
    auto E = e37();
    auto corpus = build_corpus(E, small_corpus());
    auto s1 = c1_sample(E, corpus, 8, 1), s2 = c1_sample(E, corpus, 16, 1);
    s2.insert(s2.end(), s1.begin(), s1.end());
    auto a = c1_bound(E, C1Mode::empirical, s1), b = c1_bound(E, C1Mode::empirical, s2);
    EXPECT_GE(a.value, 0);
    EXPECT_LE(abs(b.value - a.value), a.value / 5);
    auto d = c1_bound(E, C1Mode::derived, s1);
    EXPECT_EQ(d.mode, C1Mode::derived);
    EXPECT_FALSE(d.fallback_warning);
    // the derived value bounds the same negated weighted negative parts (without the factor 2)
    EXPECT_GE(d.value, a.value / 2);
    EXPECT_GE(d.evidence.c2, 0);
}

TEST(C1, AdditiveCurveFallsBack) {
    auto E = cm32();
    std::vector<CorpusPoint> s;
    for (const auto& P : rational_points_search(E, 10)) s.push_back({"rational-search", lift_point(P, 0), 0});
    auto d = c1_bound(E, C1Mode::derived, s);
    EXPECT_TRUE(d.fallback_warning);
    EXPECT_EQ(d.mode, C1Mode::empirical);
    EXPECT_GE(d.value, 0);
}

TEST(SelectPrime, ConditionsAndMonotonicity) {
    auto E = e37();
    PipelineConfig cfg;
    cfg.sample_bound = 200;
    long last = 0;
    for (const char* v : {"0", "0.5", "0.827", "1.5", "2.5", "3.5"}) {
        C1Report c;
        c.value = Real(v);
        auto r = select_prime(E, cfg, c);
        EXPECT_GE(Real(r.p), exp(1 + c.value));
        EXPECT_NE(r.p, 37);
        EXPECT_TRUE(r.cond_good_reduction);
        EXPECT_TRUE(r.cond_degree1_unramified);
        EXPECT_GE(r.p, last);
        last = r.p;
    }
    // 37 is skipped even when the size condition allows it
    C1Report c;
    c.value = Real("2.5");  // e^3.5 = 33.1
    cfg.min_p = 37;
    EXPECT_EQ(select_prime(E, cfg, c).p, 41);
}

TEST(SelectPrime, CMNeedsAssertion) {
    PipelineConfig cfg;
    C1Report c;
    c.value = 1;
    EXPECT_THROW(select_prime(cm32(), cfg, c), search_exhausted_error);
    cfg.assert_condition_1 = true;
    auto r = select_prime(cm32(), cfg, c);
    EXPECT_TRUE(r.cm_flagged);
    EXPECT_EQ(r.cond_torsion, ConditionStatus::asserted);
    EXPECT_EQ(r.p, 11);
}

TEST(Corpus, SmallCorpusVerifies) {
    auto E = e37();
    auto corpus = build_corpus(E, small_corpus());
    EXPECT_FALSE(corpus.empty());
    auto run = verify_corpus(E, compute_bound(7), corpus, Real("0.83"));
    EXPECT_TRUE(run.pass());
    EXPECT_GT(run.nontorsion, 10u);
    for (const auto& r : run.results)
        if (r.torsion.status == TorsionStatus::nontorsion) EXPECT_TRUE(r.meets_bound);
    // without a certificate every nontorsion point is a violation
    EXPECT_FALSE(verify_corpus(E, std::nullopt, corpus).pass());
}

TEST(Corpus, ScanFindsQuadraticPoints) {
    auto pts = quadratic_points_scan(e37(), 3, 5, {});
    ASSERT_EQ(pts.size(), 3u);
    auto EL = base_change(e37(), 481);
    EXPECT_TRUE(on_curve(EL, pts[2]));
    EXPECT_EQ(pts[2].y.d(), 481);
}

TEST(Pipeline, Deterministic) {
    PipelineConfig cfg;
    cfg.corpus = small_corpus();
    cfg.sample_bound = 200;
    auto a = run_pipeline(e37(), cfg), b = run_pipeline(e37(), cfg);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    EXPECT_TRUE(a.pass());
}

// ---------------------------------------------------------------- io

TEST(IO, CurveAndPointRoundTrip) {
    auto j = json::parse(R"({"a1":"0","a2":"0","a3":"1","a4":"-1","a6":"0"})");
    auto E = curve_from_json(j);
    EXPECT_EQ(E, e37());
    EXPECT_EQ(curve_from_json(curve_json(E)), E);
    auto P = parse_point("1/4,-5/8");
    EXPECT_EQ(P.x, QuadraticElement(BigRational(1, 4)));
    auto Q = parse_point("5,-1/2+1/2*sqrt(481)", 481);
    EXPECT_TRUE(on_curve(base_change(E, 481), Q));
    EXPECT_THROW(curve_from_json(json::parse(R"({"a1":"0"})")), std::exception);
    EXPECT_THROW(parse_point("1"), std::exception);
}

TEST(IO, DecompositionJsonShape) {
    auto h = height_decomposition(e37(), RationalPoint(BigRational(1, 4), BigRational(-5, 8)));
    auto j = to_json(h);
    ASSERT_TRUE(j.contains("global"));
    ASSERT_TRUE(j.contains("entries"));
    ASSERT_TRUE(j.contains("residual"));
    bool found = false;
    for (const auto& e : j["entries"])
        if (e["place"] == "2") {
            found = true;
            EXPECT_EQ(e["method"], "good-formula");
            EXPECT_EQ(e["log_coefficient"], "1");
        }
    EXPECT_TRUE(found);
    auto a = to_json(verify_annihilation(e37(), RationalPoint(0, 0), 2));
    EXPECT_EQ(a["p"], 2);
    EXPECT_EQ(a["a"], -2);
    EXPECT_EQ(a["Np"], 5);
    EXPECT_EQ(a["kernel"], true);
}
