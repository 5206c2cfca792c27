#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rfgrow/depth.hpp"

using namespace rfgrow;

TEST_CASE("congruence quotients of bs(1,2)") {
    auto G = Group::parse("bs:1:2");
    auto cert = congruence_depth_upper(*G, G->evaluate("a"), 10);
    REQUIRE(cert.has_value());
    CHECK(cert->order == 6);  // N = 3: ord_3(2) = 2, |H| = 3*2
    CHECK(cert->description == "congruence N=3");
    CHECK(cert->degree == 3);

    // a^3 dies mod 3; the next surviving congruence quotient is N = 5, order 20
    auto cert3 = congruence_depth_upper(*G, G->power(G->evaluate("a"), 3), 10);
    REQUIRE(cert3.has_value());
    CHECK(cert3->order == 20);

    // even N are skipped (not coprime to 2); t survives at N = 3
    auto certt = congruence_depth_upper(*G, G->evaluate("t"), 10);
    REQUIRE(certt.has_value());
    CHECK(certt->order == 6);
}

TEST_CASE("congruence quotients of sol and ut3lamp") {
    auto S = Group::parse("sol:2,1,1,1");
    auto cs = congruence_depth_upper(*S, S->evaluate("x"), 2);
    REQUIRE(cs.has_value());
    CHECK(cs->order == 12);  // A mod 2 = [[0,1],[1,1]] has order 3; 4 * 3
    CHECK(cs->degree == 4);

    auto U = Group::parse("ut3lamp:2");
    auto cu = congruence_depth_upper(*U, U->evaluate("z"), 3);
    REQUIRE(cu.has_value());
    CHECK(cu->order == 54);  // |U3(Z/3)| * ord_3(2) = 27 * 2
    CHECK(cu->degree == 27);

    auto H = Group::parse("heis");
    CHECK_THROWS_AS(congruence_depth_upper(*H, H->evaluate("x"), 5), std::invalid_argument);
}

TEST_CASE("congruence images define homomorphisms (relators hold)") {
    auto G = Group::parse("bs:1:2");
    auto cert = congruence_depth_upper(*G, G->evaluate("a"), 10);
    REQUIRE(cert.has_value());
    auto pres = *G->metadata().presentation;
    for (const auto& rel : pres.relators)
        CHECK(evaluate_power_word(to_power_word(pres, rel), cert->generator_images, cert->degree)
                  .is_identity());

    auto S = Group::parse("sol:2,1,1,1");
    auto cs = congruence_depth_upper(*S, S->evaluate("x"), 3);
    REQUIRE(cs.has_value());
    auto spres = *S->metadata().presentation;
    for (const auto& rel : spres.relators)
        CHECK(evaluate_power_word(to_power_word(spres, rel), cs->generator_images, cs->degree)
                  .is_identity());
}

TEST_CASE("congruence target images agree with word evaluation over generator images") {
    // the direct coordinate image of an element must equal the image of any
    // word spelling it, evaluated letterwise over the generator images
    std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
        {"bs:1:2", {"a t", "t^-1 a t a", "a^5 t^2", "t a^-3"}},
        {"sol:2,1,1,1", {"x y t", "t^-1 x t y^2", "x^4 y^-2 t^3"}},
        {"ut3lamp:2", {"x y z d", "d^-1 z d x", "z^9 d^2 y"}},
    };
    for (const auto& [spec, words] : cases) {
        auto G = Group::parse(spec);
        Presentation pres;
        pres.generators = G->metadata().generators;
        for (const auto& text : words) {
            Element e = G->evaluate(text);
            auto cert = congruence_depth_upper(*G, e, 7);
            if (!cert) continue;  // killed everywhere below the bound
            Perm direct = parse_perm(cert->target_image, cert->degree);
            Perm via_word = evaluate_power_word(to_power_word(pres, parse_word(text)),
                                                cert->generator_images, cert->degree);
            CHECK(direct == via_word);
        }
    }
}

TEST_CASE("arithmetic lower bound certificates") {
    auto G = Group::parse("bs:1:2");
    auto cert = arithmetic_lower_bound(*G, G->evaluate("a"), 3, 1);
    CHECK(cert.exponent.prime == 5);
    CHECK(cert.exponent.value == 12);
    CHECK(cert.bound == 5);

    auto U = Group::parse("ut3lamp:2");
    auto certu = arithmetic_lower_bound(*U, U->evaluate("z"), 3, 2);
    CHECK(certu.exponent.value == 20736);
    CHECK(certu.bound == 125);

    auto H = Group::parse("heis");
    CHECK_THROWS_AS(arithmetic_lower_bound(*H, H->metadata().distinguished, 3, 2), HypothesisRefusal);
    CHECK_THROWS_AS(arithmetic_lower_bound(*G, G->evaluate("t"), 3, 1), HypothesisRefusal);
    CHECK_THROWS_AS(arithmetic_lower_bound(*G, G->evaluate("a"), 3, 2), HypothesisRefusal);
}

TEST_CASE("depth intervals: exact small cases") {
    auto G = Group::parse("bs:1:2");
    DepthBudget budget;
    budget.max_degree = 6;

    DepthInterval da = depth_interval(*G, G->evaluate("a"), budget);
    CHECK(da.lower == 6);
    REQUIRE(da.upper.has_value());
    CHECK(*da.upper == 6);
    CHECK(da.exact);

    DepthInterval dt = depth_interval(*G, G->evaluate("t"), budget);
    CHECK(dt.exact);
    CHECK(dt.lower == 2);

    CHECK_THROWS_AS(depth_interval(*G, G->identity(), budget), std::invalid_argument);
}

TEST_CASE("depth of an element equals depth of its inverse on exact cases") {
    auto G = Group::parse("bs:1:2");
    DepthBudget budget;
    budget.max_degree = 6;
    for (const char* w : {"a", "t", "a^2", "a t"}) {
        DepthInterval d1 = depth_interval(*G, G->evaluate(w), budget);
        DepthInterval d2 = depth_interval(*G, G->invert(G->evaluate(w)), budget);
        CHECK(d1.lower == d2.lower);
        CHECK(d1.upper == d2.upper);
    }
}

TEST_CASE("depth interval of a witness power combines all certificate routes") {
    auto G = Group::parse("bs:1:2");
    Element a12 = G->power(G->evaluate("a"), 12);  // alpha_3 = 12

    DepthBudget small;
    small.max_degree = 4;
    DepthInterval iv = depth_interval(*G, a12, small);
    CHECK(iv.lower == 5);  // arithmetic certificate beats the order-4 exhaustion
    REQUIRE(iv.arithmetic.has_value());
    CHECK(iv.arithmetic->bound == 5);
    REQUIRE(iv.upper.has_value());
    CHECK(*iv.upper == 20);  // congruence N = 5: 12 != 0 mod 5, |H| = 5*4

    DepthBudget big;
    big.max_degree = 7;
    DepthInterval iv7 = depth_interval(*G, a12, big);
    CHECK(iv7.lower == 8);  // exhaustive search through order 7 found nothing
    CHECK(*iv7.upper == 20);
    CHECK_FALSE(iv7.exact);

    // monotonicity in the budget
    CHECK(iv7.lower >= iv.lower);
}

TEST_CASE("depth interval for ut3lamp is certificate-only") {
    auto U = Group::parse("ut3lamp:2");
    DepthBudget budget;
    Element z = U->evaluate("z");
    DepthInterval iv = depth_interval(*U, z, budget);
    REQUIRE(iv.upper.has_value());
    CHECK(*iv.upper == 54);
    CHECK(iv.lower >= 2);
    CHECK_FALSE(iv.witness->generator_images.empty());
}

TEST_CASE("growth table for bs(1,2)") {
    auto G = Group::parse("bs:1:2");
    DepthBudget budget;
    budget.max_degree = 7;
    GrowthTable t = rf_growth(*G, 3, budget);
    REQUIRE(t.entries.size() == 3);

    CHECK(t.entries[0].radius == 1);
    CHECK(t.entries[0].lower == 6);  // D(a) = 6, D(t) = 2
    REQUIRE(t.entries[0].upper.has_value());
    CHECK(*t.entries[0].upper == 6);
    CHECK(t.entries[0].exact);

    for (size_t i = 1; i < t.entries.size(); ++i) {
        CHECK(t.entries[i].lower >= t.entries[i - 1].lower);
        if (t.entries[i].upper && t.entries[i - 1].upper)
            CHECK(*t.entries[i].upper >= *t.entries[i - 1].upper);
    }
    // a^3 in the radius-3 ball needs order 8+, exactness is lost there
    CHECK(t.entries[2].lower >= 8);
    CHECK_FALSE(t.entries[2].exact);
}

TEST_CASE("growth table for the integers matches the arithmetic oracle") {
    auto G = Group::parse("z:1");
    DepthBudget budget;
    budget.max_degree = 7;
    GrowthTable t = rf_growth(*G, 5, budget);
    REQUIRE(t.entries.size() == 5);
    // oracle: D(k) = smallest group order q >= 2 with k not divisible by q
    auto depth_of = [](int64_t k) {
        for (int64_t q = 2;; ++q)
            if (k % q != 0) return q;
    };
    for (int n = 1; n <= 5; ++n) {
        int64_t expect = 0;
        for (int64_t k = 1; k <= n; ++k) expect = std::max(expect, depth_of(k));
        const auto& e = t.entries[static_cast<size_t>(n - 1)];
        CHECK(e.exact);
        CHECK(e.lower == expect);
        CHECK(*e.upper == expect);
    }
    CHECK(t.entries[4].lower == 3);  // F(5) = 3, brute-force confirmed
}

TEST_CASE("growth table at radius 0 is empty") {
    auto G = Group::parse("bs:1:2");
    CHECK(rf_growth(*G, 0).entries.empty());
}

TEST_CASE("growth tables for the other families") {
    DepthBudget b;
    b.max_degree = 6;
    b.congruence_nmax = 60;

    // sol: x and y die in every quotient of order <= 6 (the abelianization is
    // Z since det(A - I) = -1), so only the congruence upper remains
    auto S = Group::parse("sol:2,1,1,1");
    GrowthTable ts = rf_growth(*S, 1, b);
    REQUIRE(ts.entries.size() == 1);
    CHECK(ts.entries[0].lower == 7);
    REQUIRE(ts.entries[0].upper.has_value());
    CHECK(*ts.entries[0].upper == 12);
    CHECK_FALSE(ts.entries[0].exact);

    // heis: generators survive mod 2, length-2 products need mod 3
    auto H = Group::parse("heis");
    GrowthTable th = rf_growth(*H, 2, b);
    REQUIRE(th.entries.size() == 2);
    CHECK(th.entries[0].exact);
    CHECK(th.entries[0].lower == 2);
    CHECK(th.entries[1].exact);
    CHECK(th.entries[1].lower == 3);

    // ut3lamp: no presentation, but the depth-2 certificate at i = 1 already
    // forces D(z) >= 2^3, and the congruence upper is 54
    auto U = Group::parse("ut3lamp:2");
    GrowthTable tu = rf_growth(*U, 1, b);
    REQUIRE(tu.entries.size() == 1);
    CHECK(tu.entries[0].lower == 8);
    REQUIRE(tu.entries[0].upper.has_value());
    CHECK(*tu.entries[0].upper == 54);
    CHECK_FALSE(tu.entries[0].exact);
}

TEST_CASE("case audit: small ranges are fully covered with zero survivors") {
    auto G = Group::parse("bs:1:2");
    Element a = G->evaluate("a");

    AuditReport r3 = case_audit(*G, a, 3, 1, 4);
    CHECK(r3.prime == 5);
    CHECK(r3.alpha == 12);
    CHECK(r3.claim_bound == 5);
    CHECK(r3.audited_cap == 4);
    CHECK(r3.complete);
    CHECK(r3.survivors == 0);
    CHECK(r3.images_checked > 0);

    AuditReport r4 = case_audit(*G, a, 4, 1, 6);
    CHECK(r4.claim_bound == 7);
    CHECK(r4.audited_cap == 6);
    CHECK(r4.complete);
    CHECK(r4.survivors == 0);

    AuditReport r1 = case_audit(*G, a, 1, 1, 6);  // alpha_1 = 1, vacuous
    CHECK(r1.complete);
    CHECK(r1.survivors == 0);

    // partial coverage is flagged when the budget is short of the claim
    AuditReport rp = case_audit(*G, a, 4, 1, 4);
    CHECK_FALSE(rp.complete);
    CHECK(rp.survivors == 0);
}

TEST_CASE("case audit parallel equals serial") {
    auto G = Group::parse("bs:1:2");
    Element a = G->evaluate("a");
    AuditReport par = case_audit(*G, a, 4, 1, 6, true);
    AuditReport ser = case_audit(*G, a, 4, 1, 6, false);
    CHECK(par.images_checked == ser.images_checked);
    CHECK(par.survivors == ser.survivors);
}

TEST_CASE("theorem verification for bs(1,2), depth 1") {
    auto G = Group::parse("bs:1:2");
    VerificationReport r = theorem_verify(*G, 2, 8);
    CHECK(r.m == 1);
    CHECK(r.distortion == DistortionVerdict::AtLeastExponential);
    REQUIRE(r.points.size() == 7);
    int64_t expect_p[] = {3, 5, 7, 11, 13, 17, 19};
    for (size_t i = 0; i < 7; ++i) {
        CHECK(r.points[i].p == expect_p[i]);
        CHECK(r.points[i].L == expect_p[i]);
        CHECK(r.points[i].n_lower <= r.points[i].n_upper);
        CHECK(r.points[i].n_upper <= 3 * r.points[i].p);  // Horner constant
    }
    CHECK(r.min_ratio >= 0.3518);  // recorded on the first oracle run: 19/54
    CHECK(r.verified);
}

TEST_CASE("theorem verification for ut3lamp(2), depth 2") {
    auto U = Group::parse("ut3lamp:2");
    VerificationReport r = theorem_verify(*U, 2, 6);
    CHECK(r.m == 2);
    REQUIRE(r.points.size() == 5);
    int64_t expect_p[] = {3, 5, 7, 11, 13};
    for (size_t i = 0; i < 5; ++i) {
        CHECK(r.points[i].p == expect_p[i]);
        CHECK(r.points[i].L == BigInt(expect_p[i]) * expect_p[i] * expect_p[i]);
        CHECK(r.points[i].n_upper <= 7 * r.points[i].p);
    }
    CHECK(r.min_ratio >= 0.0039);  // recorded on the first oracle run
    CHECK(r.verified);
}

TEST_CASE("theorem verification for the sol lattice, depth 1") {
    auto S = Group::parse("sol:2,1,1,1");
    VerificationReport r = theorem_verify(*S, 2, 8);
    CHECK(r.m == 1);
    REQUIRE(r.points.size() == 7);
    for (const auto& pt : r.points) CHECK(pt.L == pt.p);
    CHECK(r.min_ratio >= 0.16);  // recorded on the first oracle run: 0.1667
    CHECK(r.verified);
}

TEST_CASE("theorem verification refuses ineligible families") {
    CHECK_THROWS_AS(theorem_verify(*Group::parse("heis"), 2, 5), HypothesisRefusal);
    CHECK_THROWS_AS(theorem_verify(*Group::parse("z:2"), 2, 5), HypothesisRefusal);
}

TEST_CASE("witness order bound on the ut3lamp congruence quotient") {
    // H = U3(Z/3) x| Z/2 (congruence at N = 3), x_img = image of z, m = 2:
    // Fitt(H) = U3(Z/3) is a 3-group, so |H| = 54 >= 3^(m+1) = 27
    auto U = Group::parse("ut3lamp:2");
    auto cert = congruence_depth_upper(*U, U->evaluate("z"), 3);
    REQUIRE(cert.has_value());
    FiniteGroup H = FiniteGroup::closure(cert->generator_images);
    CHECK(H.order() == 54);
    int z_img = H.index_of(parse_perm(cert->target_image, cert->degree));
    REQUIRE(z_img >= 0);
    auto bound = witness_order_bound_check(H, z_img, 2);
    CHECK(bound.p == 3);
    CHECK(bound.bound == 27);
    CHECK(bound.holds);
    CHECK(bound.fitting_step == 2);
}

TEST_CASE("soundness: arithmetic certificates never exceed exact depths") {
    auto G = Group::parse("bs:1:2");
    DepthBudget budget;
    budget.max_degree = 6;
    // alpha_2 = 2, so a^2 carries the i = 2 certificate (bound 3) and has exact depth 6
    DepthInterval iv = depth_interval(*G, G->power(G->evaluate("a"), 2), budget);
    REQUIRE(iv.arithmetic.has_value());
    CHECK(iv.arithmetic->bound == 3);
    CHECK(iv.exact);
    CHECK(*iv.upper == 6);
    CHECK(iv.arithmetic->bound.convert_to<int64_t>() <= *iv.upper);
}

TEST_CASE("congruence upper agrees with the exhaustive value for a") {
    auto G = Group::parse("bs:1:2");
    auto hom = hom_search(*G, parse_word("a"), 6);
    auto cong = congruence_depth_upper(*G, G->evaluate("a"), 10);
    REQUIRE(hom.witness.has_value());
    REQUIRE(cong.has_value());
    CHECK(hom.witness->order == cong->order);
}
