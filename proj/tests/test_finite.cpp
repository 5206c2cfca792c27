#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <set>

#include "catalog.hpp"
#include "rfgrow/finite.hpp"

using namespace rfgrow;
using namespace rfgrow::catalog;

namespace {

// oracle: every subgroup of G by closure-extension over the subgroup lattice
std::vector<Subgroup> all_subgroups(const FiniteGroup& G) {
    std::set<std::vector<int>> seen;
    std::vector<Subgroup> out;
    std::vector<std::vector<int>> queue;
    Subgroup triv = trivial_subgroup(G);
    seen.insert(triv.members);
    out.push_back(triv);
    queue.push_back(triv.members);
    while (!queue.empty()) {
        std::vector<int> cur = std::move(queue.back());
        queue.pop_back();
        std::vector<char> mask(static_cast<size_t>(G.order()), 0);
        for (int m : cur) mask[static_cast<size_t>(m)] = 1;
        for (int g = 0; g < G.order(); ++g) {
            if (mask[static_cast<size_t>(g)]) continue;
            std::vector<int> seeds = cur;
            seeds.push_back(g);
            Subgroup ext = subgroup_closure(G, seeds);
            if (seen.insert(ext.members).second) {
                out.push_back(ext);
                queue.push_back(ext.members);
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("closure materializes the expected orders") {
    CHECK(sym(3).order() == 6);
    CHECK(FiniteGroup::closure({cycle(4, {0, 1, 2, 3})}).order() == 4);
    CHECK(FiniteGroup::closure({}).order() == 1);
    CHECK(dihedral(4).order() == 8);
    CHECK(dihedral(6).order() == 12);
    CHECK(quaternion8().order() == 8);
    CHECK(u3(2).order() == 8);
    CHECK(u3(3).order() == 27);
    CHECK(u3(5).order() == 125);
    CHECK(sym(4).order() == 24);
}

TEST_CASE("closure respects the order cap") {
    CHECK_THROWS_AS(FiniteGroup::closure({cycle(8, {0, 1, 2, 3, 4, 5, 6, 7})}, 5), ClosureCapExceeded);
    CHECK_THROWS_AS(FiniteGroup::closure({cycle(3, {0, 1, 2}), cycle(4, {0, 1})}),
                    std::invalid_argument);  // degrees differ
}

TEST_CASE("RFGROW_ORDER_CAP overrides the default cap") {
    CHECK(FiniteGroup::default_order_cap() == 20000);
    setenv("RFGROW_ORDER_CAP", "123", 1);
    CHECK(FiniteGroup::default_order_cap() == 123);
    unsetenv("RFGROW_ORDER_CAP");
    CHECK(FiniteGroup::default_order_cap() == 20000);
}

TEST_CASE("lower central series") {
    FiniteGroup s3 = sym(3);
    auto lcs = lower_central_series(s3);
    CHECK_FALSE(lcs.nilpotent);
    CHECK(lcs.terms.back().order() == 3);  // stabilizes at A3

    auto u = u3(2);
    auto lcs_u = lower_central_series(u);
    CHECK(lcs_u.nilpotent);
    CHECK(lcs_u.step_length == 2);

    auto ab = cyclic(12);
    auto lcs_ab = lower_central_series(ab);
    CHECK(lcs_ab.nilpotent);
    CHECK(lcs_ab.step_length == 1);
}

TEST_CASE("derived series") {
    auto d3 = derived_series(sym(3));
    CHECK(d3.solvable);
    CHECK(d3.derived_length == 2);
    REQUIRE(d3.terms.size() == 3);
    CHECK(d3.terms[1].order() == 3);  // A3
    CHECK(d3.terms[2].order() == 1);

    auto d4 = derived_series(sym(4));
    CHECK(d4.solvable);
    CHECK(d4.derived_length == 3);  // S4 > A4 > V4 > 1
    CHECK(d4.terms[1].order() == 12);
    CHECK(d4.terms[2].order() == 4);

    CHECK(derived_series(cyclic(9)).derived_length == 1);
    CHECK(is_solvable(dihedral(10)));
}

TEST_CASE("fitting subgroup: specific values") {
    FiniteGroup s3 = sym(3);
    CHECK(fitting_subgroup(s3).order() == 3);  // A3

    FiniteGroup d4 = dihedral(4);
    CHECK(fitting_subgroup(d4).order() == 8);  // nilpotent group is its own Fitting subgroup

    FiniteGroup d6 = dihedral(6);
    Subgroup f6 = fitting_subgroup(d6);
    CHECK(f6.order() == 6);  // rotation subgroup Z/6
    // it is exactly the rotations: closed under the 6-cycle
    int r = d6.index_of(cycle(6, {0, 1, 2, 3, 4, 5}));
    CHECK(f6.contains(r));

    FiniteGroup s4 = sym(4);
    Subgroup f4 = fitting_via_cores(s4);
    CHECK(f4.order() == 4);  // V4
    CHECK(fitting_subgroup(s4).order() == 4);
}

TEST_CASE("both fitting algorithms agree across the catalog") {
    for (const auto& entry : solvable_catalog()) {
        CAPTURE(entry.name);
        Subgroup a = fitting_subgroup(entry.group);
        Subgroup b = fitting_via_cores(entry.group);
        CHECK(a.members == b.members);
        CHECK(a.normal);
        CHECK(a.nilpotent);
    }
}

TEST_CASE("fitting subgroup contains every normal nilpotent subgroup (order <= 60)") {
    for (const auto& entry : solvable_catalog()) {
        if (entry.group.order() > 60) continue;
        CAPTURE(entry.name);
        Subgroup F = fitting_subgroup(entry.group);
        for (const auto& S : all_subgroups(entry.group)) {
            if (!is_normal(entry.group, S)) continue;
            if (!lower_central_series(entry.group, S).nilpotent) continue;
            for (int m : S.members) CHECK(F.contains(m));
        }
    }
}

TEST_CASE("sylow decomposition of nilpotent groups") {
    FiniteGroup z6 = cyclic(6);
    auto dec6 = sylow_decomposition_nilpotent(z6, whole_subgroup(z6));
    REQUIRE(dec6.size() == 2);
    CHECK(dec6[0].first == 2);
    CHECK(dec6[0].second.order() == 2);
    CHECK(dec6[1].first == 3);
    CHECK(dec6[1].second.order() == 3);

    FiniteGroup u = u3(2);
    auto decu = sylow_decomposition_nilpotent(u, whole_subgroup(u));
    REQUIRE(decu.size() == 1);
    CHECK(decu[0].second.order() == 8);

    FiniteGroup z12 = cyclic(12);
    auto dec12 = sylow_decomposition_nilpotent(z12, whole_subgroup(z12));
    REQUIRE(dec12.size() == 2);
    CHECK(dec12[0].second.order() == 4);
    CHECK(dec12[1].second.order() == 3);

    FiniteGroup s3 = sym(3);
    CHECK_THROWS_AS(sylow_decomposition_nilpotent(s3, whole_subgroup(s3)), std::invalid_argument);
}

TEST_CASE("quotients") {
    FiniteGroup d6 = dihedral(6);
    int r = d6.index_of(cycle(6, {0, 1, 2, 3, 4, 5}));
    int r3 = d6.index_of(d6.elements()[static_cast<size_t>(r)].power(3));
    Subgroup K = subgroup_closure(d6, {r3});
    CHECK(K.order() == 2);
    auto q = quotient(d6, K);
    CHECK(q.group.order() == 6);
    CHECK_FALSE(q.group.is_abelian());  // D6 / <r^3> = S3

    // projection is a homomorphism
    for (int a = 0; a < d6.order(); ++a)
        for (int b = 0; b < d6.order(); ++b)
            CHECK(q.projection[static_cast<size_t>(d6.mul(a, b))] ==
                  q.group.mul(q.projection[static_cast<size_t>(a)], q.projection[static_cast<size_t>(b)]));

    CHECK(quotient(d6, trivial_subgroup(d6)).group.order() == 12);
    CHECK(quotient(d6, whole_subgroup(d6)).group.order() == 1);

    FiniteGroup s4 = sym(4);
    Subgroup a4 = derived_series(s4).terms[1];
    CHECK_THROWS_AS(quotient(s4, subgroup_closure(s4, {s4.index_of(cycle(4, {0, 1}))})),
                    std::invalid_argument);
    CHECK(quotient(s4, a4).group.order() == 2);
}

TEST_CASE("reduction to p-group Fitting: D6 worked example") {
    FiniteGroup d6 = dihedral(6);
    int r = d6.index_of(cycle(6, {0, 1, 2, 3, 4, 5}));  // order 6, inside Fitt = <r>
    auto red = reduce_fitting_to_p_group(d6, r);
    CHECK(red.p == 2);                    // smallest prime of ord(r) = 6
    CHECK(red.kernel.order() == 3);       // <r^2>
    CHECK(red.quotient.order() == 4);
    CHECK(red.h_image != red.quotient.identity_index());
    CHECK(red.quotient.element_order(red.h_image) == 2);
    auto F = fitting_subgroup(red.quotient);
    auto ps = sylow_decomposition_nilpotent(red.quotient, F);
    CHECK(ps.size() == 1);
    CHECK(ps[0].first == 2);
}

TEST_CASE("reduction is trivial on p-groups") {
    FiniteGroup q8 = quaternion8();
    for (int h = 0; h < q8.order(); ++h) {
        if (h == q8.identity_index()) continue;
        auto red = reduce_fitting_to_p_group(q8, h);
        CHECK(red.p == 2);
        CHECK(red.kernel.order() == 1);
        CHECK(red.quotient.order() == 8);
    }
}

TEST_CASE("reduction succeeds on every Fitting element over the catalog") {
    for (const auto& entry : solvable_catalog()) {
        CAPTURE(entry.name);
        Subgroup F = fitting_subgroup(entry.group);
        for (int h : F.members) {
            if (h == entry.group.identity_index()) continue;
            auto red = reduce_fitting_to_p_group(entry.group, h);
            CHECK(red.h_image != red.quotient.identity_index());
            Subgroup Fq = fitting_subgroup(red.quotient);
            auto dec = sylow_decomposition_nilpotent(red.quotient, Fq);
            REQUIRE(dec.size() == 1);
            CHECK(dec[0].first == red.p);
        }
    }
}

TEST_CASE("reduction rejects bad input") {
    FiniteGroup s3 = sym(3);
    CHECK_THROWS_AS(reduce_fitting_to_p_group(s3, s3.identity_index()), std::invalid_argument);
    int transposition = s3.index_of(cycle(3, {0, 1}));
    CHECK_THROWS_AS(reduce_fitting_to_p_group(s3, transposition), std::invalid_argument);
}

TEST_CASE("p-group order bound holds across the p-group catalog") {
    for (const auto& entry : pgroup_catalog()) {
        CAPTURE(entry.name);
        auto r = pgroup_order_bound_check(entry.group);
        CHECK(r.holds);
    }
    // tightness witness: U3(Z/2) has p = 2, c = 2, order exactly 2^3
    auto tight = pgroup_order_bound_check(u3(2));
    CHECK(tight.p == 2);
    CHECK(tight.step_length == 2);
    CHECK(tight.bound == 8);
    CHECK(BigInt(u3(2).order()) == tight.bound);

    auto z4 = pgroup_order_bound_check(cyclic(4));
    CHECK(z4.step_length == 1);
    CHECK(z4.bound == 2);

    auto d4 = pgroup_order_bound_check(dihedral(4));
    CHECK(d4.step_length == 2);
    CHECK(d4.bound == 8);

    CHECK_THROWS_AS(pgroup_order_bound_check(sym(3)), std::invalid_argument);
    CHECK_THROWS_AS(pgroup_order_bound_check(cyclic(6)), std::invalid_argument);
}

TEST_CASE("witness order bound") {
    // U3(Z/3) with the central element, m = 2: 27 >= 3^3 with equality
    FiniteGroup u = u3(3);
    int z = -1;
    for (int i = 0; i < u.order(); ++i) {
        if (i == u.identity_index()) continue;
        bool central = true;
        for (int gi : u.generator_indices())
            if (u.mul(i, gi) != u.mul(gi, i)) central = false;
        if (central) {
            z = i;
            break;
        }
    }
    REQUIRE(z >= 0);
    auto r = witness_order_bound_check(u, z, 2);
    CHECK(r.p == 3);
    CHECK(r.bound == 27);
    CHECK(r.holds);
    CHECK(BigInt(u.order()) == r.bound);
    CHECK(r.fitting_step == 2);

    auto r1 = witness_order_bound_check(u, z, 1);
    CHECK(r1.bound == 3);
    CHECK(r1.holds);

    CHECK_THROWS_AS(witness_order_bound_check(u, u.identity_index(), 2), std::invalid_argument);
    FiniteGroup z6 = cyclic(6);
    CHECK_THROWS_AS(witness_order_bound_check(z6, 1, 1), std::invalid_argument);  // Fitting not a p-group
}

TEST_CASE("Lagrange: element orders divide the group order") {
    for (const auto& entry : solvable_catalog())
        for (int i = 0; i < entry.group.order(); ++i)
            CHECK(entry.group.order() % entry.group.element_order(i) == 0);
}

TEST_CASE("perm literals parse and format") {
    Perm p = parse_perm("(0 1 2)", 5);
    CHECK(p.order() == 3);
    CHECK(format_perm(p) == "(0 1 2)");
    auto list = parse_perm_list("(0 1 2);(0 1)");
    REQUIRE(list.size() == 2);
    CHECK(FiniteGroup::closure(list).order() == 6);
    CHECK(format_perm(Perm(4)) == "()");
}
