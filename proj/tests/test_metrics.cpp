#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rfgrow/metrics.hpp"

using namespace rfgrow;

namespace {

// independent oracle: materialize every word of length <= cap and record the
// shortest one reaching each element
std::unordered_map<Element, int, ElementHash> word_enumeration_oracle(const Group& G, int cap) {
    std::unordered_map<Element, int, ElementHash> table;
    table[G.identity()] = 0;
    std::vector<Element> frontier{G.identity()};
    auto gens = symmetrized_generators(G);
    for (int len = 1; len <= cap; ++len) {
        std::vector<Element> next;
        for (const auto& e : frontier)
            for (const auto& g : gens) {
                Element prod = G.multiply(e, g);
                if (table.emplace(prod, len).second) next.push_back(prod);
            }
        frontier = std::move(next);
    }
    return table;
}

}  // namespace

TEST_CASE("ball radius 0 and 1") {
    auto G = Group::parse("bs:1:2");
    BallTable t0 = ball(*G, 0);
    CHECK(t0.elements.size() == 1);
    CHECK(t0.counts == std::vector<int64_t>{1});

    BallTable t1 = ball(*G, 1);
    CHECK(t1.elements.size() == 5);  // id, a, a^-1, t, t^-1
    CHECK(t1.counts == std::vector<int64_t>{1, 5});
    CHECK(t1.complete);
    CHECK(t1.stop_reason == "radius");
}

TEST_CASE("free abelian line ball") {
    auto G = Group::parse("z:1");
    BallTable t = ball(*G, 3);
    CHECK(t.counts == std::vector<int64_t>{1, 3, 5, 7});
    for (int64_t k = -3; k <= 3; ++k) {
        Element e = G->power(G->evaluate("x1"), k);
        int idx = t.find(e);
        REQUIRE(idx >= 0);
        CHECK(t.length[static_cast<size_t>(idx)] == std::abs(k));
    }
}

TEST_CASE("node cap flags an incomplete table") {
    auto G = Group::parse("bs:1:2");
    BallTable t = ball(*G, 10, 20);
    CHECK_FALSE(t.complete);
    CHECK(t.stop_reason == "node_cap");
}

TEST_CASE("exact word lengths against the word-enumeration oracle") {
    auto G = Group::parse("bs:1:2");
    auto oracle = word_enumeration_oracle(*G, 5);
    BallTable t = ball(*G, 5);
    CHECK(t.elements.size() == oracle.size());
    for (size_t i = 0; i < t.elements.size(); ++i)
        CHECK(oracle.at(t.elements[i]) == t.length[i]);

    CHECK(word_length_exact(*G, G->evaluate("a^2"), 4) == 2);  // a a beats t a t^-1
    CHECK(word_length_exact(*G, G->evaluate("a"), 4) == 1);
    CHECK_FALSE(word_length_exact(*G, G->power(G->evaluate("a"), 1000), 4).has_value());

    auto H = Group::parse("heis");
    CHECK(word_length_exact(*H, H->evaluate("x y x^-1 y^-1"), 5) == 4);
}

TEST_CASE("witness words reproduce their elements") {
    auto G = Group::parse("sol:2,1,1,1");
    BallTable t = ball(*G, 4);
    for (size_t i = 0; i < t.elements.size(); ++i) {
        Word w = t.witness_word(*G, static_cast<int>(i));
        CHECK(G->evaluate_word(w) == t.elements[i]);
        CHECK(word_length(w) == t.length[i]);
    }
}

TEST_CASE("ball symmetry and growth bound") {
    auto G = Group::parse("bs:1:2");
    BallTable t = ball(*G, 6);
    for (size_t i = 0; i < t.elements.size(); ++i) {
        int j = t.find(G->invert(t.elements[i]));
        REQUIRE(j >= 0);
        CHECK(t.length[static_cast<size_t>(j)] == t.length[i]);
    }
    for (size_t r = 1; r < t.counts.size(); ++r)
        CHECK(t.counts[r] <= 5 * t.counts[r - 1]);  // |S+|+1 = 5
}

TEST_CASE("subadditivity on random ball pairs") {
    auto G = Group::parse("bs:1:2");
    BallTable t = ball(*G, 8);
    std::mt19937 rng(4242);
    std::vector<int> small;
    for (size_t i = 0; i < t.elements.size(); ++i)
        if (t.length[i] <= 4) small.push_back(static_cast<int>(i));
    std::uniform_int_distribution<size_t> dist(0, small.size() - 1);
    for (int trial = 0; trial < 1000; ++trial) {
        int i = small[dist(rng)], j = small[dist(rng)];
        Element prod = G->multiply(t.elements[static_cast<size_t>(i)], t.elements[static_cast<size_t>(j)]);
        int idx = t.find(prod);
        REQUIRE(idx >= 0);
        CHECK(t.length[static_cast<size_t>(idx)] <=
              t.length[static_cast<size_t>(i)] + t.length[static_cast<size_t>(j)]);
    }
}

TEST_CASE("parallel and serial BFS produce identical tables") {
    for (const char* spec : {"bs:1:2", "heis", "sol:2,1,1,1"}) {
        auto G = Group::parse(spec);
        BallTable a = ball(*G, 5);
        BallTable b = ball_serial(*G, 5);
        REQUIRE(a.elements.size() == b.elements.size());
        CHECK(a.elements == b.elements);
        CHECK(a.length == b.length);
        CHECK(a.parent == b.parent);
        CHECK(a.via_gen == b.via_gen);
        CHECK(a.counts == b.counts);
    }
}

#ifdef _OPENMP
TEST_CASE("BFS tables are identical at every thread count") {
    auto G = Group::parse("bs:1:2");
    int saved = omp_get_max_threads();
    BallTable ref = ball_serial(*G, 6);
    for (int threads : {1, 2, 3, 5, 8}) {
        omp_set_num_threads(threads);
        BallTable t = ball(*G, 6);
        CHECK(t.elements == ref.elements);
        CHECK(t.length == ref.length);
        CHECK(t.parent == ref.parent);
        CHECK(t.via_gen == ref.via_gen);
    }
    omp_set_num_threads(saved);
}
#endif

TEST_CASE("bounds are consistent with exact lengths") {
    auto G = Group::parse("bs:1:2");
    BallTable t = ball(*G, 7);
    for (size_t i = 0; i < t.elements.size(); ++i) {
        LengthInterval iv = word_length_bounds(*G, t.elements[i]);
        CHECK(iv.lower <= t.length[i]);
        CHECK(BigInt(t.length[i]) <= iv.upper);
        REQUIRE(iv.upper_witness.has_value());
        CHECK(G->evaluate_word(*iv.upper_witness) == t.elements[i]);
    }
}

TEST_CASE("power interval witnesses") {
    auto G = Group::parse("bs:1:2");
    Element a = G->evaluate("a");
    LengthInterval iv8 = power_length_bounds(*G, a, 8);
    CHECK(iv8.upper <= 6);   // t^2 a^2 t^-2
    CHECK(iv8.lower >= 2);   // ceil(log_5 9)
    for (int j = 1; j <= 16; ++j)
        CHECK(power_length_bounds(*G, a, BigInt(1) << j).upper <= 2 * j + 1);

    auto U = Group::parse("ut3lamp:2");
    Element z = U->evaluate("z");
    for (int j = 1; j <= 10; ++j)
        CHECK(power_length_bounds(*U, z, bigint_pow(4, j)).upper <= 2 * j + 1);

    // exact BFS value beats the generic bounds inside the profile
    CHECK(word_length_exact(*G, G->power(a, 16), 10) <= 9);
}

TEST_CASE("distortion classification separates the families") {
    auto bs = Group::parse("bs:1:2");
    DistortionProfile pa = distortion_profile(*bs, bs->evaluate("a"));
    CHECK(pa.verdict == DistortionVerdict::AtLeastExponential);
    CHECK(pa.c1 > 0);
    CHECK(pa.c2 > 0);
    CHECK(check_strict_distortion(pa));

    auto zline = Group::parse("z:1");
    DistortionProfile pz = distortion_profile(*zline, zline->evaluate("x1"));
    CHECK(pz.verdict == DistortionVerdict::Undistorted);
    CHECK_FALSE(check_strict_distortion(pz));

    auto heis = Group::parse("heis");
    DistortionProfile ph = distortion_profile(*heis, heis->metadata().distinguished);
    CHECK(ph.verdict == DistortionVerdict::Polynomial);
    CHECK(ph.poly_degree == 2);
    CHECK_FALSE(check_strict_distortion(ph));

    auto sol = Group::parse("sol:2,1,1,1");
    DistortionProfile ps = distortion_profile(*sol, sol->evaluate("x"));
    CHECK(ps.verdict == DistortionVerdict::AtLeastExponential);
    CHECK(check_strict_distortion(ps));

    // fit-quality margins, recorded as regression guards
    CHECK(pa.r2_exp > 0.99);
    CHECK(pa.loglog_slope < 0.15);
    CHECK(pz.r2_loglog > 0.999);
    CHECK(pz.loglog_slope == doctest::Approx(1.0).epsilon(0.01));
    CHECK(pz.r2_exp < 0.5);
    CHECK(ph.loglog_slope == doctest::Approx(0.5).epsilon(0.04));
    CHECK(ph.r2_exp < 0.5);
    CHECK(ps.r2_exp >= 0.95);
    CHECK(ps.loglog_slope < 0.15);
}

TEST_CASE("proper powers inherit the exponential classification") {
    auto G = Group::parse("bs:1:2");
    Element a = G->evaluate("a");
    DistortionProfile base = distortion_profile(*G, a);
    for (int j = 2; j <= 4; ++j) {
        DistortionProfile pj = distortion_profile(*G, G->power(a, j));
        CHECK(pj.verdict == DistortionVerdict::AtLeastExponential);
        CHECK(check_strict_distortion(pj));
        // constants scale with the power, loosely
        CHECK(pj.c1 >= base.c1);
        CHECK(pj.c1 <= base.c1 * 8 * j);
    }
}

TEST_CASE("profile samples are strictly increasing and intervals ordered") {
    auto G = Group::parse("bs:1:2");
    DistortionProfile p = distortion_profile(*G, G->evaluate("a"));
    for (size_t i = 0; i < p.samples.size(); ++i) {
        if (i > 0) CHECK(p.samples[i - 1].k < p.samples[i].k);
        CHECK(p.samples[i].len.lower <= p.samples[i].len.upper);
    }
}

TEST_CASE("profile csv schema") {
    auto G = Group::parse("bs:1:2");
    DistortionProfile p = distortion_profile(*G, G->evaluate("a"), {BigInt(2), BigInt(8)});
    std::string csv = profile_csv(p);
    CHECK(csv.substr(0, 26) == "k,lower,upper,witness_len\n");
    CHECK(csv.find("\n2,") != std::string::npos);
}
