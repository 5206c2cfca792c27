#include "rfgrow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rfgrow {

std::vector<Element> symmetrized_generators(const Group& G) {
    std::vector<Element> out;
    for (int i = 0; i < G.num_generators(); ++i) {
        out.push_back(G.generator(i));
        out.push_back(G.invert(G.generator(i)));
    }
    return out;
}

std::vector<std::string> symmetrized_names(const Group& G) {
    std::vector<std::string> out;
    for (int i = 0; i < G.num_generators(); ++i) {
        out.push_back(G.generator_name(i));
        out.push_back(G.generator_name(i) + "^-1");
    }
    return out;
}

Word BallTable::witness_word(const Group& G, int idx) const {
    Word w;
    while (idx > 0) {
        int g = via_gen[static_cast<size_t>(idx)];
        w.push_back({G.generator_name(g / 2), BigInt(g % 2 == 0 ? 1 : -1)});
        idx = parent[static_cast<size_t>(idx)];
    }
    std::reverse(w.begin(), w.end());
    return w;
}

namespace {

struct Candidate {
    Element elem;
    int parent;
    int gen;
};

void append_level(BallTable& t, std::vector<Candidate>& cands, int dist) {
    // canonical order: by element normal form, ties by (parent, gen)
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        auto c = compare(a.elem, b.elem);
        if (c != std::strong_ordering::equal) return c == std::strong_ordering::less;
        if (a.parent != b.parent) return a.parent < b.parent;
        return a.gen < b.gen;
    });
    for (size_t i = 0; i < cands.size(); ++i) {
        if (i > 0 && cands[i].elem == cands[i - 1].elem) continue;
        if (t.index.count(cands[i].elem)) continue;
        int id = static_cast<int>(t.elements.size());
        t.index.emplace(cands[i].elem, id);
        t.elements.push_back(std::move(cands[i].elem));
        t.length.push_back(dist);
        t.parent.push_back(cands[i].parent);
        t.via_gen.push_back(cands[i].gen);
    }
}

BallTable ball_impl(const Group& G, int radius, int64_t node_cap, bool parallel) {
    BallTable t;
    t.radius = radius;
    t.elements.push_back(G.identity());
    t.length.push_back(0);
    t.parent.push_back(-1);
    t.via_gen.push_back(-1);
    t.index.emplace(G.identity(), 0);
    t.counts.push_back(1);

    auto gens = symmetrized_generators(G);
    size_t level_begin = 0, level_end = 1;

    for (int dist = 1; dist <= radius; ++dist) {
        if (static_cast<int64_t>(t.elements.size()) >= node_cap) {
            t.complete = false;
            t.stop_reason = "node_cap";
            break;
        }
        std::vector<Candidate> cands;
        if (!parallel) {
            for (size_t i = level_begin; i < level_end; ++i)
                for (size_t g = 0; g < gens.size(); ++g)
                    cands.push_back({G.multiply(t.elements[i], gens[g]), static_cast<int>(i), static_cast<int>(g)});
        } else {
            int nthreads = 1;
#ifdef _OPENMP
            nthreads = omp_get_max_threads();
#endif
            std::vector<std::vector<Candidate>> buckets(static_cast<size_t>(nthreads));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
            for (int64_t i = static_cast<int64_t>(level_begin); i < static_cast<int64_t>(level_end); ++i) {
                int tid = 0;
#ifdef _OPENMP
                tid = omp_get_thread_num();
#endif
                for (size_t g = 0; g < gens.size(); ++g)
                    buckets[static_cast<size_t>(tid)].push_back(
                        {G.multiply(t.elements[static_cast<size_t>(i)], gens[g]), static_cast<int>(i), static_cast<int>(g)});
            }
            for (auto& b : buckets)
                for (auto& c : b) cands.push_back(std::move(c));
        }
        append_level(t, cands, dist);
        level_begin = level_end;
        level_end = t.elements.size();
        t.counts.push_back(static_cast<int64_t>(t.elements.size()));
        if (level_begin == level_end) break;  // group exhausted (won't happen here)
        if (static_cast<int64_t>(t.elements.size()) > node_cap) {
            t.complete = false;
            t.stop_reason = "node_cap";
            break;
        }
    }
    return t;
}

}  // namespace

BallTable ball(const Group& G, int radius, int64_t node_cap) {
    return ball_impl(G, radius, node_cap, true);
}

BallTable ball_serial(const Group& G, int radius, int64_t node_cap) {
    return ball_impl(G, radius, node_cap, false);
}

std::optional<int> word_length_exact(const Group& G, const Element& g, int radius_cap, int64_t node_cap) {
    BallTable t = ball(G, radius_cap, node_cap);
    int idx = t.find(g);
    if (idx >= 0) return t.length[static_cast<size_t>(idx)];
    return std::nullopt;
}

LengthInterval word_length_bounds(const Group& G, const Element& g) {
    LengthInterval iv;
    Word w = G.upper_bound_word(g);
    iv.upper = 0;
    for (const auto& term : w) iv.upper += bigint_abs(term.exp);
    iv.upper_witness = std::move(w);
    if (g == G.identity()) {
        iv.lower = 0;
        iv.lower_reason = "identity";
    } else {
        // every letter changes the shift coordinate by at most one
        iv.lower = std::max<int64_t>(1, std::abs(g.s));
        iv.lower_reason = "shift coordinate";
    }
    return iv;
}

LengthInterval power_length_bounds(const Group& G, const Element& x, const BigInt& k) {
    Element g = G.power(x, k);
    LengthInterval iv = word_length_bounds(G, g);
    int base = 2 * G.num_generators() + 1;
    BigInt rank_lower = ceil_log(base, bigint_abs(k) + 1);
    if (rank_lower > iv.lower) {
        iv.lower = rank_lower;
        iv.lower_reason = "growth bound: distinct powers are distinct elements";
    }
    return iv;
}

std::string to_string(DistortionVerdict v) {
    switch (v) {
        case DistortionVerdict::Undistorted: return "undistorted";
        case DistortionVerdict::Polynomial: return "polynomial";
        case DistortionVerdict::AtLeastExponential: return "at-least-exponential";
        default: return "inconclusive";
    }
}

std::vector<BigInt> default_distortion_schedule() {
    std::vector<BigInt> ks;
    for (int k = 1; k <= 8; ++k) ks.push_back(k);
    for (int j = 4; j <= 64; j += 2) ks.push_back(BigInt(1) << j);
    return ks;
}

namespace {

struct LinFit {
    double slope = 0, intercept = 0, r2 = 0;
};

LinFit linreg(const std::vector<double>& xs, const std::vector<double>& ys) {
    LinFit f;
    size_t n = xs.size();
    if (n < 2) return f;
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy == 0) {
        f.r2 = 1.0;
    } else {
        double ssres = 0;
        for (size_t i = 0; i < n; ++i) {
            double pred = f.intercept + f.slope * xs[i];
            ssres += (ys[i] - pred) * (ys[i] - pred);
        }
        f.r2 = 1.0 - ssres / syy;
    }
    return f;
}

}  // namespace

DistortionProfile distortion_profile(const Group& G, const Element& x,
                                     std::vector<BigInt> schedule, int bfs_radius) {
    if (schedule.empty()) schedule = default_distortion_schedule();
    std::sort(schedule.begin(), schedule.end());
    schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());

    DistortionProfile p;
    p.base = x;

    BallTable t = ball(G, bfs_radius, 500'000);
    for (const auto& k : schedule) {
        DistortionSample s;
        s.k = k;
        s.len = power_length_bounds(G, x, k);
        Element g = G.power(x, k);
        int idx = t.find(g);
        if (idx >= 0) {
            // exact length from BFS; tighten both sides
            BigInt exact = t.length[static_cast<size_t>(idx)];
            s.len.lower = exact;
            s.len.upper = exact;
            s.len.upper_witness = t.witness_word(G, idx);
            s.len.lower_reason = "bfs exact";
            s.exact = true;
        }
        p.samples.push_back(std::move(s));
    }

    // Fit on the top half of the schedule.
    size_t n = p.samples.size();
    size_t half = n / 2;
    std::vector<double> lx, uy, luy;
    for (size_t i = half; i < n; ++i) {
        lx.push_back(bigint_log2(p.samples[i].k));
        double u = bigint_log2(p.samples[i].len.upper) <= 60
                       ? p.samples[i].len.upper.convert_to<double>()
                       : std::pow(2.0, bigint_log2(p.samples[i].len.upper));
        uy.push_back(u);
        luy.push_back(std::log2(std::max(1.0, u)));
    }
    LinFit fexp = linreg(lx, uy);    // upper vs log2 k
    LinFit fll = linreg(lx, luy);    // log2 upper vs log2 k
    p.r2_exp = fexp.r2;
    p.r2_loglog = fll.r2;
    p.loglog_slope = fll.slope;

    // A log-length upper bound grows subpolynomially in k: its log-log slope
    // is near zero, while genuinely polynomial growth keeps slope >= 1/d.
    const bool subpolynomial = fll.slope < 0.15;
    if (fexp.r2 >= 0.95 && fexp.slope > 0 && (subpolynomial || fexp.r2 >= fll.r2)) {
        p.verdict = DistortionVerdict::AtLeastExponential;
        // fitted constants for f(n) = 2^n:
        //   c1 = min_k 2^upper(k)/k   (so c1*k <= 2^upper(k) everywhere)
        //   c2 = max_k 2^lower(k)/k   (so 2^lower(k) <= c2*k everywhere)
        double lc1 = 1e300, lc2 = -1e300;
        for (const auto& s : p.samples) {
            double lk = bigint_log2(s.k);
            lc1 = std::min(lc1, s.len.upper.convert_to<double>() - lk);
            lc2 = std::max(lc2, s.len.lower.convert_to<double>() - lk);
        }
        p.c1 = std::pow(2.0, lc1);
        p.c2 = std::pow(2.0, lc2);
    } else if (fll.r2 >= 0.95 && fll.slope >= 0.9) {
        p.verdict = DistortionVerdict::Undistorted;
    } else if (fll.r2 >= 0.95 && fll.slope >= 0.15) {
        p.verdict = DistortionVerdict::Polynomial;
        p.poly_degree = static_cast<int>(std::lround(1.0 / fll.slope));
    } else {
        p.verdict = DistortionVerdict::Inconclusive;
    }
    return p;
}

bool check_strict_distortion(const DistortionProfile& profile, DistortionVerdict f_class) {
    if (profile.verdict != f_class) return false;
    if (f_class != DistortionVerdict::AtLeastExponential) return true;
    double lc1 = std::log2(profile.c1), lc2 = std::log2(profile.c2);
    for (const auto& s : profile.samples) {
        double lk = bigint_log2(s.k);
        // c1*k <= 2^upper and 2^lower <= c2*k, checked in log2
        if (lc1 + lk > s.len.upper.convert_to<double>() + 1e-9) return false;
        if (s.len.lower.convert_to<double>() > lc2 + lk + 1e-9) return false;
    }
    return true;
}

std::string profile_csv(const DistortionProfile& profile) {
    std::ostringstream os;
    os << "k,lower,upper,witness_len\n";
    for (const auto& s : profile.samples) {
        BigInt wl = 0;
        if (s.len.upper_witness)
            for (const auto& term : *s.len.upper_witness) wl += bigint_abs(term.exp);
        os << s.k << "," << s.len.lower << "," << s.len.upper << "," << wl << "\n";
    }
    return os.str();
}

}  // namespace rfgrow
