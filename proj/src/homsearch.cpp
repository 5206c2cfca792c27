#include "rfgrow/homsearch.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rfgrow {

PowerWord to_power_word(const Presentation& pres, const Word& w) {
    PowerWord out;
    for (const auto& t : w) {
        int idx = -1;
        for (size_t i = 0; i < pres.generators.size(); ++i)
            if (pres.generators[i] == t.gen) {
                idx = static_cast<int>(i);
                break;
            }
        if (idx < 0) throw std::invalid_argument("word uses a generator not in the presentation: " + t.gen);
        out.terms.push_back({idx, t.exp});
    }
    return out;
}

Perm evaluate_power_word(const PowerWord& w, const std::vector<Perm>& images, int degree) {
    Perm acc(degree);
    for (const auto& [gi, exp] : w.terms) {
        const Perm& base = images[static_cast<size_t>(gi)];
        int64_t ord = base.order();
        int64_t e = (exp % ord).convert_to<int64_t>();
        acc = acc * base.power(e);
    }
    return acc;
}

namespace {

int64_t factorial(int n) {
    int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Permutations of degree <= 8 packed one image byte per point; the scan's hot
// path composes and closes these without allocating.
using Packed = uint64_t;
constexpr int kMaxScanDegree = 8;

Packed packed_identity(int d) {
    Packed p = 0;
    for (int i = 0; i < d; ++i) p |= static_cast<Packed>(i) << (8 * i);
    return p;
}

Packed pack(const Perm& perm) {
    Packed p = 0;
    for (int i = 0; i < perm.degree(); ++i) p |= static_cast<Packed>(perm.img[static_cast<size_t>(i)]) << (8 * i);
    return p;
}

Perm unpack(Packed p, int d) {
    Perm out(d);
    for (int i = 0; i < d; ++i) out.img[static_cast<size_t>(i)] = static_cast<uint16_t>((p >> (8 * i)) & 0xFF);
    return out;
}

inline Packed packed_mul(Packed a, Packed b, int d) {
    Packed r = 0;
    for (int i = 0; i < d; ++i) {
        unsigned ai = (a >> (8 * i)) & 0xFF;
        r |= ((b >> (8 * ai)) & 0xFF) << (8 * i);
    }
    return r;
}

int packed_order(Packed p, int d) {
    int ord = 1;
    unsigned seen = 0;
    for (int i = 0; i < d; ++i) {
        if (seen & (1u << i)) continue;
        int len = 0;
        unsigned j = static_cast<unsigned>(i);
        while (!(seen & (1u << j))) {
            seen |= 1u << j;
            j = (p >> (8 * j)) & 0xFF;
            ++len;
        }
        ord = static_cast<int>(std::lcm(ord, len));
    }
    return ord;
}

inline Packed packed_pow(Packed base, int64_t e, int d) {
    int ord = packed_order(base, d);
    e %= ord;
    if (e < 0) e += ord;
    Packed acc = packed_identity(d);
    while (e > 0) {
        if (e & 1) acc = packed_mul(acc, base, d);
        base = packed_mul(base, base, d);
        e >>= 1;
    }
    return acc;
}

struct PackedWord {
    std::vector<std::pair<int, BigInt>> terms;
    // exponents that fit an int64 are pre-narrowed; huge ones reduce per image
    std::vector<std::pair<int, int64_t>> small;
    bool all_small = true;
};

PackedWord precompile(const PowerWord& w) {
    PackedWord out;
    out.terms = w.terms;
    for (const auto& [gi, exp] : w.terms) {
        if (exp >= std::numeric_limits<int64_t>::min() && exp <= std::numeric_limits<int64_t>::max()) {
            out.small.push_back({gi, exp.convert_to<int64_t>()});
        } else {
            out.all_small = false;
            break;
        }
    }
    return out;
}

inline Packed eval_packed(const PackedWord& w, const Packed* images, int d) {
    Packed acc = packed_identity(d);
    if (w.all_small) {
        for (const auto& [gi, e] : w.small) acc = packed_mul(acc, packed_pow(images[gi], e, d), d);
        return acc;
    }
    for (const auto& [gi, exp] : w.terms) {
        int ord = packed_order(images[gi], d);
        int64_t e = (exp % ord).convert_to<int64_t>();
        acc = packed_mul(acc, packed_pow(images[gi], e, d), d);
    }
    return acc;
}

// closed set size, or -1 once it would exceed cap; cap stays small (<= the
// order bound), so a flat array beats hashing
inline int64_t packed_order_capped(const Packed* gens, int ngens, int d, int64_t cap,
                                   std::vector<Packed>& scratch) {
    scratch.clear();
    scratch.push_back(packed_identity(d));
    for (size_t next = 0; next < scratch.size(); ++next) {
        for (int g = 0; g < ngens; ++g) {
            Packed prod = packed_mul(scratch[next], gens[g], d);
            bool known = false;
            for (Packed q : scratch)
                if (q == prod) {
                    known = true;
                    break;
                }
            if (known) continue;
            if (static_cast<int64_t>(scratch.size()) >= cap) return -1;
            scratch.push_back(prod);
        }
    }
    return static_cast<int64_t>(scratch.size());
}

void unrank_into(int64_t rank, int degree, Packed& out) {
    uint8_t pool[kMaxScanDegree];
    for (int i = 0; i < degree; ++i) pool[i] = static_cast<uint8_t>(i);
    out = 0;
    for (int i = 0; i < degree; ++i) {
        int64_t f = factorial(degree - 1 - i);
        int64_t idx = rank / f;
        rank %= f;
        out |= static_cast<Packed>(pool[idx]) << (8 * i);
        for (int j = static_cast<int>(idx); j < degree - 1 - i; ++j) pool[j] = pool[j + 1];
    }
}

struct Best {
    int64_t order = -1, degree = 0, rep = 0, rank = 0;
    std::vector<Perm> images;
    bool better_than(const Best& o) const {
        if (o.order < 0) return true;
        auto key = std::tie(order, degree, rep, rank);
        auto okey = std::tie(o.order, o.degree, o.rep, o.rank);
        return key < okey;
    }
};

}  // namespace

ScanResult scan_quotients(const ScanRequest& req) {
    const int ngens = static_cast<int>(req.pres.generators.size());
    if (ngens < 1) throw std::invalid_argument("scan needs at least one generator");
    if (ngens > kMaxScanDegree) throw std::invalid_argument("scan supports at most 8 generators");
    if (req.max_degree > kMaxScanDegree)
        throw std::invalid_argument("scan supports image degree <= 8");
    const int64_t cap = req.order_cap > 0 ? req.order_cap : req.max_degree;

    ScanResult result;
    result.best.resize(req.targets.size());
    result.survivors.assign(req.targets.size(), 0);
    result.covered = std::min<int64_t>(req.max_degree, cap);

    std::vector<PackedWord> targets;
    for (const auto& t : req.targets) targets.push_back(precompile(t));

    // bucket relators by the highest generator they mention, so each is
    // checked as soon as its generators are fixed; with commuting relators up
    // front this prunes almost the whole tuple space before the last level
    std::vector<std::vector<PackedWord>> buckets(static_cast<size_t>(ngens));
    for (const auto& rel : req.pres.relators) {
        PowerWord pw = to_power_word(req.pres, rel);
        int maxgen = 0;
        for (const auto& [gi, exp] : pw.terms) maxgen = std::max(maxgen, gi);
        buckets[static_cast<size_t>(maxgen)].push_back(precompile(pw));
    }

    std::vector<Best> global_best(req.targets.size());
    int64_t total_checked = 0;

    struct Prefix {
        int64_t rep = 0, rank = 0;
        std::array<Packed, kMaxScanDegree> imgs{};
    };

    for (int d = 2; d <= req.max_degree; ++d) {
        auto parts = partitions_of(d);
        std::vector<Packed> reps;
        for (const auto& part : parts) reps.push_back(pack(perm_from_cycle_type(part, d)));
        const int64_t fact = factorial(d);
        {
            int64_t ranks = 1;
            for (int i = 1; i < ngens; ++i) {
                if (ranks > (int64_t(1) << 62) / fact)
                    throw std::invalid_argument("search space too large for this degree/generator count");
                ranks *= fact;
            }
        }
        const Packed id = packed_identity(d);

        // survivors over generators 0..ngens-2, serial (cheap relative to the
        // last level); rank accumulates the same encoding the flat loop used
        std::vector<Prefix> prefixes;
        for (size_t rep_idx = 0; rep_idx < reps.size(); ++rep_idx) {
            Prefix p;
            p.rep = static_cast<int64_t>(rep_idx);
            p.imgs[0] = reps[rep_idx];
            bool ok = true;
            for (const auto& rel : buckets[0])
                if (eval_packed(rel, p.imgs.data(), d) != id) ok = false;
            if (ok) prefixes.push_back(p);
        }
        int64_t stride = 1;
        for (int level = 1; level + 1 < ngens; ++level) {
            std::vector<Prefix> next;
            for (const auto& base : prefixes) {
                for (int64_t r = 0; r < fact; ++r) {
                    Prefix p = base;
                    unrank_into(r, d, p.imgs[static_cast<size_t>(level)]);
                    p.rank += r * stride;
                    bool ok = true;
                    for (const auto& rel : buckets[static_cast<size_t>(level)])
                        if (eval_packed(rel, p.imgs.data(), d) != id) ok = false;
                    if (ok) next.push_back(p);
                }
            }
            prefixes = std::move(next);
            stride *= fact;
        }

        const int last = ngens - 1;
        const int64_t last_ranks = (ngens == 1) ? 1 : fact;
        const int64_t items = static_cast<int64_t>(prefixes.size()) * last_ranks;

        int nthreads = 1;
#ifdef _OPENMP
        nthreads = req.parallel ? omp_get_max_threads() : 1;
#endif
        std::vector<std::vector<Best>> thread_best(static_cast<size_t>(nthreads),
                                                   std::vector<Best>(req.targets.size()));
        std::vector<int64_t> thread_checked(static_cast<size_t>(nthreads), 0);
        std::vector<std::vector<int64_t>> thread_survivors(static_cast<size_t>(nthreads),
                                                           std::vector<int64_t>(req.targets.size(), 0));

#ifdef _OPENMP
#pragma omp parallel if (req.parallel)
#endif
        {
            int tid = 0;
#ifdef _OPENMP
            tid = omp_get_thread_num();
#endif
            Packed images[kMaxScanDegree];
            std::vector<Packed> closure_scratch;
            closure_scratch.reserve(static_cast<size_t>(cap) + 1);
            auto& my_best = thread_best[static_cast<size_t>(tid)];
            auto& my_survivors = thread_survivors[static_cast<size_t>(tid)];
            int64_t my_checked = 0;

#ifdef _OPENMP
#pragma omp for schedule(dynamic, 1024)
#endif
            for (int64_t item = 0; item < items; ++item) {
                const Prefix& base = prefixes[static_cast<size_t>(item / last_ranks)];
                const int64_t rl = item % last_ranks;
                for (int gi = 0; gi < last; ++gi) images[gi] = base.imgs[static_cast<size_t>(gi)];
                if (ngens > 1) unrank_into(rl, d, images[last]);
                else images[0] = base.imgs[0];
                const int64_t rank = base.rank + (ngens > 1 ? rl * stride : 0);

                bool ok = true;
                for (const auto& rel : buckets[static_cast<size_t>(last)]) {
                    if (ngens == 1) break;  // already checked in the prefix pass
                    if (eval_packed(rel, images, d) != id) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;

                int64_t order = packed_order_capped(images, ngens, d, cap + 1, closure_scratch);
                if (order < 0 || order > cap) continue;
                ++my_checked;

                for (size_t t = 0; t < targets.size(); ++t) {
                    if (eval_packed(targets[t], images, d) == id) continue;
                    ++my_survivors[t];
                    Best cand;
                    cand.order = order;
                    cand.degree = d;
                    cand.rep = base.rep;
                    cand.rank = rank;
                    if (cand.better_than(my_best[t])) {
                        for (int gi = 0; gi < ngens; ++gi) cand.images.push_back(unpack(images[gi], d));
                        my_best[t] = std::move(cand);
                    }
                }
            }
            thread_checked[static_cast<size_t>(tid)] = my_checked;
        }

        for (int tt = 0; tt < nthreads; ++tt) {
            total_checked += thread_checked[static_cast<size_t>(tt)];
            for (size_t t = 0; t < req.targets.size(); ++t) {
                result.survivors[t] += thread_survivors[static_cast<size_t>(tt)][t];
                if (thread_best[static_cast<size_t>(tt)][t].order >= 0 &&
                    thread_best[static_cast<size_t>(tt)][t].better_than(global_best[t]))
                    global_best[t] = std::move(thread_best[static_cast<size_t>(tt)][t]);
            }
        }
    }

    result.images_checked = total_checked;
    for (size_t t = 0; t < req.targets.size(); ++t) {
        if (global_best[t].order >= 0) {
            QuotientHit hit;
            hit.order = global_best[t].order;
            hit.degree = static_cast<int>(global_best[t].degree);
            hit.images = std::move(global_best[t].images);
            hit.rep = global_best[t].rep;
            hit.rank = global_best[t].rank;
            result.best[t] = std::move(hit);
        }
    }
    return result;
}

HomSearchOutcome hom_search(const Group& G, const Word& target, int max_degree, bool parallel) {
    auto meta = G.metadata();
    if (!meta.presentation)
        throw std::invalid_argument("hom_search: no finite presentation shipped for " + G.spec_string());
    ScanRequest req;
    req.pres = *meta.presentation;
    req.targets.push_back(to_power_word(req.pres, target));
    req.max_degree = max_degree;
    req.order_cap = max_degree;
    req.parallel = parallel;
    ScanResult res = scan_quotients(req);
    HomSearchOutcome out;
    out.witness = res.best[0];
    out.covered = res.covered;
    out.images_checked = res.images_checked;
    return out;
}

}  // namespace rfgrow
