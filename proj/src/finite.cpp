#include "rfgrow/finite.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace rfgrow {

int64_t FiniteGroup::default_order_cap() {
    if (const char* env = std::getenv("RFGROW_ORDER_CAP")) {
        int64_t v = std::atoll(env);
        if (v > 0) return v;
    }
    return 20000;
}

FiniteGroup FiniteGroup::closure(std::vector<Perm> gens, int64_t order_cap) {
    if (order_cap <= 0) order_cap = default_order_cap();
    FiniteGroup G;
    G.degree_ = gens.empty() ? 1 : gens[0].degree();
    for (const auto& g : gens)
        if (g.degree() != G.degree_) throw std::invalid_argument("generator degrees differ");
    G.gens_ = std::move(gens);

    Perm id(G.degree_);
    G.elements_.push_back(id);
    G.index_.emplace(id, 0);
    for (size_t next = 0; next < G.elements_.size(); ++next) {
        for (const auto& g : G.gens_) {
            Perm prod = G.elements_[next] * g;
            if (G.index_.count(prod)) continue;
            if (static_cast<int64_t>(G.elements_.size()) >= order_cap) throw ClosureCapExceeded(order_cap);
            G.index_.emplace(prod, static_cast<int>(G.elements_.size()));
            G.elements_.push_back(std::move(prod));
        }
    }
    G.id_idx_ = 0;
    G.inv_.resize(G.elements_.size());
    G.orders_.resize(G.elements_.size());
    for (size_t i = 0; i < G.elements_.size(); ++i) {
        G.inv_[i] = G.index_.at(G.elements_[i].inverse());
        G.orders_[i] = G.elements_[i].order();
    }
    for (const auto& g : G.gens_) G.gen_idx_.push_back(G.index_.at(g));
    return G;
}

bool FiniteGroup::is_abelian() const {
    for (size_t i = 0; i < gens_.size(); ++i)
        for (size_t j = i + 1; j < gens_.size(); ++j)
            if (!(gens_[i] * gens_[j] == gens_[j] * gens_[i])) return false;
    return true;
}

namespace {

Subgroup make_subgroup(const FiniteGroup& G, std::vector<int> members, std::vector<int> gens) {
    Subgroup S;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    S.mask.assign(static_cast<size_t>(G.order()), 0);
    for (int m : members) S.mask[static_cast<size_t>(m)] = 1;
    S.members = std::move(members);
    S.gens = std::move(gens);
    return S;
}

int commutator(const FiniteGroup& G, int a, int b) {
    return G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b));
}

}  // namespace

Subgroup whole_subgroup(const FiniteGroup& G) {
    std::vector<int> all(static_cast<size_t>(G.order()));
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> gens = G.generator_indices();
    if (gens.empty()) gens.push_back(G.identity_index());
    return make_subgroup(G, std::move(all), std::move(gens));
}

Subgroup trivial_subgroup(const FiniteGroup& G) {
    return make_subgroup(G, {G.identity_index()}, {G.identity_index()});
}

Subgroup subgroup_closure(const FiniteGroup& G, const std::vector<int>& seeds) {
    std::vector<char> in(static_cast<size_t>(G.order()), 0);
    std::vector<int> members{G.identity_index()};
    in[static_cast<size_t>(G.identity_index())] = 1;
    std::vector<int> gens;
    for (int s : seeds) {
        if (!in[static_cast<size_t>(s)]) gens.push_back(s);
        if (!in[static_cast<size_t>(s)]) {
            in[static_cast<size_t>(s)] = 1;
            members.push_back(s);
        }
        int si = G.inv(s);
        if (!in[static_cast<size_t>(si)]) {
            in[static_cast<size_t>(si)] = 1;
            members.push_back(si);
        }
    }
    for (size_t next = 0; next < members.size(); ++next) {
        for (int s : seeds) {
            int prod = G.mul(members[next], s);
            if (!in[static_cast<size_t>(prod)]) {
                in[static_cast<size_t>(prod)] = 1;
                members.push_back(prod);
            }
        }
    }
    return make_subgroup(G, std::move(members), std::move(gens));
}

Subgroup normal_closure(const FiniteGroup& G, const std::vector<int>& seeds) {
    // conjugate seeds by everything reachable, then close under products
    std::vector<int> gens = seeds;
    std::vector<char> gen_in(static_cast<size_t>(G.order()), 0);
    for (int s : seeds) gen_in[static_cast<size_t>(s)] = 1;
    for (size_t next = 0; next < gens.size(); ++next) {
        for (int gi : G.generator_indices()) {
            int conj = G.mul(G.mul(G.inv(gi), gens[next]), gi);
            if (!gen_in[static_cast<size_t>(conj)]) {
                gen_in[static_cast<size_t>(conj)] = 1;
                gens.push_back(conj);
            }
            int conj2 = G.mul(G.mul(gi, gens[next]), G.inv(gi));
            if (!gen_in[static_cast<size_t>(conj2)]) {
                gen_in[static_cast<size_t>(conj2)] = 1;
                gens.push_back(conj2);
            }
        }
    }
    Subgroup S = subgroup_closure(G, gens);
    S.normal = true;
    return S;
}

bool is_normal(const FiniteGroup& G, const Subgroup& S) {
    for (int gi : G.generator_indices())
        for (int m : S.members)
            if (!S.contains(G.mul(G.mul(G.inv(gi), m), gi))) return false;
    return true;
}

CentralSeries lower_central_series(const FiniteGroup& G, const Subgroup& S) {
    CentralSeries out;
    out.terms.push_back(S);
    for (;;) {
        const Subgroup& cur = out.terms.back();
        std::vector<int> comms;
        for (int a : cur.members)
            for (int s : S.gens) comms.push_back(commutator(G, a, s));
        Subgroup next = subgroup_closure(G, comms);
        if (next.order() == cur.order()) break;  // stabilized without reaching 1
        out.terms.push_back(next);
        if (next.order() == 1) break;
    }
    const Subgroup& last = out.terms.back();
    out.nilpotent = (last.order() == 1);
    if (out.nilpotent) out.step_length = static_cast<int>(out.terms.size()) - 1;
    return out;
}

CentralSeries lower_central_series(const FiniteGroup& G) {
    return lower_central_series(G, whole_subgroup(G));
}

DerivedSeries derived_series(const FiniteGroup& G) {
    DerivedSeries out;
    out.terms.push_back(whole_subgroup(G));
    for (;;) {
        const Subgroup& cur = out.terms.back();
        std::vector<int> comms;
        for (int a : cur.members)
            for (int s : cur.gens) comms.push_back(commutator(G, a, s));
        Subgroup next = subgroup_closure(G, comms);
        if (next.order() == cur.order()) break;
        out.terms.push_back(next);
        if (next.order() == 1) break;
    }
    out.solvable = (out.terms.back().order() == 1);
    if (out.solvable) out.derived_length = static_cast<int>(out.terms.size()) - 1;
    return out;
}

bool is_solvable(const FiniteGroup& G) { return derived_series(G).solvable; }

bool is_nilpotent(const FiniteGroup& G) { return lower_central_series(G).nilpotent; }

Subgroup fitting_subgroup(const FiniteGroup& G) {
    if (!is_solvable(G)) throw std::invalid_argument("fitting_subgroup: input group is not solvable");
    std::vector<int> contributors;
    for (int g = 0; g < G.order(); ++g) {
        Subgroup nc = normal_closure(G, {g});
        if (lower_central_series(G, nc).nilpotent) contributors.push_back(g);
    }
    Subgroup F = subgroup_closure(G, contributors);
    F.normal = is_normal(G, F);
    auto series = lower_central_series(G, F);
    F.nilpotent = series.nilpotent;
    F.step_length = series.step_length;
    return F;
}

namespace {

std::vector<int64_t> prime_divisors(int64_t n) {
    std::vector<int64_t> ps;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

bool is_prime_power(int64_t n, int64_t p) {
    while (n % p == 0) n /= p;
    return n == 1;
}

// one Sylow p-subgroup by greedy extension over p-elements
Subgroup sylow_subgroup(const FiniteGroup& G, int64_t p) {
    std::vector<int> pelems;
    for (int i = 0; i < G.order(); ++i)
        if (i != G.identity_index() && is_prime_power(G.element_order(i), p)) pelems.push_back(i);
    int64_t target = 1;
    {
        int64_t n = G.order();
        while (n % p == 0) {
            n /= p;
            target *= p;
        }
    }
    Subgroup P = trivial_subgroup(G);
    if (pelems.empty()) return P;
    P = subgroup_closure(G, {pelems[0]});
    bool grew = true;
    while (P.order() < target && grew) {
        grew = false;
        for (int h : pelems) {
            if (P.contains(h)) continue;
            std::vector<int> seeds = P.gens;
            seeds.push_back(h);
            Subgroup T = subgroup_closure(G, seeds);
            if (is_prime_power(T.order(), p)) {
                P = T;
                grew = true;
                break;
            }
        }
    }
    return P;
}

}  // namespace

Subgroup fitting_via_cores(const FiniteGroup& G) {
    std::vector<int> gens;
    for (int64_t p : prime_divisors(G.order())) {
        Subgroup P = sylow_subgroup(G, p);
        // orbit of P under conjugation = all Sylow p-subgroups
        std::set<std::vector<int>> orbit;
        std::deque<std::vector<int>> queue;
        orbit.insert(P.members);
        queue.push_back(P.members);
        while (!queue.empty()) {
            std::vector<int> cur = std::move(queue.front());
            queue.pop_front();
            for (int gi : G.generator_indices()) {
                std::vector<int> conj;
                conj.reserve(cur.size());
                for (int m : cur) conj.push_back(G.mul(G.mul(G.inv(gi), m), gi));
                std::sort(conj.begin(), conj.end());
                if (orbit.insert(conj).second) queue.push_back(conj);
            }
        }
        // O_p = intersection of the orbit
        std::vector<char> core(static_cast<size_t>(G.order()), 1);
        for (const auto& syl : orbit) {
            std::vector<char> in(static_cast<size_t>(G.order()), 0);
            for (int m : syl) in[static_cast<size_t>(m)] = 1;
            for (size_t i = 0; i < core.size(); ++i) core[i] = core[i] && in[i];
        }
        for (size_t i = 0; i < core.size(); ++i)
            if (core[i]) gens.push_back(static_cast<int>(i));
    }
    Subgroup F = subgroup_closure(G, gens);
    F.normal = is_normal(G, F);
    auto series = lower_central_series(G, F);
    F.nilpotent = series.nilpotent;
    F.step_length = series.step_length;
    return F;
}

std::vector<std::pair<int64_t, Subgroup>> sylow_decomposition_nilpotent(const FiniteGroup& G,
                                                                        const Subgroup& N) {
    std::vector<std::pair<int64_t, Subgroup>> out;
    if (N.order() == 1) return out;
    int64_t check = 1;
    for (int64_t p : prime_divisors(N.order())) {
        std::vector<int> part;
        for (int m : N.members)
            if (is_prime_power(G.element_order(m), p)) part.push_back(m);
        Subgroup Q = subgroup_closure(G, part);
        for (int m : Q.members)
            if (!N.contains(m)) throw std::invalid_argument("sylow decomposition: p-part not a subgroup (input not nilpotent?)");
        check *= Q.order();
        out.push_back({p, std::move(Q)});
    }
    if (check != N.order())
        throw std::invalid_argument("sylow decomposition: factor orders do not multiply up (input not nilpotent)");
    return out;
}

QuotientResult quotient(const FiniteGroup& G, const Subgroup& K) {
    if (!is_normal(G, K)) throw std::invalid_argument("quotient: subgroup is not normal");
    int64_t n = G.order();
    // cosets Kx, numbered in order of discovery; G acts by right multiplication,
    // which composes covariantly with the apply-left-factor-first convention
    std::vector<int> coset_of(static_cast<size_t>(n), -1);
    std::vector<int> reps;
    for (int i = 0; i < n; ++i) {
        if (coset_of[static_cast<size_t>(i)] >= 0) continue;
        int c = static_cast<int>(reps.size());
        reps.push_back(i);
        for (int m : K.members) coset_of[static_cast<size_t>(G.mul(m, i))] = c;
    }
    int ncosets = static_cast<int>(reps.size());

    auto action = [&](int g) {
        Perm p(ncosets);
        for (int c = 0; c < ncosets; ++c)
            p.img[static_cast<size_t>(c)] = static_cast<uint16_t>(coset_of[static_cast<size_t>(G.mul(reps[static_cast<size_t>(c)], g))]);
        return p;
    };

    std::vector<Perm> qgens;
    for (int gi : G.generator_indices()) qgens.push_back(action(gi));
    QuotientResult out{FiniteGroup::closure(std::move(qgens), G.order() + 1), {}};
    out.projection.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int idx = out.group.index_of(action(i));
        if (idx < 0) throw std::logic_error("quotient: projection fell outside the closure");
        out.projection[static_cast<size_t>(i)] = idx;
    }
    return out;
}

PFittingReduction reduce_fitting_to_p_group(const FiniteGroup& G, int h) {
    if (h == G.identity_index()) throw std::invalid_argument("reduction: element is trivial");
    {
        Subgroup F = fitting_subgroup(G);
        if (!F.contains(h)) throw std::invalid_argument("reduction: element is not in the Fitting subgroup");
    }

    FiniteGroup cur = G;
    std::vector<int> proj(static_cast<size_t>(G.order()));
    std::iota(proj.begin(), proj.end(), 0);
    int hcur = h;

    for (;;) {
        Subgroup F = fitting_subgroup(cur);
        auto factors = sylow_decomposition_nilpotent(cur, F);
        if (factors.size() <= 1) {
            PFittingReduction out;
            out.p = factors.empty() ? 0 : factors[0].first;
            out.quotient = std::move(cur);
            out.projection = std::move(proj);
            out.h_image = hcur;
            std::vector<int> kernel_members;
            for (size_t i = 0; i < out.projection.size(); ++i)
                if (out.projection[i] == out.quotient.identity_index()) kernel_members.push_back(static_cast<int>(i));
            out.kernel = make_subgroup(G, std::move(kernel_members), {});
            out.kernel.normal = true;
            return out;
        }
        if (!F.contains(hcur)) throw std::logic_error("reduction: image left the Fitting subgroup");
        // component with a nontrivial h-part, smallest prime first
        int64_t hord = cur.element_order(hcur);
        int64_t q = 0;
        for (const auto& [prime, comp] : factors) {
            if (hord % prime == 0) {
                q = prime;
                break;
            }
        }
        if (q == 0) throw std::logic_error("reduction: element order coprime to its Fitting support");
        // K = product of the other Sylow factors of F
        std::vector<int> kgens;
        for (const auto& [prime, comp] : factors)
            if (prime != q) kgens.insert(kgens.end(), comp.members.begin(), comp.members.end());
        Subgroup K = subgroup_closure(cur, kgens);
        K.normal = true;
        auto qr = quotient(cur, K);
        for (auto& v : proj) v = qr.projection[static_cast<size_t>(v)];
        hcur = qr.projection[static_cast<size_t>(hcur)];
        if (hcur == qr.group.identity_index()) throw std::logic_error("reduction: element died in the quotient");
        cur = std::move(qr.group);
    }
}

PGroupOrderBound pgroup_order_bound_check(const FiniteGroup& Q) {
    if (Q.order() < 2) throw std::invalid_argument("order bound check: trivial group has no prime");
    auto ps = prime_divisors(Q.order());
    if (ps.size() != 1) throw std::invalid_argument("order bound check: input is not a p-group");
    PGroupOrderBound r;
    r.p = ps[0];
    auto series = lower_central_series(Q);
    r.step_length = series.step_length;  // p-groups are nilpotent
    r.bound = (r.step_length > 1) ? bigint_pow(r.p, r.step_length + 1) : BigInt(r.p);
    r.holds = BigInt(Q.order()) >= r.bound;
    return r;
}

WitnessOrderBound witness_order_bound_check(const FiniteGroup& H, int x_img, int m) {
    if (x_img == H.identity_index()) throw std::invalid_argument("witness bound: image is trivial");
    Subgroup F = fitting_subgroup(H);
    auto ps = prime_divisors(F.order());
    if (ps.size() != 1)
        throw std::invalid_argument("witness bound: Fitting subgroup is not a p-group (reduce first)");
    WitnessOrderBound r;
    r.p = ps[0];
    r.m = m;
    r.fitting_step = F.step_length;
    r.bound = (m > 1) ? bigint_pow(r.p, m + 1) : BigInt(r.p);
    r.holds = BigInt(H.order()) >= r.bound;
    return r;
}

}  // namespace rfgrow
