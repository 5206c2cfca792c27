#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rfgrow/bigint.hpp"
#include "rfgrow/perm.hpp"

namespace rfgrow {

class ClosureCapExceeded : public std::runtime_error {
public:
    explicit ClosureCapExceeded(int64_t cap)
        : std::runtime_error("finite group closure exceeded order cap " + std::to_string(cap)) {}
};

// A finite group materialized as the closed set of permutations generated by
// its generators, with cached element orders and inverses. Immutable after
// closure.
class FiniteGroup {
public:
    // 20000 unless overridden by the RFGROW_ORDER_CAP environment variable.
    static int64_t default_order_cap();

    static FiniteGroup closure(std::vector<Perm> gens, int64_t order_cap = 0);

    int degree() const { return degree_; }
    int64_t order() const { return static_cast<int64_t>(elements_.size()); }
    const std::vector<Perm>& elements() const { return elements_; }
    const std::vector<Perm>& generators() const { return gens_; }
    const std::vector<int>& generator_indices() const { return gen_idx_; }

    int index_of(const Perm& p) const {
        auto it = index_.find(p);
        return it == index_.end() ? -1 : it->second;
    }
    int mul(int a, int b) const { return index_of(elements_[static_cast<size_t>(a)] * elements_[static_cast<size_t>(b)]); }
    int inv(int a) const { return inv_[static_cast<size_t>(a)]; }
    int64_t element_order(int a) const { return orders_[static_cast<size_t>(a)]; }
    int identity_index() const { return id_idx_; }
    bool is_abelian() const;

private:
    int degree_ = 0;
    int id_idx_ = 0;
    std::vector<Perm> gens_;
    std::vector<int> gen_idx_;
    std::vector<Perm> elements_;
    std::unordered_map<Perm, int, PermHash> index_;
    std::vector<int> inv_;
    std::vector<int64_t> orders_;
};

// Subset of a FiniteGroup closed under the group operations.
struct Subgroup {
    std::vector<int> members;  // sorted element indices
    std::vector<char> mask;    // size |G|
    std::vector<int> gens;     // generating element indices
    bool normal = false;
    bool nilpotent = false;
    int step_length = 0;  // set when nilpotency was established

    int64_t order() const { return static_cast<int64_t>(members.size()); }
    bool contains(int i) const { return mask[static_cast<size_t>(i)] != 0; }
};

Subgroup whole_subgroup(const FiniteGroup& G);
Subgroup trivial_subgroup(const FiniteGroup& G);
Subgroup subgroup_closure(const FiniteGroup& G, const std::vector<int>& seeds);
Subgroup normal_closure(const FiniteGroup& G, const std::vector<int>& seeds);
bool is_normal(const FiniteGroup& G, const Subgroup& S);

// gamma_1 = S, gamma_{i+1} = [gamma_i, S] (subgroup generated by commutators
// of gamma_i members with generators of S), until stable.
struct CentralSeries {
    std::vector<Subgroup> terms;
    bool nilpotent = false;
    int step_length = 0;  // last index with gamma_c nontrivial, when nilpotent
};
CentralSeries lower_central_series(const FiniteGroup& G, const Subgroup& S);
CentralSeries lower_central_series(const FiniteGroup& G);

struct DerivedSeries {
    std::vector<Subgroup> terms;
    bool solvable = false;
    int derived_length = 0;
};
DerivedSeries derived_series(const FiniteGroup& G);
bool is_solvable(const FiniteGroup& G);
bool is_nilpotent(const FiniteGroup& G);

// Fitting subgroup via the membership criterion: g contributes iff the normal
// closure of <g> is nilpotent. Requires solvable input.
Subgroup fitting_subgroup(const FiniteGroup& G);

// Independent route: product over primes p | |G| of the p-core
// O_p(G) = intersection of all Sylow p-subgroups.
Subgroup fitting_via_cores(const FiniteGroup& G);

// For nilpotent N: the direct factors Q_p = elements of p-power order.
// Verifies the orders multiply up to |N|; throws otherwise.
std::vector<std::pair<int64_t, Subgroup>> sylow_decomposition_nilpotent(const FiniteGroup& G,
                                                                        const Subgroup& N);

struct QuotientResult {
    FiniteGroup group;
    std::vector<int> projection;  // parent element index -> quotient element index
};
QuotientResult quotient(const FiniteGroup& G, const Subgroup& K);

// Quotient H -> H/K with Fitt(H/K) a p-group and the image of h surviving.
// K is accumulated by repeatedly splitting off the Sylow factors of the
// Fitting subgroup that do not carry h.
struct PFittingReduction {
    int64_t p = 0;
    Subgroup kernel;  // in the original group
    FiniteGroup quotient;
    std::vector<int> projection;
    int h_image = 0;
};
PFittingReduction reduce_fitting_to_p_group(const FiniteGroup& G, int h);

// For a p-group Q of step length c: |Q| >= p when c <= 1, |Q| >= p^(c+1)
// when c > 1. A false report on a genuine p-group is a bug.
struct PGroupOrderBound {
    int64_t p = 0;
    int step_length = 0;
    BigInt bound = 0;
    bool holds = false;
};
PGroupOrderBound pgroup_order_bound_check(const FiniteGroup& Q);

// For a finite witness H with p-group Fitting subgroup and surviving image
// x_img of an element of declared nilpotency depth m: |H| >= p (m = 1) or
// |H| >= p^(m+1) (m > 1).
struct WitnessOrderBound {
    int64_t p = 0;
    int m = 0;
    BigInt bound = 0;
    bool holds = false;
    int fitting_step = 0;
};
WitnessOrderBound witness_order_bound_check(const FiniteGroup& H, int x_img, int m);

}  // namespace rfgrow
