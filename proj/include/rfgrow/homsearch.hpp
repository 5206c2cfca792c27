#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rfgrow/group.hpp"
#include "rfgrow/perm.hpp"

namespace rfgrow {

// Word with exponents folded per term, evaluated in permutation images by
// reducing each exponent modulo the image order.
struct PowerWord {
    std::vector<std::pair<int, BigInt>> terms;  // (generator index, exponent)
};

PowerWord to_power_word(const Presentation& pres, const Word& w);
Perm evaluate_power_word(const PowerWord& w, const std::vector<Perm>& images, int degree);

struct QuotientHit {
    int64_t order = 0;
    int degree = 0;
    std::vector<Perm> images;
    // enumeration coordinates; the lexicographic minimum over
    // (order, degree, rep, rank) is thread-count independent
    int64_t rep = 0, rank = 0;
};

struct ScanRequest {
    Presentation pres;
    std::vector<PowerWord> targets;
    int max_degree = 6;      // images searched in S_2 .. S_max_degree
    int64_t order_cap = 0;   // only images of order <= cap count; 0 = max_degree
    bool parallel = true;
};

struct ScanResult {
    // per target: minimal-order image (of order <= cap) where it survives
    std::vector<std::optional<QuotientHit>> best;
    // per target: number of (image, target) pairs with a surviving target
    std::vector<int64_t> survivors;
    int64_t images_checked = 0;  // relator-satisfying images with order <= cap
    // exhaustive over all quotient orders <= this value (Cayley: a quotient of
    // order n acts regularly on n points, so degree max_degree covers order n
    // iff n <= max_degree)
    int64_t covered = 0;
};

// Enumerates generator-image tuples in S_d for d = 2..max_degree, the first
// generator restricted to one representative per cycle type (conjugating the
// whole tuple preserves relators, image order and target survival), checks
// all relators, closes the image, and records per-target minima. Output is
// deterministic regardless of thread count.
ScanResult scan_quotients(const ScanRequest& req);

struct HomSearchOutcome {
    std::optional<QuotientHit> witness;
    int64_t covered = 0;
    int64_t images_checked = 0;
};

// Minimal order of a finite image of G (over quotient orders <= max_degree)
// in which the target element survives; nullopt means every quotient of
// order <= max_degree kills the target.
HomSearchOutcome hom_search(const Group& G, const Word& target, int max_degree,
                            bool parallel = true);

}  // namespace rfgrow
