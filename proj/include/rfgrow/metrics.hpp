#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rfgrow/group.hpp"

namespace rfgrow {

// Exact word lengths from breadth-first search over the Cayley graph with the
// symmetrized canonical generating set. Levels are sorted into a canonical
// order, so the table (including parents and witness words) is identical for
// the serial and the parallel kernel at any thread count.
struct BallTable {
    int radius = 0;
    bool complete = true;
    std::string stop_reason = "radius";  // "radius" | "node_cap"

    std::vector<Element> elements;  // discovery order; elements[0] = identity
    std::vector<int> length;
    std::vector<int> parent;   // index into elements, -1 for the identity
    std::vector<int> via_gen;  // symmetrized generator index used from parent
    std::unordered_map<Element, int, ElementHash> index;

    std::vector<int64_t> counts;  // counts[r] = |B(r)|, cumulative

    int find(const Element& g) const {
        auto it = index.find(g);
        return it == index.end() ? -1 : it->second;
    }
    Word witness_word(const Group& G, int idx) const;
};

// Symmetrized generators: g0, g0^-1, g1, g1^-1, ...
std::vector<Element> symmetrized_generators(const Group& G);
std::vector<std::string> symmetrized_names(const Group& G);

inline constexpr int64_t kDefaultNodeCap = 4'000'000;

BallTable ball(const Group& G, int radius, int64_t node_cap = kDefaultNodeCap);
BallTable ball_serial(const Group& G, int radius, int64_t node_cap = kDefaultNodeCap);

std::optional<int> word_length_exact(const Group& G, const Element& g, int radius_cap,
                                     int64_t node_cap = kDefaultNodeCap);

struct LengthInterval {
    BigInt lower = 0;
    BigInt upper = 0;
    std::optional<Word> upper_witness;  // evaluates to the element, length == upper
    std::string lower_reason;
};

// Certified two-sided bounds for the word length of g. The upper bound comes
// from the family's digit-expansion word, the lower bound from coordinate
// growth (trivial for non-powers; see power_length_bounds for x^k).
LengthInterval word_length_bounds(const Group& G, const Element& g);

// Interval for x^k: lower = ceil(log_{|S|+1}(|k|+1)) since distinct powers of
// an infinite-order element are distinct elements of the ball.
LengthInterval power_length_bounds(const Group& G, const Element& x, const BigInt& k);

enum class DistortionVerdict { Undistorted, Polynomial, AtLeastExponential, Inconclusive };
std::string to_string(DistortionVerdict v);

struct DistortionSample {
    BigInt k;
    LengthInterval len;
    bool exact = false;
};

struct DistortionProfile {
    Element base;
    std::vector<DistortionSample> samples;  // exponents strictly increasing
    DistortionVerdict verdict = DistortionVerdict::Inconclusive;
    // fitted for f(n) = 2^n when at-least-exponential:
    //   c1 * k <= 2^upper(k)  and  2^lower(k) <= c2 * k  for every sample
    double c1 = 0.0, c2 = 0.0;
    int poly_degree = 0;  // when Polynomial: ||x^k|| ~ k^(1/poly_degree)
    double r2_exp = 0.0, r2_loglog = 0.0, loglog_slope = 0.0;
};

// Default schedule: BFS-exact small exponents plus powers of two up to 2^62.
std::vector<BigInt> default_distortion_schedule();

DistortionProfile distortion_profile(const Group& G, const Element& x,
                                     std::vector<BigInt> schedule = {}, int bfs_radius = 8);

// True iff the profile's classification matches the requested distortion class
// (f(n) = 2^n) and each sample satisfies the fitted two-sided bound.
bool check_strict_distortion(const DistortionProfile& profile,
                             DistortionVerdict f_class = DistortionVerdict::AtLeastExponential);

std::string profile_csv(const DistortionProfile& profile);  // k,lower,upper,witness_len

}  // namespace rfgrow
