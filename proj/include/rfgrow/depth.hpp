#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfgrow/finite.hpp"
#include "rfgrow/group.hpp"
#include "rfgrow/homsearch.hpp"
#include "rfgrow/metrics.hpp"
#include "rfgrow/numtheory.hpp"

namespace rfgrow {

// Thrown when an operation's group-theoretic hypotheses fail (e.g. a
// virtually nilpotent family); the CLI maps this to exit code 1.
class HypothesisRefusal : public std::runtime_error {
public:
    explicit HypothesisRefusal(const std::string& reason) : std::runtime_error(reason) {}
};

struct WitnessCertificate {
    std::string description;  // how the finite quotient was produced
    int64_t order = 0;
    int degree = 0;
    std::vector<Perm> generator_images;
    std::string target_image;  // formatted, non-identity
};

struct ArithmeticCertificate {
    WitnessExponent exponent;
    std::string base_desc;
    BigInt bound;  // p_i when m = 1, p_i^(m+1) when m > 1
};

struct DepthInterval {
    int64_t lower = 2;
    std::optional<int64_t> upper;
    bool exact = false;
    std::vector<std::string> lower_certificates;
    std::optional<ArithmeticCertificate> arithmetic;
    std::optional<WitnessCertificate> witness;
};

struct DepthBudget {
    int max_degree = 7;        // exhaustive search over quotient orders <= this
    int64_t congruence_nmax = 512;
    int64_t order_cap = 0;     // 0 = FiniteGroup::default_order_cap()
    bool parallel = true;
};

// Standard finite quotients of the shipped families: reduce coordinates mod N
// (N coprime to the denominator prime for bs/ut3lamp) and let the stable
// letter act by its mod-N matrix. Returns the smallest quotient found in
// which x survives.
std::optional<WitnessCertificate> congruence_depth_upper(const Group& G, const Element& x,
                                                         int64_t n_max, int64_t order_cap = 0);

// Certificate that D_G(x_base^alpha_i) >= p_i (m = 1) or >= p_i^(m+1) (m > 1),
// where alpha_i = witness_exponent(i, m).value. Requires the Theorem
// hypotheses: not virtually nilpotent and x_base the declared distorted
// element of depth m; refuses otherwise.
ArithmeticCertificate arithmetic_lower_bound(const Group& G, const Element& x_base, int i, int m);

DepthInterval depth_interval(const Group& G, const Element& x, const DepthBudget& budget = {});

struct GrowthEntry {
    int radius = 0;
    int64_t lower = 2;
    std::optional<int64_t> upper;
    bool exact = false;
};
struct GrowthTable {
    std::vector<GrowthEntry> entries;  // radii 1..n_max; nondecreasing
};

// F_{G,S}(n) = max over nontrivial ball elements of their depth interval.
GrowthTable rf_growth(const Group& G, int n_max, const DepthBudget& budget = {});

// Exhaustively checks that every quotient of order < min(claim, B+1) kills
// x_base^alpha_i; a survivor is a counterexample to the divisibility argument
// and a hard failure.
struct AuditReport {
    int i = 0, m = 0;
    int64_t prime = 0;
    BigInt alpha;
    BigInt claim_bound;      // quotients of order < this must kill the power
    int64_t audited_cap = 0; // orders audited: min(claim-1, B)
    bool complete = false;   // audited_cap covers the full claimed range
    int64_t images_checked = 0;
    int64_t survivors = 0;
    std::optional<QuotientHit> survivor_example;
};
AuditReport case_audit(const Group& G, const Element& x_base, int i, int m, int max_degree,
                       bool parallel = true);

struct VerificationPoint {
    int i = 0;
    int64_t p = 0;
    BigInt alpha;
    int64_t n_lower = 0, n_upper = 0;  // certified interval for ||x^alpha||
    BigInt L;                          // certified lower bound for F at radius n_upper
    double ratio = 0;                  // L / n_upper^(m == 1 ? 1 : m+1)
};
struct VerificationReport {
    std::string group;
    int m = 1;
    DistortionVerdict distortion = DistortionVerdict::Inconclusive;
    std::vector<VerificationPoint> points;
    double min_ratio = 0;
    double floor_constant = 0;  // recorded on the first oracle run
    bool verified = false;
    std::string conclusion;
};

// Desk-scale verification of the polynomial lower bound on residual
// finiteness growth: emits (n_i, L_i) pairs with L_i <= F(n_i) and checks the
// ratio sequence stays above the recorded constant without decaying.
VerificationReport theorem_verify(const Group& G, int i_from, int i_to,
                                  const DepthBudget& budget = {});

}  // namespace rfgrow
