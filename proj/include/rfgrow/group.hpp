#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfgrow/bigint.hpp"

namespace rfgrow {

// Rational of the form num / base^exp with base not dividing num (unless
// num == 0, in which case exp == 0). The base is carried by the group, not
// the value, so equality is a plain tuple comparison.
struct MAdic {
    BigInt num;
    int64_t exp = 0;

    bool operator==(const MAdic&) const = default;
    bool is_integer() const { return exp <= 0; }
};

// Canonical normal form of a group element. Interpretation of the coordinate
// slots is fixed per family:
//   free-abelian(d): c = d integers
//   heisenberg:      c = (a, b, c) integers, the matrix u(a,b,c)
//   bs(1,m):         c = (q) with q in Z[1/m]; s = t-exponent
//   sol(A):          c = integer pair v; s = t-exponent
//   ut3lamp(p):      c = (x, y, z) in Z[1/p]; s = d-exponent
// Equality of normal forms is equality of elements.
struct Element {
    std::vector<MAdic> c;
    int64_t s = 0;

    bool operator==(const Element&) const = default;
};

std::strong_ordering compare(const Element& a, const Element& b);

struct ElementHash {
    std::size_t operator()(const Element& e) const;
};

struct WordTerm {
    std::string gen;
    BigInt exp = 1;
};
using Word = std::vector<WordTerm>;

// "t a t^-1 a^-2" -> terms; exponents are optional and arbitrary-precision.
Word parse_word(std::string_view text);
std::string format_word(const Word& w);
int64_t word_length(const Word& w);  // sum of |exp| (throws if any exponent exceeds int64)
Word invert_word(const Word& w);

struct Presentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;
};

enum class Family { FreeAbelian, Heisenberg, BaumslagSolitar, Sol, LampUT3 };

enum class DistortionClass { Linear, Polynomial, Exponential };

struct GroupMeta {
    std::vector<std::string> generators;
    std::optional<Presentation> presentation;
    bool virtually_nilpotent = false;
    Element distinguished;           // candidate distorted element
    std::string distinguished_desc;  // human-readable name of that element
    int nilpotent_depth = 1;         // declared depth m of the distinguished element
    DistortionClass distortion = DistortionClass::Linear;
};

class Group {
public:
    virtual ~Group() = default;

    // Spec strings: z:<d>, heis, bs:1:<m>, sol:<a>,<b>,<c>,<d>, ut3lamp:<p>.
    static std::unique_ptr<Group> parse(std::string_view spec);

    virtual Family family() const = 0;
    virtual std::string spec_string() const = 0;
    // z:d -> {d}; heis -> {}; bs -> {m}; sol -> {a,b,c,d}; ut3lamp -> {p}
    virtual std::vector<int64_t> family_parameters() const = 0;

    virtual int num_generators() const = 0;
    virtual std::string generator_name(int i) const = 0;
    int generator_index(std::string_view name) const;  // -1 if unknown

    virtual Element identity() const = 0;
    virtual Element generator(int i) const = 0;
    virtual Element multiply(const Element& a, const Element& b) const = 0;
    virtual Element invert(const Element& a) const = 0;

    // a^k in normal form. Closed-form coordinate arithmetic where the family
    // admits it (shift-free elements); square-and-multiply otherwise.
    Element power(const Element& a, const BigInt& k) const;

    Element evaluate_word(const Word& w) const;
    Element evaluate(std::string_view text) const { return evaluate_word(parse_word(text)); }

    virtual GroupMeta metadata() const = 0;

    // A word over the canonical generators that evaluates to g. Certifies an
    // upper bound on the word length; families use digit expansions along
    // their distortion mechanism so powers of distorted elements get
    // logarithmic-length words.
    virtual Word upper_bound_word(const Element& g) const = 0;

    virtual std::string format_element(const Element& g) const = 0;

protected:
    virtual std::optional<Element> power_closed_form(const Element& a, const BigInt& k) const = 0;
    void check_arity(const Element& a) const;
    virtual size_t coord_count() const = 0;
};

// Cost-optimal signed-digit expansion helpers shared by the families whose
// distortion mechanism is conjugation by a shift generator:
//   value = sum_i digit[i] * base^(i + scale0), |digit[i]| <= base.
// Cost model: sum |digit| + 2 * (top index), i.e. the length of the Horner
// word  shift^s0 g^{d0} shift g^{d1} ... shift^{-(s0+L-1)}.
std::vector<int64_t> signed_digit_expansion(const BigInt& value, int64_t base);
Word horner_word(const std::string& coord_gen, const std::string& shift_gen,
                 const std::vector<int64_t>& digits, int64_t scale0);

}  // namespace rfgrow
