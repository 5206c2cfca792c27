#include "rfgrow/group.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rfgrow {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_100;

int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("shift exponent overflow");
    return r;
}

// ---- m-adic rational arithmetic (value = num / base^exp) ----

MAdic madic_normalize(BigInt num, int64_t exp, int64_t base) {
    if (num == 0) return {BigInt(0), 0};
    while (exp < 0) {
        num *= base;
        ++exp;
    }
    while (exp > 0 && num % base == 0) {
        num /= base;
        --exp;
    }
    return {std::move(num), exp};
}

MAdic madic_from_int(BigInt v) { return {std::move(v), 0}; }

MAdic madic_add(const MAdic& a, const MAdic& b, int64_t base) {
    int64_t e = std::max(a.exp, b.exp);
    BigInt num = a.num * bigint_pow(base, e - a.exp) + b.num * bigint_pow(base, e - b.exp);
    return madic_normalize(std::move(num), e, base);
}

MAdic madic_neg(const MAdic& a) { return {-a.num, a.exp}; }

// value * base^k
MAdic madic_shift(const MAdic& a, int64_t k, int64_t base) {
    return madic_normalize(a.num, a.exp - k, base);
}

MAdic madic_mul(const MAdic& a, const MAdic& b, int64_t base) {
    return madic_normalize(a.num * b.num, a.exp + b.exp, base);
}

MAdic madic_scale(const MAdic& a, const BigInt& k, int64_t base) {
    return madic_normalize(a.num * k, a.exp, base);
}

std::string madic_str(const MAdic& a, int64_t base) {
    std::ostringstream os;
    os << a.num;
    if (a.exp == 1) os << "/" << base;
    else if (a.exp > 1) os << "/" << base << "^" << a.exp;
    return os.str();
}

}  // namespace

std::strong_ordering compare(const Element& a, const Element& b) {
    if (a.s != b.s) return a.s < b.s ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.c.size() != b.c.size())
        return a.c.size() < b.c.size() ? std::strong_ordering::less : std::strong_ordering::greater;
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].exp != b.c[i].exp)
            return a.c[i].exp < b.c[i].exp ? std::strong_ordering::less : std::strong_ordering::greater;
        int cmp = a.c[i].num.compare(b.c[i].num);
        if (cmp != 0) return cmp < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::size_t ElementHash::operator()(const Element& e) const {
    std::size_t h = std::hash<int64_t>{}(e.s);
    for (const auto& m : e.c) {
        boost::hash_combine(h, bigint_hash(m.num));
        boost::hash_combine(h, static_cast<std::size_t>(m.exp));
    }
    return h;
}

Word parse_word(std::string_view text) {
    Word out;
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip_ws();
    while (i < text.size()) {
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '^') ++i;
        std::string name(text.substr(start, i - start));
        if (name.empty()) throw std::invalid_argument("word parse error: empty generator name");
        BigInt exp = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            size_t es = i;
            if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i == es) throw std::invalid_argument("word parse error: missing exponent after '^'");
            exp = BigInt(std::string(text.substr(es, i - es)));
        }
        out.push_back({std::move(name), std::move(exp)});
        skip_ws();
    }
    return out;
}

std::string format_word(const Word& w) {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : w) {
        if (t.exp == 0) continue;
        if (!first) os << " ";
        first = false;
        os << t.gen;
        if (t.exp != 1) os << "^" << t.exp;
    }
    return os.str();
}

int64_t word_length(const Word& w) {
    BigInt total = 0;
    for (const auto& t : w) total += bigint_abs(t.exp);
    if (total > std::numeric_limits<int64_t>::max())
        throw std::overflow_error("word length exceeds int64");
    return total.convert_to<int64_t>();
}

Word invert_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->gen, -it->exp});
    return out;
}

int Group::generator_index(std::string_view name) const {
    for (int i = 0; i < num_generators(); ++i)
        if (generator_name(i) == name) return i;
    return -1;
}

void Group::check_arity(const Element& a) const {
    if (a.c.size() != coord_count())
        throw std::invalid_argument("element does not belong to this group family");
}

Element Group::power(const Element& a, const BigInt& k) const {
    check_arity(a);
    if (k == 0) return identity();
    if (k < 0) return power(invert(a), -k);
    if (auto cf = power_closed_form(a, k)) return *cf;
    // square-and-multiply on normal forms
    Element acc = identity();
    int64_t bits = static_cast<int64_t>(msb(k));
    for (int64_t i = bits; i >= 0; --i) {
        acc = multiply(acc, acc);
        if (bit_test(k, static_cast<unsigned>(i))) acc = multiply(acc, a);
    }
    return acc;
}

Element Group::evaluate_word(const Word& w) const {
    Element acc = identity();
    for (const auto& t : w) {
        int gi = generator_index(t.gen);
        if (gi < 0) throw std::invalid_argument("unknown generator name: " + t.gen);
        acc = multiply(acc, power(generator(gi), t.exp));
    }
    return acc;
}

// ---- signed-digit expansion (shared Horner machinery) ----

std::vector<int64_t> signed_digit_expansion(const BigInt& value, int64_t base) {
    if (base < 2) throw std::invalid_argument("digit expansion needs base >= 2");
    std::vector<int64_t> digits;
    if (value == 0) return digits;
    const bool neg = value < 0;
    BigInt v = bigint_abs(value);

    // F(u) = min cost of representing u, cost = sum |digit| + 2 * top index.
    std::map<BigInt, std::pair<int64_t, int64_t>> memo;  // u -> (cost, chosen digit)
    auto search = [&](auto&& self, const BigInt& u) -> int64_t {
        if (u == 0) return 0;
        auto it = memo.find(u);
        if (it != memo.end()) return it->second.first;
        int64_t r = (u % base).convert_to<int64_t>();
        std::array<int64_t, 3> cands{};
        int ncand = 0;
        if (r == 0) {
            cands[ncand++] = 0;
            cands[ncand++] = base;
            cands[ncand++] = -base;
        } else {
            cands[ncand++] = r;
            cands[ncand++] = r - base;
        }
        int64_t best = std::numeric_limits<int64_t>::max();
        int64_t bestd = 0;
        for (int j = 0; j < ncand; ++j) {
            int64_t d = cands[j];
            BigInt nu = (u - d) / base;
            if (nu != 0 && bigint_abs(nu) >= u) continue;  // no progress
            int64_t tail = (nu == 0) ? 0 : 2 + self(self, nu);
            int64_t c = std::abs(d) + tail;
            if (c < best) {
                best = c;
                bestd = d;
            }
        }
        memo[u] = {best, bestd};
        return best;
    };
    search(search, v);

    BigInt u = v;
    while (u != 0) {
        int64_t d = memo.at(u).second;
        digits.push_back(neg ? -d : d);
        u = (u - d) / base;
    }
    return digits;
}

Word horner_word(const std::string& coord_gen, const std::string& shift_gen,
                 const std::vector<int64_t>& digits, int64_t scale0) {
    Word w;
    if (digits.empty()) return w;
    if (scale0 != 0) w.push_back({shift_gen, BigInt(scale0)});
    for (size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] != 0) w.push_back({coord_gen, BigInt(digits[i])});
        if (i + 1 < digits.size()) w.push_back({shift_gen, BigInt(1)});
    }
    int64_t top = scale0 + static_cast<int64_t>(digits.size()) - 1;
    if (top != 0) w.push_back({shift_gen, BigInt(-top)});
    return w;
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

namespace {

class FreeAbelianGroup final : public Group {
public:
    explicit FreeAbelianGroup(int d) : d_(d) {
        if (d < 1) throw std::invalid_argument("free-abelian rank must be >= 1");
        for (int i = 0; i < d; ++i) names_.push_back("x" + std::to_string(i + 1));
    }

    Family family() const override { return Family::FreeAbelian; }
    std::string spec_string() const override { return "z:" + std::to_string(d_); }
    std::vector<int64_t> family_parameters() const override { return {static_cast<int64_t>(d_)}; }
    int num_generators() const override { return d_; }
    std::string generator_name(int i) const override { return names_.at(static_cast<size_t>(i)); }
    size_t coord_count() const override { return static_cast<size_t>(d_); }

    Element identity() const override {
        Element e;
        e.c.assign(static_cast<size_t>(d_), madic_from_int(0));
        return e;
    }
    Element generator(int i) const override {
        Element e = identity();
        e.c[static_cast<size_t>(i)].num = 1;
        return e;
    }
    Element multiply(const Element& a, const Element& b) const override {
        check_arity(a);
        check_arity(b);
        Element r = a;
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i].num += b.c[i].num;
        return r;
    }
    Element invert(const Element& a) const override {
        check_arity(a);
        Element r = a;
        for (auto& m : r.c) m.num = -m.num;
        return r;
    }
    std::optional<Element> power_closed_form(const Element& a, const BigInt& k) const override {
        Element r = a;
        for (auto& m : r.c) m.num *= k;
        return r;
    }

    GroupMeta metadata() const override {
        GroupMeta meta;
        meta.generators = names_;
        Presentation pres;
        pres.generators = names_;
        for (int i = 0; i < d_; ++i)
            for (int j = i + 1; j < d_; ++j)
                pres.relators.push_back(parse_word(names_[static_cast<size_t>(i)] + " " + names_[static_cast<size_t>(j)] + " " +
                                                   names_[static_cast<size_t>(i)] + "^-1 " + names_[static_cast<size_t>(j)] + "^-1"));
        meta.presentation = std::move(pres);
        meta.virtually_nilpotent = true;
        meta.distinguished = generator(0);
        meta.distinguished_desc = names_[0];
        meta.nilpotent_depth = 1;
        meta.distortion = DistortionClass::Linear;
        return meta;
    }

    Word upper_bound_word(const Element& g) const override {
        check_arity(g);
        Word w;
        for (int i = 0; i < d_; ++i)
            if (g.c[static_cast<size_t>(i)].num != 0) w.push_back({names_[static_cast<size_t>(i)], g.c[static_cast<size_t>(i)].num});
        return w;
    }

    std::string format_element(const Element& g) const override {
        std::ostringstream os;
        os << "(";
        for (size_t i = 0; i < g.c.size(); ++i) os << (i ? ", " : "") << g.c[i].num;
        os << ")";
        return os.str();
    }

private:
    int d_;
    std::vector<std::string> names_;
};

// Discrete Heisenberg group: unitriangular u(a,b,c), generators x = u(1,0,0),
// y = u(0,1,0); the commutator [x,y] = u(0,0,1) is central.
class HeisenbergGroup final : public Group {
public:
    Family family() const override { return Family::Heisenberg; }
    std::string spec_string() const override { return "heis"; }
    std::vector<int64_t> family_parameters() const override { return {}; }
    int num_generators() const override { return 2; }
    std::string generator_name(int i) const override { return i == 0 ? "x" : "y"; }
    size_t coord_count() const override { return 3; }

    Element identity() const override { return Element{{madic_from_int(0), madic_from_int(0), madic_from_int(0)}, 0}; }
    Element generator(int i) const override {
        Element e = identity();
        e.c[static_cast<size_t>(i)].num = 1;
        return e;
    }
    Element multiply(const Element& a, const Element& b) const override {
        check_arity(a);
        check_arity(b);
        Element r = identity();
        r.c[0].num = a.c[0].num + b.c[0].num;
        r.c[1].num = a.c[1].num + b.c[1].num;
        r.c[2].num = a.c[2].num + b.c[2].num + a.c[0].num * b.c[1].num;
        return r;
    }
    Element invert(const Element& a) const override {
        check_arity(a);
        Element r = identity();
        r.c[0].num = -a.c[0].num;
        r.c[1].num = -a.c[1].num;
        r.c[2].num = -a.c[2].num + a.c[0].num * a.c[1].num;
        return r;
    }
    std::optional<Element> power_closed_form(const Element& a, const BigInt& k) const override {
        // u(a,b,c)^k = u(ka, kb, kc + C(k,2) ab)
        Element r = identity();
        r.c[0].num = k * a.c[0].num;
        r.c[1].num = k * a.c[1].num;
        r.c[2].num = k * a.c[2].num + (k * (k - 1) / 2) * a.c[0].num * a.c[1].num;
        return r;
    }

    GroupMeta metadata() const override {
        GroupMeta meta;
        meta.generators = {"x", "y"};
        Presentation pres;
        pres.generators = {"x", "y"};
        // central commutator: [x,[x,y]] = [y,[x,y]] = 1
        pres.relators.push_back(parse_word("x x y x^-1 y^-1 x^-1 y x y^-1 x^-1"));
        pres.relators.push_back(parse_word("y x y x^-1 y^-1 y^-1 y x y^-1 x^-1"));
        meta.presentation = std::move(pres);
        meta.virtually_nilpotent = true;
        Element z = identity();
        z.c[2].num = 1;
        meta.distinguished = z;
        meta.distinguished_desc = "[x,y]";
        meta.nilpotent_depth = 2;
        meta.distortion = DistortionClass::Polynomial;
        return meta;
    }

    Word upper_bound_word(const Element& g) const override {
        check_arity(g);
        Word w;
        if (g.c[0].num != 0) w.push_back({"x", g.c[0].num});
        if (g.c[1].num != 0) w.push_back({"y", g.c[1].num});
        BigInt rest = g.c[2].num - g.c[0].num * g.c[1].num;
        central_word(rest, w);
        return w;
    }

    std::string format_element(const Element& g) const override {
        std::ostringstream os;
        os << "(" << g.c[0].num << ", " << g.c[1].num << ", " << g.c[2].num << ")";
        return os.str();
    }

private:
    // word for u(0,0,e): peel off commutators [x^u, y^v] = u(0,0,uv)
    static void central_word(const BigInt& e, Word& w) {
        if (e == 0) return;
        if (e < 0) {
            Word inner;
            central_word(-e, inner);
            Word inv = invert_word(inner);
            w.insert(w.end(), inv.begin(), inv.end());
            return;
        }
        if (e <= 4) {
            for (BigInt i = 0; i < e; ++i) {
                w.push_back({"x", 1});
                w.push_back({"y", 1});
                w.push_back({"x", -1});
                w.push_back({"y", -1});
            }
            return;
        }
        BigInt u = sqrt(e);
        BigInt v = e / u;
        BigInt r = e - u * v;
        w.push_back({"x", u});
        w.push_back({"y", v});
        w.push_back({"x", -u});
        w.push_back({"y", -v});
        central_word(r, w);
    }
};

// BS(1,m) = <a, t | t a t^-1 = a^m>, elements (q, s) with q in Z[1/m]:
// (q1,s1)(q2,s2) = (q1 + m^s1 q2, s1+s2).
class BaumslagSolitarGroup final : public Group {
public:
    explicit BaumslagSolitarGroup(int64_t m) : m_(m) {
        if (m < 2) throw std::invalid_argument("bs(1,m) requires m >= 2");
    }

    Family family() const override { return Family::BaumslagSolitar; }
    std::string spec_string() const override { return "bs:1:" + std::to_string(m_); }
    std::vector<int64_t> family_parameters() const override { return {m_}; }
    int num_generators() const override { return 2; }
    std::string generator_name(int i) const override { return i == 0 ? "a" : "t"; }
    size_t coord_count() const override { return 1; }
    int64_t m() const { return m_; }

    Element identity() const override { return Element{{madic_from_int(0)}, 0}; }
    Element generator(int i) const override {
        Element e = identity();
        if (i == 0) e.c[0].num = 1;
        else e.s = 1;
        return e;
    }
    Element multiply(const Element& a, const Element& b) const override {
        check_arity(a);
        check_arity(b);
        Element r = identity();
        r.c[0] = madic_add(a.c[0], madic_shift(b.c[0], a.s, m_), m_);
        r.s = checked_add(a.s, b.s);
        return r;
    }
    Element invert(const Element& a) const override {
        check_arity(a);
        Element r = identity();
        r.c[0] = madic_neg(madic_shift(a.c[0], -a.s, m_));
        r.s = -a.s;
        return r;
    }
    std::optional<Element> power_closed_form(const Element& a, const BigInt& k) const override {
        if (a.s != 0) return std::nullopt;
        Element r = identity();
        r.c[0] = madic_scale(a.c[0], k, m_);
        return r;
    }

    GroupMeta metadata() const override {
        GroupMeta meta;
        meta.generators = {"a", "t"};
        Presentation pres;
        pres.generators = {"a", "t"};
        pres.relators.push_back(parse_word("t a t^-1 a^-" + std::to_string(m_)));
        meta.presentation = std::move(pres);
        meta.virtually_nilpotent = false;
        meta.distinguished = generator(0);
        meta.distinguished_desc = "a";
        meta.nilpotent_depth = 1;
        meta.distortion = DistortionClass::Exponential;
        return meta;
    }

    Word upper_bound_word(const Element& g) const override {
        check_arity(g);
        Word w = horner_word("a", "t", signed_digit_expansion(g.c[0].num, m_), -g.c[0].exp);
        if (g.s != 0) w.push_back({"t", BigInt(g.s)});
        return w;
    }

    std::string format_element(const Element& g) const override {
        std::ostringstream os;
        os << "(" << madic_str(g.c[0], m_) << ", " << g.s << ")";
        return os.str();
    }

private:
    int64_t m_;
};

// Z^2 x|_A Z for a hyperbolic A in GL(2,Z): (v1,s1)(v2,s2) = (v1 + A^s1 v2, s1+s2).
class SolGroup final : public Group {
public:
    explicit SolGroup(std::array<int64_t, 4> a) : a_(a) {
        det_ = a_[0] * a_[3] - a_[1] * a_[2];
        if (det_ != 1 && det_ != -1) throw std::invalid_argument("sol matrix must have determinant +-1");
        if (std::abs(a_[0] + a_[3]) < 3) throw std::invalid_argument("sol matrix must have |trace| >= 3");
    }

    Family family() const override { return Family::Sol; }
    std::string spec_string() const override {
        std::ostringstream os;
        os << "sol:" << a_[0] << "," << a_[1] << "," << a_[2] << "," << a_[3];
        return os.str();
    }
    std::vector<int64_t> family_parameters() const override { return {a_[0], a_[1], a_[2], a_[3]}; }
    int num_generators() const override { return 3; }
    std::string generator_name(int i) const override { return i == 0 ? "x" : (i == 1 ? "y" : "t"); }
    size_t coord_count() const override { return 2; }
    std::array<int64_t, 4> matrix() const { return a_; }

    Element identity() const override { return Element{{madic_from_int(0), madic_from_int(0)}, 0}; }
    Element generator(int i) const override {
        Element e = identity();
        if (i < 2) e.c[static_cast<size_t>(i)].num = 1;
        else e.s = 1;
        return e;
    }
    Element multiply(const Element& a, const Element& b) const override {
        check_arity(a);
        check_arity(b);
        auto M = mat_pow(a.s);
        Element r = identity();
        r.c[0].num = a.c[0].num + M[0] * b.c[0].num + M[1] * b.c[1].num;
        r.c[1].num = a.c[1].num + M[2] * b.c[0].num + M[3] * b.c[1].num;
        r.s = checked_add(a.s, b.s);
        return r;
    }
    Element invert(const Element& a) const override {
        check_arity(a);
        auto M = mat_pow(-a.s);
        Element r = identity();
        r.c[0].num = -(M[0] * a.c[0].num + M[1] * a.c[1].num);
        r.c[1].num = -(M[2] * a.c[0].num + M[3] * a.c[1].num);
        r.s = -a.s;
        return r;
    }
    std::optional<Element> power_closed_form(const Element& a, const BigInt& k) const override {
        if (a.s != 0) return std::nullopt;
        Element r = a;
        r.c[0].num *= k;
        r.c[1].num *= k;
        return r;
    }

    GroupMeta metadata() const override {
        GroupMeta meta;
        meta.generators = {"x", "y", "t"};
        Presentation pres;
        pres.generators = {"x", "y", "t"};
        pres.relators.push_back(parse_word("x y x^-1 y^-1"));
        pres.relators.push_back(parse_word("t x t^-1 x^-" + std::to_string(a_[0]) + " y^-" + std::to_string(a_[2])));
        pres.relators.push_back(parse_word("t y t^-1 x^-" + std::to_string(a_[1]) + " y^-" + std::to_string(a_[3])));
        meta.presentation = std::move(pres);
        meta.virtually_nilpotent = false;
        meta.distinguished = generator(0);
        meta.distinguished_desc = "x";
        meta.nilpotent_depth = 1;
        meta.distortion = DistortionClass::Exponential;
        return meta;
    }

    Word upper_bound_word(const Element& g) const override;

    std::string format_element(const Element& g) const override {
        std::ostringstream os;
        os << "((" << g.c[0].num << ", " << g.c[1].num << "), " << g.s << ")";
        return os.str();
    }

private:
    std::array<int64_t, 4> a_;
    int64_t det_;

    std::array<BigInt, 4> mat_pow(int64_t s) const {
        std::array<BigInt, 4> base;
        if (s >= 0) {
            base = {BigInt(a_[0]), BigInt(a_[1]), BigInt(a_[2]), BigInt(a_[3])};
        } else {
            // adjugate over det; det = +-1 so the inverse is integral
            base = {BigInt(det_ * a_[3]), BigInt(-det_ * a_[1]), BigInt(-det_ * a_[2]), BigInt(det_ * a_[0])};
            s = -s;
        }
        std::array<BigInt, 4> acc = {BigInt(1), BigInt(0), BigInt(0), BigInt(1)};
        while (s > 0) {
            if (s & 1) acc = mat_mul(acc, base);
            base = mat_mul(base, base);
            s >>= 1;
        }
        return acc;
    }
    static std::array<BigInt, 4> mat_mul(const std::array<BigInt, 4>& x, const std::array<BigInt, 4>& y) {
        return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
    }
};

// Greedy two-sided A-adic expansion of an integer vector: v = sum_s A^s d_s
// with digits d_s in {-1,0,1}^2. One eigendirection of A expands and the
// other contracts, so positive scales settle the expanding coordinate and
// negative scales settle the contracting one; the digit at each scale is
// chosen to minimize the dominant eigencoordinate of the remainder. The
// remainder is tracked exactly; eigencoordinates only guide digit choice.
Word SolGroup::upper_bound_word(const Element& g) const {
    check_arity(g);
    Word w;
    BigInt v0 = g.c[0].num, v1 = g.c[1].num;
    if (v0 != 0 || v1 != 0) {
        const BigFloat tr = BigFloat(a_[0] + a_[3]);
        const BigFloat disc = sqrt(tr * tr - 4 * BigFloat(det_));
        // left eigen rows scaled by 2: w_pm = (2 a21, (tr - 2 a11) +- sqrt(D))
        const BigFloat wp0 = 2 * a_[2], wp1 = (tr - 2 * a_[0]) + disc;
        const BigFloat wm0 = 2 * a_[2], wm1 = (tr - 2 * a_[0]) - disc;
        const BigFloat lam_p = (tr + disc) / 2;   // |lam_p| > 1
        const BigFloat lam_m = (tr - disc) / 2;   // |lam_m| < 1
        auto cplus = [&](const BigInt& x, const BigInt& y) { return wp0 * BigFloat(x) + wp1 * BigFloat(y); };
        auto cminus = [&](const BigInt& x, const BigInt& y) { return wm0 * BigFloat(x) + wm1 * BigFloat(y); };

        BigInt r0 = v0, r1 = v1;
        constexpr int kMaxScale = 400;
        std::vector<std::pair<int64_t, std::pair<int, int>>> digits;  // (scale, digit)

        auto run_pass = [&](bool positive) {
            auto coord = [&](const BigInt& x, const BigInt& y) {
                return positive ? cplus(x, y) : cminus(x, y);
            };
            BigFloat mag = abs(coord(r0, r1));
            if (mag < 4) return;
            // top scale: the dominant eigenvalue power comparable to the magnitude
            const BigFloat growth = positive ? abs(lam_p) : 1 / abs(lam_m);
            int64_t S = 1;
            BigFloat pw = growth;
            while (pw < mag && S < kMaxScale) {
                pw *= growth;
                ++S;
            }
            for (int64_t step = S; step >= 1; --step) {
                int64_t s = positive ? step : -step;
                auto M = mat_pow(s);
                BigFloat scale_val = positive ? pow(lam_p, static_cast<int>(step))
                                              : pow(lam_m, -static_cast<int>(step));
                BigFloat cur = coord(r0, r1);
                int best_d0 = 0, best_d1 = 0;
                BigFloat best = abs(cur);
                for (int d0 = -1; d0 <= 1; ++d0) {
                    for (int d1 = -1; d1 <= 1; ++d1) {
                        BigFloat cand = abs(cur - scale_val * (positive ? cplus(d0, d1) : cminus(d0, d1)));
                        if (cand < best) {
                            best = cand;
                            best_d0 = d0;
                            best_d1 = d1;
                        }
                    }
                }
                if (best_d0 != 0 || best_d1 != 0) {
                    r0 -= M[0] * best_d0 + M[1] * best_d1;
                    r1 -= M[2] * best_d0 + M[3] * best_d1;
                    digits.push_back({s, {best_d0, best_d1}});
                }
            }
        };
        run_pass(true);
        run_pass(false);

        // Emit a Horner walk: positive scales descending, then negative scales
        // ascending, returning to level 0. Leftover is a bounded literal.
        std::sort(digits.begin(), digits.end(), [](const auto& l, const auto& r) {
            bool lp = l.first >= 0, rp = r.first >= 0;
            if (lp != rp) return lp;              // positive block first
            return lp ? l.first > r.first : l.first < r.first;
        });
        int64_t level = 0;
        for (const auto& [s, d] : digits) {
            if (s != level) {
                w.push_back({"t", BigInt(s - level)});
                level = s;
            }
            if (d.first != 0) w.push_back({"x", BigInt(d.first)});
            if (d.second != 0) w.push_back({"y", BigInt(d.second)});
        }
        if (level != 0) w.push_back({"t", BigInt(-level)});
        if (r0 != 0) w.push_back({"x", r0});
        if (r1 != 0) w.push_back({"y", r1});
    }
    if (g.s != 0) w.push_back({"t", BigInt(g.s)});
    return w;
}

// UT3(Z[1/p]) x| Z where the stable letter d scales u(x,y,z) to u(px,py,p^2 z).
class LampUT3Group final : public Group {
public:
    explicit LampUT3Group(int64_t p) : p_(p) {
        if (p < 2) throw std::invalid_argument("ut3lamp prime must be >= 2");
        for (int64_t q = 2; q * q <= p; ++q)
            if (p % q == 0) throw std::invalid_argument("ut3lamp parameter must be prime");
    }

    Family family() const override { return Family::LampUT3; }
    std::string spec_string() const override { return "ut3lamp:" + std::to_string(p_); }
    std::vector<int64_t> family_parameters() const override { return {p_}; }
    int num_generators() const override { return 4; }
    std::string generator_name(int i) const override {
        static const char* names[] = {"x", "y", "z", "d"};
        return names[i];
    }
    size_t coord_count() const override { return 3; }
    int64_t p() const { return p_; }

    Element identity() const override {
        return Element{{madic_from_int(0), madic_from_int(0), madic_from_int(0)}, 0};
    }
    Element generator(int i) const override {
        Element e = identity();
        if (i < 3) e.c[static_cast<size_t>(i)].num = 1;
        else e.s = 1;
        return e;
    }
    Element multiply(const Element& a, const Element& b) const override {
        check_arity(a);
        check_arity(b);
        Element r = identity();
        MAdic bx = madic_shift(b.c[0], a.s, p_);
        MAdic by = madic_shift(b.c[1], a.s, p_);
        MAdic bz = madic_shift(b.c[2], 2 * a.s, p_);
        r.c[0] = madic_add(a.c[0], bx, p_);
        r.c[1] = madic_add(a.c[1], by, p_);
        r.c[2] = madic_add(madic_add(a.c[2], bz, p_), madic_mul(a.c[0], by, p_), p_);
        r.s = checked_add(a.s, b.s);
        return r;
    }
    Element invert(const Element& a) const override {
        check_arity(a);
        Element r = identity();
        r.c[0] = madic_neg(madic_shift(a.c[0], -a.s, p_));
        r.c[1] = madic_neg(madic_shift(a.c[1], -a.s, p_));
        MAdic xy = madic_mul(a.c[0], a.c[1], p_);
        r.c[2] = madic_shift(madic_add(xy, madic_neg(a.c[2]), p_), -2 * a.s, p_);
        r.s = -a.s;
        return r;
    }
    std::optional<Element> power_closed_form(const Element& a, const BigInt& k) const override {
        if (a.s != 0) return std::nullopt;
        Element r = identity();
        r.c[0] = madic_scale(a.c[0], k, p_);
        r.c[1] = madic_scale(a.c[1], k, p_);
        MAdic binom = madic_scale(madic_mul(a.c[0], a.c[1], p_), k * (k - 1) / 2, p_);
        r.c[2] = madic_add(madic_scale(a.c[2], k, p_), binom, p_);
        return r;
    }

    GroupMeta metadata() const override {
        GroupMeta meta;
        meta.generators = {"x", "y", "z", "d"};
        meta.presentation = std::nullopt;  // no finite presentation shipped
        meta.virtually_nilpotent = false;
        meta.distinguished = generator(2);
        meta.distinguished_desc = "z";
        meta.nilpotent_depth = 2;
        meta.distortion = DistortionClass::Exponential;
        return meta;
    }

    Word upper_bound_word(const Element& g) const override {
        check_arity(g);
        Word w;
        // g = X(x) Y(y) Z(z - xy) d^s; pure x-, y-, z-words keep the other
        // coordinates at zero, so the three Horner blocks compose cleanly.
        append_coord(w, "x", g.c[0], p_);
        append_coord(w, "y", g.c[1], p_);
        MAdic zc = madic_add(g.c[2], madic_neg(madic_mul(g.c[0], g.c[1], p_)), p_);
        append_coord_sq(w, "z", zc);
        if (g.s != 0) w.push_back({"d", BigInt(g.s)});
        return w;
    }

    std::string format_element(const Element& g) const override {
        std::ostringstream os;
        os << "(" << madic_str(g.c[0], p_) << ", " << madic_str(g.c[1], p_) << ", "
           << madic_str(g.c[2], p_) << ", " << g.s << ")";
        return os.str();
    }

private:
    int64_t p_;

    // base-p Horner block: d^j g d^-j = g^(p^j)
    static void append_coord(Word& w, const std::string& gen, const MAdic& val, int64_t p) {
        if (val.num == 0) return;
        Word block = horner_word(gen, "d", signed_digit_expansion(val.num, p), -val.exp);
        w.insert(w.end(), block.begin(), block.end());
    }
    // base-p^2 Horner block for the central coordinate: d z d^-1 = z^(p^2)
    void append_coord_sq(Word& w, const std::string& gen, const MAdic& val) const {
        if (val.num == 0) return;
        int64_t e2 = (val.exp + 1) / 2;
        BigInt num = val.num * bigint_pow(p_, 2 * e2 - val.exp);
        Word block = horner_word(gen, "d", signed_digit_expansion(num, p_ * p_), -e2);
        w.insert(w.end(), block.begin(), block.end());
    }
};

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

int64_t parse_int(const std::string& s) {
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("bad integer in group spec: '" + s + "'");
    return v;
}

}  // namespace

std::unique_ptr<Group> Group::parse(std::string_view spec) {
    auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    if (kind == "heis") {
        if (parts.size() != 1) throw std::invalid_argument("heis takes no parameters");
        return std::make_unique<HeisenbergGroup>();
    }
    if (kind == "z") {
        if (parts.size() != 2) throw std::invalid_argument("usage: z:<d>");
        return std::make_unique<FreeAbelianGroup>(static_cast<int>(parse_int(parts[1])));
    }
    if (kind == "bs") {
        if (parts.size() != 3) throw std::invalid_argument("usage: bs:1:<m>");
        if (parse_int(parts[1]) != 1) throw std::invalid_argument("only bs(1,m) is supported");
        return std::make_unique<BaumslagSolitarGroup>(parse_int(parts[2]));
    }
    if (kind == "sol") {
        if (parts.size() == 1) return std::make_unique<SolGroup>(std::array<int64_t, 4>{2, 1, 1, 1});
        if (parts.size() != 2) throw std::invalid_argument("usage: sol:<a>,<b>,<c>,<d>");
        auto nums = split(parts[1], ',');
        if (nums.size() != 4) throw std::invalid_argument("sol matrix needs 4 entries");
        return std::make_unique<SolGroup>(std::array<int64_t, 4>{
            parse_int(nums[0]), parse_int(nums[1]), parse_int(nums[2]), parse_int(nums[3])});
    }
    if (kind == "ut3lamp") {
        if (parts.size() != 2) throw std::invalid_argument("usage: ut3lamp:<p>");
        return std::make_unique<LampUT3Group>(parse_int(parts[1]));
    }
    throw std::invalid_argument("unknown group family: '" + kind + "'");
}

}  // namespace rfgrow
