#include "rfgrow/perm.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rfgrow {

int64_t Perm::order() const {
    std::vector<bool> seen(img.size(), false);
    int64_t ord = 1;
    for (size_t i = 0; i < img.size(); ++i) {
        if (seen[i]) continue;
        int64_t len = 0;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = img[j];
            ++len;
        }
        ord = std::lcm(ord, len);
    }
    return ord;
}

Perm Perm::power(int64_t e) const {
    int64_t n = order();
    e %= n;
    if (e < 0) e += n;
    Perm acc(degree());
    Perm base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

Perm parse_perm(std::string_view text, int degree) {
    Perm p(degree);
    size_t i = 0;
    auto skip = [&] { while (i < text.size() && (text[i] == ' ' || text[i] == ',')) ++i; };
    skip();
    while (i < text.size()) {
        if (text[i] != '(') throw std::invalid_argument("expected '(' in permutation literal");
        ++i;
        std::vector<int> cycle;
        while (i < text.size() && text[i] != ')') {
            skip();
            if (text[i] == ')') break;
            int v = 0;
            bool any = false;
            while (i < text.size() && isdigit(static_cast<unsigned char>(text[i]))) {
                v = v * 10 + (text[i] - '0');
                ++i;
                any = true;
            }
            if (!any) throw std::invalid_argument("expected point in cycle");
            cycle.push_back(v);
            skip();
        }
        if (i == text.size()) throw std::invalid_argument("unterminated cycle");
        ++i;  // ')'
        for (size_t j = 0; j < cycle.size(); ++j) {
            int from = cycle[j], to = cycle[(j + 1) % cycle.size()];
            if (from >= degree || to >= degree) throw std::invalid_argument("cycle point exceeds degree");
            p.img[static_cast<size_t>(from)] = static_cast<uint16_t>(to);
        }
        skip();
    }
    return p;
}

std::vector<Perm> parse_perm_list(std::string_view text, int degree) {
    std::vector<std::string> parts;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ';') {
            parts.emplace_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    if (degree < 0) {
        degree = 1;
        for (const auto& s : parts) {
            int v = 0;
            bool in = false;
            for (char ch : s) {
                if (isdigit(static_cast<unsigned char>(ch))) {
                    v = v * 10 + (ch - '0');
                    in = true;
                } else {
                    if (in) degree = std::max(degree, v + 1);
                    v = 0;
                    in = false;
                }
            }
            if (in) degree = std::max(degree, v + 1);
        }
    }
    std::vector<Perm> out;
    for (const auto& s : parts)
        if (s.find('(') != std::string::npos) out.push_back(parse_perm(s, degree));
    return out;
}

std::string format_perm(const Perm& p) {
    std::ostringstream os;
    std::vector<bool> seen(p.img.size(), false);
    bool any = false;
    for (size_t i = 0; i < p.img.size(); ++i) {
        if (seen[i] || p.img[i] == i) {
            seen[i] = true;
            continue;
        }
        os << "(";
        size_t j = i;
        bool first = true;
        while (!seen[j]) {
            if (!first) os << " ";
            os << j;
            first = false;
            seen[j] = true;
            j = p.img[j];
        }
        os << ")";
        any = true;
    }
    if (!any) os << "()";
    return os.str();
}

Perm perm_from_cycle_type(const std::vector<int>& partition, int degree) {
    Perm p(degree);
    int pos = 0;
    for (int len : partition) {
        for (int j = 0; j < len; ++j)
            p.img[static_cast<size_t>(pos + j)] = static_cast<uint16_t>(pos + (j + 1) % len);
        pos += len;
    }
    if (pos > degree) throw std::invalid_argument("partition exceeds degree");
    return p;
}

std::vector<std::vector<int>> partitions_of(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest, int maxpart) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(rest, maxpart); k >= 1; --k) {
            cur.push_back(k);
            self(self, rest - k, k);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

}  // namespace rfgrow
