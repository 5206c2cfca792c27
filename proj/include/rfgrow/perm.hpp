#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rfgrow {

// Permutation of {0, ..., d-1}.
struct Perm {
    std::vector<uint16_t> img;

    Perm() = default;
    explicit Perm(int degree) : img(static_cast<size_t>(degree)) {
        for (size_t i = 0; i < img.size(); ++i) img[i] = static_cast<uint16_t>(i);
    }

    int degree() const { return static_cast<int>(img.size()); }
    bool is_identity() const {
        for (size_t i = 0; i < img.size(); ++i)
            if (img[i] != i) return false;
        return true;
    }
    uint16_t operator()(uint16_t x) const { return img[x]; }
    bool operator==(const Perm&) const = default;
    bool operator<(const Perm& o) const { return img < o.img; }

    // (a*b)(x) = b(a(x)): apply a first, then b
    Perm operator*(const Perm& o) const {
        Perm r;
        r.img.resize(img.size());
        for (size_t i = 0; i < img.size(); ++i) r.img[i] = o.img[img[i]];
        return r;
    }
    Perm inverse() const {
        Perm r;
        r.img.resize(img.size());
        for (size_t i = 0; i < img.size(); ++i) r.img[img[i]] = static_cast<uint16_t>(i);
        return r;
    }
    int64_t order() const;          // lcm of cycle lengths
    Perm power(int64_t e) const;    // e may be negative
};

struct PermHash {
    std::size_t operator()(const Perm& p) const {
        std::size_t h = 1469598103934665603ull;
        for (uint16_t v : p.img) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Cycle syntax: "(0 1 2);(0 1)" is a list, "(0 1 2)(3 4)" a single perm.
Perm parse_perm(std::string_view text, int degree);
std::vector<Perm> parse_perm_list(std::string_view text, int degree = -1);
std::string format_perm(const Perm& p);

// Canonical representative with the given cycle type (partition of d),
// cycles laid out over consecutive points.
Perm perm_from_cycle_type(const std::vector<int>& partition, int degree);
std::vector<std::vector<int>> partitions_of(int n);

}  // namespace rfgrow
