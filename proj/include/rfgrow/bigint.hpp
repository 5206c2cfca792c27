#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/functional/hash.hpp>
#include <cstdint>

namespace rfgrow {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt bigint_pow(BigInt base, int64_t e) {
    BigInt r = 1;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline BigInt bigint_abs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

// smallest r >= 0 with base^r >= x (x >= 1), i.e. ceil(log_base x)
inline int64_t ceil_log(int64_t base, const BigInt& x) {
    BigInt p = 1;
    int64_t r = 0;
    while (p < x) {
        p *= base;
        ++r;
    }
    return r;
}

// log2 of a positive big integer, good to ~1e-15 relative
inline double bigint_log2(const BigInt& x) {
    if (x <= 0) return 0.0;
    auto bits = msb(x);  // index of highest set bit
    if (bits <= 900) return std::log2(x.convert_to<double>());
    BigInt shifted = x >> (bits - 64);
    return std::log2(shifted.convert_to<double>()) + static_cast<double>(bits - 64);
}

inline std::size_t bigint_hash(const BigInt& x) {
    return boost::hash<BigInt>{}(x);
}

}  // namespace rfgrow
