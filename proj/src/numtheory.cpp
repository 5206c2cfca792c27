#include "rfgrow/numtheory.hpp"

#include <cmath>
#include <stdexcept>

namespace rfgrow {

std::vector<int64_t> primes_up_to(int64_t k) {
    std::vector<int64_t> out;
    if (k < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(k) + 1, false);
    for (int64_t i = 2; i <= k; ++i) {
        if (composite[static_cast<size_t>(i)]) continue;
        out.push_back(i);
        for (int64_t j = i * i; j <= k; j += i) composite[static_cast<size_t>(j)] = true;
    }
    return out;
}

int64_t nth_prime(int i) {
    if (i < 1) throw std::invalid_argument("nth_prime: index must be >= 1");
    int64_t bound = 32;
    for (;;) {
        auto ps = primes_up_to(bound);
        if (static_cast<int>(ps.size()) >= i) return ps[static_cast<size_t>(i) - 1];
        bound *= 2;
    }
}

BigInt lcm_range(int64_t k) {
    if (k < 1) throw std::invalid_argument("lcm_range: k must be >= 1");
    // product over primes q <= k of q^floor(log_q k)
    BigInt acc = 1;
    for (int64_t q : primes_up_to(k)) {
        BigInt pw = q;
        while (pw * q <= k) pw *= q;
        acc *= pw;
    }
    return acc;
}

double chebyshev_psi(int64_t k) {
    if (k < 1) throw std::invalid_argument("chebyshev_psi: k must be >= 1");
    double acc = 0.0;
    for (int64_t q : primes_up_to(k)) {
        int64_t e = 1;
        BigInt pw = BigInt(q) * q;
        while (pw <= k) {
            ++e;
            pw *= q;
        }
        acc += static_cast<double>(e) * std::log(static_cast<double>(q));
    }
    return acc;
}

WitnessExponent witness_exponent(int i, int m) {
    if (i < 1 || m < 1) throw std::invalid_argument("witness_exponent: i and m must be >= 1");
    int64_t p = nth_prime(i);
    BigInt base = (p <= 2) ? BigInt(1) : lcm_range(p - 1);
    BigInt value = (m == 1) ? base : bigint_pow(base, m + 2);
    return WitnessExponent{i, p, m, value};
}

}  // namespace rfgrow
