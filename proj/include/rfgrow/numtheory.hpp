#pragma once

#include <cstdint>
#include <vector>

#include "rfgrow/bigint.hpp"

namespace rfgrow {

// All primes <= k, ascending.
std::vector<int64_t> primes_up_to(int64_t k);

// i-th prime, 1-indexed: nth_prime(1) == 2.
int64_t nth_prime(int i);

// lcm{1,...,k}; lcm_range(1) == 1.
BigInt lcm_range(int64_t k);

// ln(lcm{1..k}) computed from the prime factorization, not from the big
// integer itself: sum over primes q <= k of floor(log_q k) * ln q.
double chebyshev_psi(int64_t k);

// Exponent alpha attached to the i-th prime and a nilpotency depth m:
//   m == 1: lcm{1..p_i - 1}
//   m  > 1: lcm{1..p_i - 1}^(m+2)
// Powering a sufficiently distorted element by alpha forces every finite
// quotient of order below p_i (resp. p_i^(m+1)) to kill it.
struct WitnessExponent {
    int index;       // i
    int64_t prime;   // p_i
    int depth;       // m
    BigInt value;    // alpha_i
};

WitnessExponent witness_exponent(int i, int m);

}  // namespace rfgrow
