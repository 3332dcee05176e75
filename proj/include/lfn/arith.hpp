#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace lfn {

int64_t powmod(int64_t base, int64_t exp, int64_t mod);

// Prime factorization by trial division, pairs (p, e) with p ascending.
std::vector<std::pair<int64_t, int>> factorize(int64_t n);

int64_t euler_phi(int64_t n);

// Divisors of n in ascending order.
std::vector<int64_t> divisors(int64_t n);

// Smallest primitive root modulo an odd prime power p^e.
int64_t smallest_primitive_root(int64_t prime_power);

// Primes up to n (inclusive), cached between calls.
std::vector<int32_t> primes_up_to(int64_t n);

}  // namespace lfn
