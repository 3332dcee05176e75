#include "lfn/arith.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace lfn {

int64_t powmod(int64_t base, int64_t exp, int64_t mod) {
    if (mod <= 0) throw std::invalid_argument("powmod: modulus must be positive");
    __int128 r = 1;
    __int128 b = base % mod;
    if (b < 0) b += mod;
    while (exp > 0) {
        if (exp & 1) r = (r * b) % mod;
        b = (b * b) % mod;
        exp >>= 1;
    }
    return static_cast<int64_t>(r);
}

std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
    std::vector<std::pair<int64_t, int>> out;
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

int64_t euler_phi(int64_t n) {
    int64_t phi = 1;
    for (auto [p, e] : factorize(n)) {
        int64_t pe = 1;
        for (int i = 1; i < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }
    return phi;
}

std::vector<int64_t> divisors(int64_t n) {
    std::vector<int64_t> out{1};
    for (auto [p, e] : factorize(n)) {
        size_t m = out.size();
        int64_t pe = 1;
        for (int i = 0; i < e; ++i) {
            pe *= p;
            for (size_t j = 0; j < m; ++j) out.push_back(out[j] * pe);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int64_t smallest_primitive_root(int64_t pe) {
    auto fac = factorize(pe);
    if (fac.size() != 1 || fac[0].first == 2)
        throw std::invalid_argument("smallest_primitive_root: odd prime power required");
    int64_t order = euler_phi(pe);
    auto order_primes = factorize(order);
    for (int64_t g = 2; g < pe; ++g) {
        if (std::gcd(g, pe) != 1) continue;
        bool primitive = true;
        for (auto [ell, e] : order_primes) {
            (void)e;
            if (powmod(g, order / ell, pe) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) return g;
    }
    throw std::logic_error("no primitive root found");
}

std::vector<int32_t> primes_up_to(int64_t n) {
    static std::mutex mu;
    static std::vector<int32_t> cache;
    static int64_t cached_to = 1;

    std::lock_guard<std::mutex> lock(mu);
    if (n > cached_to) {
        int64_t limit = std::max<int64_t>(n, 2 * cached_to);
        std::vector<bool> sieve(limit + 1, true);
        std::vector<int32_t> ps;
        for (int64_t i = 2; i <= limit; ++i) {
            if (!sieve[i]) continue;
            ps.push_back(static_cast<int32_t>(i));
            for (int64_t j = i * i; j <= limit; j += i) sieve[j] = false;
        }
        cache = std::move(ps);
        cached_to = limit;
    }
    std::vector<int32_t> out;
    for (int32_t p : cache) {
        if (p > n) break;
        out.push_back(p);
    }
    return out;
}

}  // namespace lfn
