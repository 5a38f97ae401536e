#include "fcrystal/modint.hpp"

#include <stdexcept>

namespace fcrystal {

ZMod::ZMod(i64 prime, int precision) : p(prime), N(precision) {
    M = checked_power(prime, precision);
    if (M < 0) throw std::domain_error("p^N exceeds 2^62");
}

i64 ZMod::pow(i64 a, std::uint64_t e) const {
    i64 r = 1 % M;
    a = reduce(a);
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

int ZMod::val(i64 a) const {
    a = reduce(a);
    if (a == 0) return N;
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

i64 ZMod::inv(i64 a) const {
    a = reduce(a);
    if (a % p == 0) throw std::domain_error("inverse of a non-unit");
    // Extended Euclid on (a, M); gcd is 1 because a is a unit.
    i128 r0 = M, r1 = a, t0 = 0, t1 = 1;
    while (r1 != 0) {
        i128 q = r0 / r1;
        i128 tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    i128 res = t0 % M;
    if (res < 0) res += M;
    return static_cast<i64>(res);
}

i64 ZMod::ppow(int k) const {
    if (k >= N) return 0;
    i64 r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

i64 checked_power(i64 p, int N) {
    const i64 limit = i64(1) << 62;
    i64 r = 1;
    for (int i = 0; i < N; ++i) {
        if (r > limit / p) return -1;
        r *= p;
    }
    return r;
}

}  // namespace fcrystal
