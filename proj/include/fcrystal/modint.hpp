#pragma once

#include <cstdint>
#include <vector>

namespace fcrystal {

using i64 = std::int64_t;
using i128 = __int128;

// Arithmetic in Z/p^N with canonical residues in [0, p^N).
struct ZMod {
    i64 p = 3;
    int N = 1;
    i64 M = 3;  // p^N

    ZMod() = default;
    ZMod(i64 prime, int precision);

    i64 reduce(i64 x) const {
        x %= M;
        return x < 0 ? x + M : x;
    }
    i64 add(i64 a, i64 b) const {
        i64 r = a + b;
        return r >= M ? r - M : r;
    }
    i64 sub(i64 a, i64 b) const {
        i64 r = a - b;
        return r < 0 ? r + M : r;
    }
    i64 neg(i64 a) const { return a == 0 ? 0 : M - a; }
    i64 mul(i64 a, i64 b) const { return static_cast<i64>((static_cast<i128>(a) * b) % M); }
    i64 pow(i64 a, std::uint64_t e) const;

    // v_p(a) for a in [0, M); returns N for zero.
    int val(i64 a) const;
    bool is_unit(i64 a) const { return a % p != 0; }
    // Inverse of a unit; throws std::domain_error otherwise.
    i64 inv(i64 a) const;
    // p^k mod M, zero once k >= N.
    i64 ppow(int k) const;
};

bool is_prime(i64 n);
// p^N, or -1 if it does not fit below 2^62.
i64 checked_power(i64 p, int N);

}  // namespace fcrystal
