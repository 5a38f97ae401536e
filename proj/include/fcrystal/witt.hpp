#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fcrystal/modint.hpp"
#include "fcrystal/zlinalg.hpp"

namespace fcrystal {

using Rng = std::mt19937_64;

// Power-basis coordinates of an element of W(F_{p^s})/p^N.
struct WittElem {
    std::vector<i64> coeffs;
    bool operator==(const WittElem& o) const { return coeffs == o.coeffs; }
    bool operator!=(const WittElem& o) const { return coeffs != o.coeffs; }
};

// W(F_{p^s})/p^N = (Z/p^N)[x]/(f) with f monic, irreducible mod p, and the
// Frobenius sending x to the root of f congruent to x^p.
class WittRing {
public:
    i64 p() const { return z_.p; }
    int s() const { return s_; }
    int N() const { return z_.N; }
    const ZMod& zmod() const { return z_; }
    // Monic modulus, coefficients c_0 .. c_s.
    const std::vector<i64>& modulus() const { return modulus_; }
    // Column i holds the coordinates of sigma(x^i).
    const ZMat& frobenius_matrix() const { return frob_[1 % s_]; }

    WittElem zero() const { return WittElem{std::vector<i64>(s_, 0)}; }
    WittElem one() const { return from_int(1); }
    WittElem from_int(i64 v) const;
    WittElem generator() const;  // the class of x
    WittElem from_coeffs(std::vector<i64> c) const;

    WittElem add(const WittElem& a, const WittElem& b) const;
    WittElem sub(const WittElem& a, const WittElem& b) const;
    WittElem neg(const WittElem& a) const;
    WittElem mul(const WittElem& a, const WittElem& b) const;
    WittElem scale(const WittElem& a, i64 k) const;  // a * k, k an integer
    WittElem pow(const WittElem& a, std::uint64_t e) const;
    WittElem frobenius(const WittElem& a, long k = 1) const;  // sigma^k, k taken mod s
    WittElem inverse(const WittElem& a) const;                // requires a unit
    WittElem div_p_power(const WittElem& a, int k) const;     // exact division by p^k, lifting with zero digits

    int val(const WittElem& a) const;  // N for zero
    bool is_zero(const WittElem& a) const;
    bool is_unit(const WittElem& a) const { return val(a) == 0; }
    WittElem reduce_mod_p_power(const WittElem& a, int k) const;

    WittElem random(Rng& rng) const;
    WittElem random_unit(Rng& rng) const;

    bool operator==(const WittRing& o) const {
        return z_.p == o.z_.p && s_ == o.s_ && z_.N == o.z_.N && modulus_ == o.modulus_;
    }

    friend WittRing make_ring(i64 p, int s, int N);

private:
    ZMod z_;
    int s_ = 1;
    std::vector<i64> modulus_;
    std::vector<ZMat> frob_;  // frob_[k] = matrix of sigma^k, k = 0 .. s-1
    WittElem frob_root_;
};

// Throws InvalidParams unless p is an odd prime, s >= 1, N >= 1 and p^N < 2^62.
WittRing make_ring(i64 p, int s, int N);

WittElem frobenius(const WittRing& r, const WittElem& x, long k);

// Multiplicative representative of a residue class (coefficients read mod p).
WittElem teichmuller(const WittRing& r, const WittElem& residue);

// Unramified extension of degree k over r together with a sigma-compatible embedding.
struct RingExtension {
    WittRing big;
    int degree = 1;
    WittElem root;  // image of the generator of the small ring
    WittElem embed(const WittRing& small, const WittElem& x) const;
};

RingExtension extend_ring(const WittRing& r, int k);

// The first monic irreducible polynomial of degree s over F_p in the fixed
// enumeration: coefficients c_0 .. c_{s-1} read as base-p digits of 0, 1, 2, ...
std::vector<i64> first_irreducible(i64 p, int s);
bool irreducible_mod_p(i64 p, const std::vector<i64>& monic);

}  // namespace fcrystal
