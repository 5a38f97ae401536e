#pragma once

#include <vector>

#include "fcrystal/group.hpp"
#include "fcrystal/laurent.hpp"
#include "fcrystal/matrix.hpp"

namespace fcrystal {

// phi = b sigma_G on V (x) W, with b stored integrally: the true matrix is p^(-shift) * b.
// For ResGL, b is block diagonal and the underlying GL Frobenius is b * P with P
// moving block k to block k + 1.
struct GCrystal {
    WittRing ring;
    GroupPreset preset;
    WMat b;
    int shift = 0;
    WittElem similitude;  // GSp only: c with b^T J b = c J (integral b)
};

// Validates shape, invertibility at working precision and group membership.
GCrystal make_crystal(const WittRing& r, const GroupPreset& g, WMat b, int shift = 0);
// Entries row-major; the shift is the smallest one making every entry integral.
GCrystal crystal_from_laurent(const WittRing& r, const GroupPreset& g, const std::vector<LaurentElem>& entries);

WMat form_matrix(const WittRing& r, const GroupPreset& g);  // GSp form J, identity otherwise
WMat block_shift_matrix(const WittRing& r, const GroupPreset& g);
WMat sigma_G(const WittRing& r, const GroupPreset& g, const WMat& m, long k = 1);
WMat gl_frobenius_matrix(const GCrystal& x);  // b, or b * P for ResGL

// Exact similitude factor of a GSp matrix; NotInGroup if m^T J m is not a multiple of J.
WittElem gsp_similitude(const WittRing& r, const GroupPreset& g, const WMat& m);
bool in_group_shape(const WittRing& r, const GroupPreset& g, const WMat& m);  // block pattern and GSp form
bool in_group_O(const WittRing& r, const GroupPreset& g, const WMat& m);      // plus invertible over W

WMat random_group_element(const WittRing& r, const GroupPreset& g, Rng& rng);
// The Weyl element pi as a matrix of G(W): e_i -> +-e_pi(i).
WMat weyl_matrix(const WittRing& r, const GroupPreset& g, const std::vector<int>& pi);
// mu(p) for a cocharacter with nonnegative weights.
WMat cochar_matrix(const WittRing& r, const Cochar& mu);

// g^{-1} b sigma_G(g); NotInGroup / NotIntegral unless g lies in G(W).
GCrystal sigma_conjugate(const GCrystal& x, const WMat& g);

struct CartanResult {
    Cochar mu;     // dominant, true (unshifted) exponents
    WMat k1, k2;   // in G(W); b = k1 (mu + shift)(p) k2 modulo p^(N - max exponent)
};

CartanResult cartan_decomposition(const GCrystal& x);
Cochar cartan(const GCrystal& x);
QCochar newton(const GCrystal& x);
i64 kottwitz(const GCrystal& x);

struct Invariants {
    Cochar hodge;
    QCochar newton;
    i64 kottwitz = 0;
};

Invariants invariants(const GCrystal& x);
bool admissible(const GCrystal& x, const Cochar& mu);
bool is_mu_ordinary(const GCrystal& x, const Cochar& mu);

}  // namespace fcrystal
