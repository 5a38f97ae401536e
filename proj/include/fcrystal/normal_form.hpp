#pragma once

#include <optional>
#include <vector>

#include "fcrystal/crystal.hpp"

namespace fcrystal {

struct NormalForm {
    WittRing ring;                           // where g lives
    std::optional<RingExtension> extension;  // set when the base ring was too small
    WMat g;                                  // g^{-1} b sigma_G(g) = upsilon(p), exactly
    Cochar upsilon;                          // sigma(mu), dominant, true exponents
    int iterations = 0;                      // contraction rounds
    int restarts = 0;                        // big-cell retries
    GCrystal reduced;                        // the crystal with b = upsilon(p)
};

// ext_budget bounds the residue degree of the ring the answer may need; 0 means 8 s.
NormalForm normal_form(const GCrystal& x, const Cochar& mu, int ext_budget = 0, std::uint64_t seed = 1);

struct Isomorphism {
    WittRing ring;
    WMat theta;  // theta b_y sigma_G(theta)^{-1} = b_x, theta in G(O)
};

Isomorphism isomorphism_witness(const GCrystal& x, const GCrystal& y, const Cochar& mu, int ext_budget = 0,
                                std::uint64_t seed = 1);

struct SlopePiece {
    Q slope;
    std::vector<int> coords;
    WMat block;  // the restricted Frobenius matrix, integral with the crystal's shift
};

// Requires b = upsilon(p) for a dominant upsilon; NotNormalForm otherwise.
std::vector<SlopePiece> slope_decomposition(const GCrystal& x);

// The crystal over a larger ring.
GCrystal embed_crystal(const RingExtension& ext, const GCrystal& x);

}  // namespace fcrystal
