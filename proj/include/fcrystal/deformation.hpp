#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcrystal/filtered.hpp"
#include "fcrystal/normal_form.hpp"

namespace fcrystal {

struct HodgeFiltration {
    WMat basis;                    // generators of F inside D = W^d
    std::optional<Cochar> cochar;  // the inducing cocharacter when known
};

// F = span of the coordinate vectors of weight >= 1.
HodgeFiltration filtration_from_cocharacter(const WittRing& r, const Cochar& mu);

// Fil^1, ..., Fil^top of the coordinate flag of nonnegative weights w, moved by u.
std::vector<WMat> hodge_flag(const WittRing& r, const Cochar& w, const WMat& u);

// Positions of the opposite unipotent attached to the weights.
std::vector<std::pair<int, int>> unipotent_positions(const GroupPreset& g, const Cochar& w);

// u in U(w) with u = 1 mod p, uniformly random coordinates; symplectic for GSp.
WMat random_adapted_unipotent(const WittRing& r, const GroupPreset& g, const Cochar& w, Rng& rng);

// Shape of an adapted coordinate: 1 mod p, supported on the diagonal and U(w),
// symplectic for GSp. Empty string when valid, else the first violation.
std::string adapted_violation(const WittRing& r, const GroupPreset& g, const Cochar& w, const WMat& u);

// The unique adapted u with F' = u F for weights in {0, 1}.
WMat unipotent_coordinate(const WittRing& r, const GroupPreset& g, const HodgeFiltration& Fprime,
                          const HodgeFiltration& F, const Cochar& mu);

// The matrix u with Fil^k = u (coordinate span of weights >= k) for every k, read
// off by column reduction; NotLiftOfF when the flag does not reduce to the
// coordinate flag. No group condition is checked.
WMat unipotent_from_flag(const WittRing& r, const std::vector<WMat>& flag, const Cochar& w);

// Same recovery from a whole flag Fil^1 ⊃ Fil^2 ⊃ ..., which pins u down for any
// nonnegative weights.
WMat coordinate_from_flag(const WittRing& r, const GroupPreset& g, const std::vector<WMat>& flag, const Cochar& w);

// phi = frob . twist . sigma with frob integral; twist is the ResGL block shift and
// the identity otherwise. F sits on the image side: F/pF maps onto D/phi(D).
struct HondaSystem {
    WittRing ring;
    WMat frob;
    WMat twist;
    HodgeFiltration F;
};

struct HondaReport {
    bool contains_pD = false;    // p D inside phi(D)
    bool hodge_matches = false;  // F/pF maps isomorphically onto D/phi(D)
    int cokernel_length = 0;     // length of D/phi(D)
    int image_length = 0;        // length of the image of F in D/phi(D)
    int hodge_length = 0;        // length of F/pF, i.e. s * rank F
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

HondaReport honda_validate(const HondaSystem& h);

// The Honda system as a torsion filtered module over W/p^k: Fil^1 = twist^{-1} F,
// phi_0 = frob twist sigma and phi_1 = phi_0 / p.
FilteredModule honda_filtered_module(const HondaSystem& h, int k);

// Exponents w of a crystal whose integral Frobenius is diag(p^w); NotNormalForm otherwise.
Cochar normal_form_weights(const GCrystal& x);

struct CanonicalLift {
    NormalForm normal;
    Cochar weights;  // Hodge weights of the integral Frobenius upsilon(p)
    HondaSystem system;
    std::vector<std::vector<int>> block_coords;  // slope blocks, slopes decreasing
    std::vector<HondaSystem> blocks;
    bool lagrangian = false;  // GSp: F is isotropic for the form
};

CanonicalLift canonical_lift(const GCrystal& x, const Cochar& mu, int ext_budget = 0, std::uint64_t seed = 1);

struct GammaP {
    int n = 1;           // smallest n with n * nu integral
    QCochar nu;          // Newton slopes
    Cochar exponents;    // n * (nu + shift): gamma_p up to a central power of p
    WMat gamma;          // diag(p^exponents)
    bool in_centralizer = false;  // b sigma_G(gamma) = gamma b
};

GammaP gamma_p(const GCrystal& x);

struct CertificateEntry {
    int row = 0, col = 0;
    int valuation = 0;  // of the entry of u - 1
    int scaling = 0;    // m: conjugation multiplies the entry by p^m
    bool fixed = false;
    bool vanishes_below = false;  // entry = 0 mod p^(N - m)
};

// gamma_p^{-1} u gamma_p multiplies the entry at (i, j) by p^(e_j - e_i); that is
// the direction in which U(w) is contracted.
struct UniquenessCertificate {
    std::vector<CertificateEntry> entries;
    WMat conjugate;
    bool is_identity = false;
    bool fixed_point = false;           // conjugate == u at precision N
    bool trivialized = false;           // conjugate == 1 at precision N
    bool predicted_trivial = false;     // every entry of u - 1 vanishes mod p^(N - m)
    bool fixed_forces_vanishing = true; // fixed_point implies predicted_trivial
    bool ok() const;
};

UniquenessCertificate uniqueness_certificate(const WittRing& r, const WMat& u, const GCrystal& x);

struct SlopeChain {
    std::vector<Q> slopes;                  // decreasing, one per block
    std::vector<std::vector<int>> blocks;   // coordinates of each block
    std::vector<std::vector<int>> steps;    // steps[k] = blocks r-k .. r; increasing submodules
};

SlopeChain slope_filtration(const GCrystal& x);

// u maps every step into itself and is the identity on each graded block.
bool preserves_slope_chain(const WittRing& r, const WMat& u, const SlopeChain& chain);

struct GradedPiece {
    std::vector<int> coords;
    WMat frob;
    std::vector<WMat> flag;  // echelon bases of the graded Fil^1, Fil^2, ...
    HondaSystem system;      // with F = graded Fil^1
    bool canonical = false;  // equal to the canonical block entry for entry
};

// Graded pieces of the slope chain for the lift with flag u * (canonical flag).
std::vector<GradedPiece> slope_filtration_lift(const WittRing& r, const WMat& u, const GCrystal& x);

}  // namespace fcrystal
