#pragma once

#include <string>
#include <vector>

#include "fcrystal/deformation.hpp"

namespace fcrystal {

// Slope blocks of a normal-form crystal. Levels (a, b) are 1-based with
// 1 <= a <= b <= r; a level's coordinates are its blocks concatenated in order.
struct CascadeLayout {
    GCrystal crystal;
    Cochar weights;                       // integral Hodge weights, b = diag(p^w)
    std::vector<Q> slopes;                // strictly decreasing
    std::vector<std::vector<int>> blocks;
    int c = 1;                            // least common denominator of the slopes

    int r() const { return static_cast<int>(blocks.size()); }
    std::vector<int> coords(int a, int b) const;
    int block_of(int coord) const;  // 1-based
    const WittRing& ring() const { return crystal.ring; }
    const GroupPreset& preset() const { return crystal.preset; }
};

CascadeLayout make_layout(const GCrystal& normal_form);  // NotNormalForm otherwise
CascadeLayout make_layout(const WittRing& r, const GroupPreset& g, const Cochar& w);

// u acts on D_(a,b) in the level's coordinate order.
struct DefPoint {
    int a = 1, b = 1;
    WMat u;
};

// Empty when x is a point of the level: u = 1 mod p, supported on the opposite
// unipotent, and for GSp the Cayley logarithm obeys the symplectic symmetry on
// every pair of positions inside the level.
std::string point_violation(const CascadeLayout& L, const DefPoint& x);
bool is_point(const CascadeLayout& L, const DefPoint& x);

DefPoint zero_point(const CascadeLayout& L, int a, int b);
DefPoint full_point(const CascadeLayout& L, const WMat& u);  // level (1, r); NotAdapted unless valid
DefPoint random_point(const CascadeLayout& L, int a, int b, Rng& rng);
// A random point of level (a, b) restricting to base.
DefPoint random_fiber_point(const CascadeLayout& L, int a, int b, const DefPoint& base, Rng& rng);
// Some point of level (a, b) restricting to y: the restriction maps are onto.
DefPoint lift_point(const CascadeLayout& L, const DefPoint& y, int a, int b);

DefPoint restrict(const CascadeLayout& L, const DefPoint& x, int a, int b);  // BadIndices unless nested

// Non-base entries added (x + y) or combined (x + y - z); base entries kept.
// DifferentFibers unless the points agree on the base level.
DefPoint fiber_sum(const CascadeLayout& L, const DefPoint& x, const DefPoint& y, int base_a, int base_b);
DefPoint coset_combine(const CascadeLayout& L, const DefPoint& x, const DefPoint& y, const DefPoint& z, int base_a,
                       int base_b);

// Conjugation by a power of p on the blocks. k = 0 scales the entry in block
// (i, j) by p^{c (lambda_j - lambda_i)}; k in (a, b] scales only entries with
// j < k <= i, by p^{c (lambda_{k-1} - lambda_k)}. The cuts compose to k = 0.
// PrecisionError when a nonzero entry would vanish.
DefPoint isogeny_shift(const CascadeLayout& L, const DefPoint& x, int k);

// Fil^1, Fil^2, ... of D_(a,b) for the point.
std::vector<WMat> point_flag(const CascadeLayout& L, const DefPoint& x);

// The Baer sum of the extensions x and y of filtered modules: pull back along the
// diagonal of the quotient, push out along the addition of the sub. base must be
// (a + 1, b) or (a, b - 1). Returns the echelon bases of the resulting flag.
std::vector<WMat> baer_sum_flag(const CascadeLayout& L, const DefPoint& x, const DefPoint& y, int base_a, int base_b);
std::vector<WMat> echelon_flag(const CascadeLayout& L, const std::vector<WMat>& flag);

struct AuditCheck {
    std::string level;
    std::string name;
    bool pass = true;
    std::string detail;
};

struct AuditReport {
    std::vector<AuditCheck> checks;
    std::vector<std::string> notes;
    bool subgroup_fibers = true;  // fiber_sum closes over every base point, not only the zero section
    bool pass() const;
};

AuditReport hypothesis_audit(const CascadeLayout& L, std::uint64_t seed = 1, int samples = 6);

}  // namespace fcrystal
