#pragma once

#include <string>
#include <vector>

#include "fcrystal/matrix.hpp"
#include "fcrystal/zlinalg.hpp"

namespace fcrystal {

// Submodules of W^n are given by generating columns. Lengths are Z/p^N lengths.

ZMat span_matrix(const WittRing& r, const WMat& gens);
int colength(const WittRing& r, const WMat& gens);  // length of W^n / span
bool contained_in(const WittRing& r, const WMat& A, const WMat& B);
bool same_submodule(const WittRing& r, const WMat& A, const WMat& B);
WMat hconcat(const WittRing& r, const WMat& A, const WMat& B);
WMat coordinate_span(const WittRing& r, int n, const std::vector<int>& coords);

// The unique reduced column echelon basis of a direct summand: pivot rows are
// chosen top to bottom and hold an identity block. PrecisionError otherwise.
struct EchelonBasis {
    WMat basis;
    std::vector<int> pivots;
};
EchelonBasis canonical_basis(const WittRing& r, const WMat& gens);

// span(gens) intersected with the coordinate submodule on coords.
WMat intersect_coordinates(const WittRing& r, const WMat& gens, const std::vector<int>& coords);

// Torsion filtered module with divided Frobenii: Fil^0 = M is free over W/p^k,
// phi_i = p^{-i} frob sigma on Fil^i, stored through the images of generators.
struct FilteredModule {
    WittRing ring;
    WMat frob;
    std::vector<WMat> fil;  // fil[0] = M, ..., fil.back() = 0
    std::vector<WMat> phi;  // phi[i] column j = phi_i(fil[i] column j)
};

// steps lists Fil^1, Fil^2, ... over r; the result lives over W/p^k and needs
// k + (number of steps) <= N so every phi_i is known. NotIntegral when p^i
// does not divide frob sigma on Fil^i.
FilteredModule make_filtered_module(const WittRing& r, const WMat& frob, const std::vector<WMat>& steps, int k);
FilteredModule truncate(const FilteredModule& m, int k);

struct FilteredModuleCheck {
    bool decreasing = true;
    bool exhaustive = true;
    bool separated = true;
    bool commuting = true;           // phi_i = p phi_{i+1} on Fil^{i+1}
    bool strongly_divisible = true;  // the phi_i(Fil^i) generate M
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
FilteredModuleCheck check_filtered_module(const FilteredModule& m);

// The ring with the same residue field at precision k <= N, and reduction into it.
WittRing reduce_ring(const WittRing& r, int k);
WMat reduce_matrix(const WittRing& small, const WMat& A);

}  // namespace fcrystal
