#pragma once

#include <optional>
#include <vector>

#include "fcrystal/matrix.hpp"

namespace fcrystal {

struct SigmaSolution {
    std::vector<WittElem> x;
    WittRing ring;                        // ring the solution lives in
    std::optional<RingExtension> extension;  // set when the base ring was too small
};

// Solves x - A sigma(x) = c over r, or over the smallest unramified extension
// of residue degree at most ext_budget that admits a solution.
SigmaSolution solve_sigma_linear(const WittRing& r, const WMat& A, const std::vector<WittElem>& c, int ext_budget);

// Over r only.
std::optional<std::vector<WittElem>> solve_sigma_linear_here(const WittRing& r, const WMat& A,
                                                             const std::vector<WittElem>& c);

}  // namespace fcrystal
