#include "fcrystal/sigma_linear.hpp"

#include <string>

#include "fcrystal/errors.hpp"

namespace fcrystal {

std::optional<std::vector<WittElem>> solve_sigma_linear_here(const WittRing& r, const WMat& A,
                                                             const std::vector<WittElem>& c) {
    const int k = A.rows;
    // x -> x - A sigma(x) is Z_p-linear; one Smith solve over Z/p^N covers both
    // the residue system and every lifting step, including non-surjective cases.
    ZMat L = linear_map_matrix(r, k, k, [&](const std::vector<WittElem>& x) {
        std::vector<WittElem> y = x;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) y[i] = r.sub(y[i], r.mul(A(i, j), r.frobenius(x[j], 1)));
        return y;
    });
    auto sol = zsolve(r.zmod(), L, to_coords(c));
    if (!sol) return std::nullopt;
    return from_coords(r, *sol);
}

SigmaSolution solve_sigma_linear(const WittRing& r, const WMat& A, const std::vector<WittElem>& c, int ext_budget) {
    if (auto x = solve_sigma_linear_here(r, A, c)) return SigmaSolution{*x, r, std::nullopt};
    for (int e = 2; e * r.s() <= ext_budget; ++e) {
        RingExtension ext = extend_ring(r, e);
        std::vector<WittElem> ce;
        for (const auto& v : c) ce.push_back(ext.embed(r, v));
        if (auto x = solve_sigma_linear_here(ext.big, mat_embed(ext, r, A), ce))
            return SigmaSolution{*x, ext.big, ext};
    }
    throw ExtensionBudgetExceeded("no solution up to residue degree " + std::to_string(ext_budget));
}

}  // namespace fcrystal
