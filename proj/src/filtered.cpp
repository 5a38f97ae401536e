#include "fcrystal/filtered.hpp"

#include <algorithm>

#include "fcrystal/errors.hpp"

namespace fcrystal {

ZMat span_matrix(const WittRing& r, const WMat& gens) {
    return linear_map_matrix(r, gens.cols, gens.rows, [&](const std::vector<WittElem>& c) {
        std::vector<WittElem> v(gens.rows, r.zero());
        for (int i = 0; i < gens.rows; ++i)
            for (int j = 0; j < gens.cols; ++j) v[i] = r.add(v[i], r.mul(gens(i, j), c[j]));
        return v;
    });
}

int colength(const WittRing& r, const WMat& gens) {
    const int total = gens.rows * r.s();
    if (gens.cols == 0) return total * r.N();
    const Smith S = smith(r.zmod(), span_matrix(r, gens));
    int len = 0;
    for (int k = 0; k < total; ++k) len += k < static_cast<int>(S.exps.size()) ? S.exps[k] : r.N();
    return len;
}

WMat hconcat(const WittRing& r, const WMat& A, const WMat& B) {
    WMat C(r, A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
        for (int j = 0; j < B.cols; ++j) C(i, A.cols + j) = B(i, j);
    }
    return C;
}

bool contained_in(const WittRing& r, const WMat& A, const WMat& B) {
    if (A.cols == 0) return true;
    return colength(r, B) == colength(r, hconcat(r, B, A));
}

bool same_submodule(const WittRing& r, const WMat& A, const WMat& B) {
    return contained_in(r, A, B) && contained_in(r, B, A);
}

WMat coordinate_span(const WittRing& r, int n, const std::vector<int>& coords) {
    WMat E(r, n, static_cast<int>(coords.size()));
    for (int j = 0; j < E.cols; ++j) E(coords[j], j) = r.one();
    return E;
}

EchelonBasis canonical_basis(const WittRing& r, const WMat& gens) {
    std::vector<std::vector<WittElem>> cols(gens.cols, std::vector<WittElem>(gens.rows));
    for (int j = 0; j < gens.cols; ++j)
        for (int i = 0; i < gens.rows; ++i) cols[j][i] = gens(i, j);
    std::vector<std::vector<WittElem>> basis;
    std::vector<int> pivots;
    auto axpy = [&](std::vector<WittElem>& y, WittElem a, const std::vector<WittElem>& x) {
        for (size_t i = 0; i < y.size(); ++i) y[i] = r.sub(y[i], r.mul(a, x[i]));
    };
    for (int row = 0; row < gens.rows; ++row) {
        auto it = std::find_if(cols.begin(), cols.end(), [&](const auto& c) { return r.is_unit(c[row]); });
        if (it == cols.end()) continue;
        std::vector<WittElem> v = *it;
        cols.erase(it);
        const WittElem inv = r.inverse(v[row]);
        for (auto& x : v) x = r.mul(x, inv);
        for (auto& c : cols) axpy(c, c[row], v);
        for (auto& b : basis) axpy(b, b[row], v);
        basis.push_back(std::move(v));
        pivots.push_back(row);
    }
    for (const auto& c : cols)
        for (const auto& x : c)
            if (!r.is_zero(x)) throw PrecisionError("submodule is not a direct summand at this precision");
    EchelonBasis out{WMat(r, gens.rows, static_cast<int>(basis.size())), pivots};
    for (int j = 0; j < out.basis.cols; ++j)
        for (int i = 0; i < gens.rows; ++i) out.basis(i, j) = basis[j][i];
    return out;
}

WMat intersect_coordinates(const WittRing& r, const WMat& gens, const std::vector<int>& coords) {
    std::vector<int> outside;
    for (int i = 0; i < gens.rows; ++i)
        if (std::find(coords.begin(), coords.end(), i) == coords.end()) outside.push_back(i);
    if (outside.empty()) return gens;
    const WMat A = submatrix(gens, outside, index_range(0, gens.cols));
    const Kernel K = zkernel(r.zmod(), span_matrix(r, A));
    std::vector<std::vector<i64>> all = K.free;
    all.insert(all.end(), K.torsion.begin(), K.torsion.end());
    WMat out(r, gens.rows, static_cast<int>(all.size()));
    for (size_t j = 0; j < all.size(); ++j) {
        const auto c = from_coords(r, all[j]);
        for (int i = 0; i < gens.rows; ++i)
            for (int t = 0; t < gens.cols; ++t) out(i, j) = r.add(out(i, j), r.mul(gens(i, t), c[t]));
    }
    return out;
}

WittRing reduce_ring(const WittRing& r, int k) {
    if (k < 1 || k > r.N()) throw InvalidParams("truncation precision out of range");
    return make_ring(r.p(), r.s(), k);
}

WMat reduce_matrix(const WittRing& small, const WMat& A) {
    WMat B(small, A.rows, A.cols);
    for (size_t i = 0; i < A.a.size(); ++i)
        for (int t = 0; t < small.s(); ++t) B.a[i].coeffs[t] = small.zmod().reduce(A.a[i].coeffs[t]);
    return B;
}

FilteredModule make_filtered_module(const WittRing& r, const WMat& frob, const std::vector<WMat>& steps, int k) {
    const int n = frob.rows;
    const int top = static_cast<int>(steps.size());
    if (k + top > r.N()) throw PrecisionError("divided Frobenius needs precision k + number of steps");
    const WittRing small = reduce_ring(r, k);
    FilteredModule m{small, reduce_matrix(small, frob), {}, {}};
    std::vector<WMat> fil{WMat::identity(r, n)};
    fil.insert(fil.end(), steps.begin(), steps.end());
    for (int i = 0; i <= top; ++i) {
        const WMat image = mat_mul(r, frob, mat_frobenius(r, fil[i]));
        if (mat_val(r, image) < i) throw NotIntegral("Frobenius is not divisible by p^i on Fil^i");
        m.fil.push_back(reduce_matrix(small, fil[i]));
        m.phi.push_back(reduce_matrix(small, mat_div_p_power(r, image, i)));
    }
    m.fil.push_back(WMat(small, n, 0));
    m.phi.push_back(WMat(small, n, 0));
    return m;
}

FilteredModule truncate(const FilteredModule& m, int k) {
    const WittRing small = reduce_ring(m.ring, k);
    FilteredModule t{small, reduce_matrix(small, m.frob), {}, {}};
    for (const auto& f : m.fil) t.fil.push_back(reduce_matrix(small, f));
    for (const auto& f : m.phi) t.phi.push_back(reduce_matrix(small, f));
    return t;
}

FilteredModuleCheck check_filtered_module(const FilteredModule& m) {
    const WittRing& r = m.ring;
    FilteredModuleCheck c;
    auto fail = [&](bool& flag, const std::string& what) {
        flag = false;
        c.failures.push_back(what);
    };
    const int steps = static_cast<int>(m.fil.size());
    for (int i = 0; i + 1 < steps; ++i)
        if (!contained_in(r, m.fil[i + 1], m.fil[i]))
            fail(c.decreasing, "Fil^" + std::to_string(i + 1) + " is not inside Fil^" + std::to_string(i));
    if (colength(r, m.fil.front()) != 0) fail(c.exhaustive, "Fil^0 is not the whole module");
    if (!mat_is_zero(m.fil.back())) fail(c.separated, "the last filtration step is not zero");

    // phi_i on Fil^{i+1}: write each generator in the Fil^i generators, apply semilinearly.
    for (int i = 0; i + 1 < steps; ++i) {
        const WMat& lower = m.fil[i];
        const WMat& upper = m.fil[i + 1];
        if (upper.cols == 0) continue;
        const ZMat Z = span_matrix(r, lower);
        for (int j = 0; j < upper.cols; ++j) {
            std::vector<WittElem> v(upper.rows);
            for (int t = 0; t < upper.rows; ++t) v[t] = upper(t, j);
            auto sol = zsolve(r.zmod(), Z, to_coords(v));
            if (!sol) {
                fail(c.decreasing, "generator of Fil^" + std::to_string(i + 1) + " outside Fil^" + std::to_string(i));
                continue;
            }
            const auto coef = from_coords(r, *sol);
            bool same = true;
            for (int t = 0; t < upper.rows; ++t) {
                WittElem lhs = r.zero();
                for (int q = 0; q < lower.cols; ++q)
                    lhs = r.add(lhs, r.mul(r.frobenius(coef[q]), m.phi[i](t, q)));
                const WittElem rhs = r.scale(m.phi[i + 1](t, j), r.p());
                same = same && lhs == rhs;
            }
            if (!same && c.commuting)
                fail(c.commuting, "phi_" + std::to_string(i) + " differs from p phi_" + std::to_string(i + 1));
        }
    }
    WMat all(r, m.frob.rows, 0);
    for (const auto& ph : m.phi) all = hconcat(r, all, ph);
    if (colength(r, all) != 0) fail(c.strongly_divisible, "the divided Frobenii do not generate the module");
    return c;
}

}  // namespace fcrystal
