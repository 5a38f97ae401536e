#include "fcrystal/normal_form.hpp"

#include <numeric>
#include <string>

#include "fcrystal/errors.hpp"

namespace fcrystal {

namespace {

// Integral target data: D = diag(p^w) with w = upsilon + shift, and the Levi of nu.
struct Target {
    Cochar w;
    QCochar nu;
    // Per GL block, the coordinate groups of equal slope in decreasing slope order.
    std::vector<std::vector<std::vector<int>>> groups;
};

Target make_target(const GroupPreset& g, const Cochar& upsilon, int shift) {
    Target t;
    t.w = upsilon;
    for (auto& v : t.w) v += shift;
    t.nu = galois_average(g, upsilon);
    const int blocks = g.kind == GroupKind::ResGL ? g.s0 : 1;
    const int m = g.d / blocks;
    t.groups.resize(blocks);
    for (int b = 0; b < blocks; ++b)
        for (int i = b * m; i < (b + 1) * m; ++i) {
            auto& gs = t.groups[b];
            if (gs.empty() || t.nu[gs.back().front()] != t.nu[i]) gs.emplace_back();
            gs.back().push_back(i);
        }
    return t;
}

bool in_levi(const GroupPreset& g, const Target& t, int i, int j) {
    return g.block_of(i) == g.block_of(j) && t.nu[i] == t.nu[j];
}

bool off_levi_zero(const WittRing& r, const GroupPreset& g, const Target& t, const WMat& b) {
    for (int i = 0; i < g.d; ++i)
        for (int j = 0; j < g.d; ++j)
            if (!in_levi(g, t, i, j) && !r.is_zero(b(i, j))) return false;
    return true;
}

// D^{-1} b, row by row; rows of b are divisible by p^w_i while b lies in D G(O).
WMat divide_rows(const WittRing& r, const WMat& b, const Cochar& w) {
    WMat k(r, b.rows, b.cols);
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            if (r.val(b(i, j)) < w[i]) throw PrecisionError("Frobenius matrix left the double coset of upsilon");
            k(i, j) = r.div_p_power(b(i, j), w[i]);
        }
    return k;
}

void put(WMat& dst, const WMat& src, const std::vector<int>& rows, const std::vector<int>& cols) {
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) dst(rows[i], cols[j]) = src(static_cast<int>(i), static_cast<int>(j));
}

std::vector<int> concat(const std::vector<std::vector<int>>& gs, size_t count) {
    std::vector<int> out;
    for (size_t q = 0; q < count; ++q) out.insert(out.end(), gs[q].begin(), gs[q].end());
    return out;
}

// k = u m l with u block upper and l block lower unitriangular, m in M; none if
// a pivot block is singular mod p (k outside the big cell).
struct LDU {
    WMat u, m, l;
};

std::optional<LDU> big_cell_decomposition(const WittRing& r, const Target& t, const WMat& k) {
    const int d = k.rows;
    LDU out{WMat::identity(r, d), WMat(r, d, d), WMat::identity(r, d)};
    for (const auto& gs : t.groups) {
        const std::vector<int> all = concat(gs, gs.size());
        WMat cur = submatrix(k, all, all);
        // Local indices of the groups inside this GL block.
        std::vector<std::vector<int>> local;
        int pos = 0;
        for (const auto& grp : gs) {
            local.push_back(index_range(pos, pos + static_cast<int>(grp.size())));
            pos += static_cast<int>(grp.size());
        }
        for (size_t q = gs.size(); q-- > 0;) {
            const std::vector<int>& E = local[q];
            WMat Eblk = submatrix(cur, E, E);
            if (!mat_is_invertible(r, Eblk)) return std::nullopt;
            put(out.m, Eblk, gs[q], gs[q]);
            if (q == 0) break;
            const std::vector<int> R = concat(local, q), Rg = concat(gs, q);
            const WMat Einv = mat_inverse(r, Eblk);
            const WMat B = submatrix(cur, R, E), C = submatrix(cur, E, R);
            const WMat BE = mat_mul(r, B, Einv), EC = mat_mul(r, Einv, C);
            put(out.u, BE, Rg, gs[q]);
            put(out.l, EC, gs[q], Rg);
            const WMat top = mat_sub(r, submatrix(cur, R, R), mat_mul(r, BE, C));
            put(cur, top, R, R);
        }
    }
    return out;
}

// Exact element of Sp close to a unipotent v, through the Cayley transform. Each
// entry pair (a, b), (b', a') of the Lie algebra element is read off the row of
// smaller weight, where D^{-1} b carries more trusted digits.
WMat symplectic_projection(const WittRing& r, const GroupPreset& g, const Cochar& w, const WMat& v) {
    const int d = g.d;
    const WMat I = WMat::identity(r, d);
    const WMat X = mat_mul(r, mat_sub(r, v, I), mat_inverse(r, mat_add(r, v, I)));
    WMat Xs(r, d, d);
    const WittElem half = r.inverse(r.from_int(2));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const int ap = g.partner(a), bp = g.partner(b);
            // X = J X^T J gives X(a, b) = J(a, a') J(b', b) X(b', a').
            const int sign = (a < g.n ? 1 : -1) * (bp < g.n ? 1 : -1);
            const WittElem mirror = sign > 0 ? X(bp, ap) : r.neg(X(bp, ap));
            if (w[a] < w[bp]) Xs(a, b) = X(a, b);
            else if (w[a] > w[bp]) Xs(a, b) = mirror;
            else Xs(a, b) = r.mul(r.add(X(a, b), mirror), half);
        }
    return mat_mul(r, mat_add(r, I, Xs), mat_inverse(r, mat_sub(r, I, Xs)));
}

struct State {
    const WittRing& r;
    const GroupPreset& g;
    WMat b, gacc;

    void conjugate(const WMat& h) {
        b = mat_mul(r, mat_inverse(r, h), mat_mul(r, b, sigma_G(r, g, h)));
        gacc = mat_mul(r, gacc, h);
    }
};

// Moves b into D M(O) by alternately pushing the lower and upper unipotent parts
// of D^{-1} b through sigma_G, where conjugation by D contracts them.
// Returns false when the big-cell decomposition fails.
bool contract(State& st, const Target& t, int cap, int& iterations) {
    const WittRing& r = st.r;
    const GroupPreset& g = st.g;
    const bool gsp = g.kind == GroupKind::GSp;
    for (iterations = 0; iterations < cap; ++iterations) {
        if (off_levi_zero(r, g, t, st.b)) return true;
        auto parts = big_cell_decomposition(r, t, divide_rows(r, st.b, t.w));
        if (!parts) return false;
        WMat l = gsp ? symplectic_projection(r, g, t.w, parts->l) : parts->l;
        st.conjugate(sigma_G(r, g, mat_inverse(r, l), -1));

        parts = big_cell_decomposition(r, t, divide_rows(r, st.b, t.w));
        if (!parts) return false;
        WMat u = gsp ? symplectic_projection(r, g, t.w, parts->u) : parts->u;
        for (int i = 0; i < g.d; ++i)
            for (int j = 0; j < g.d; ++j)
                if (i != j && !r.is_zero(u(i, j))) {
                    if (t.w[i] < t.w[j]) throw PrecisionError("unipotent part is not contracted by upsilon");
                    u(i, j) = r.mul(u(i, j), r.pow(r.from_int(r.p()), static_cast<std::uint64_t>(t.w[i] - t.w[j])));
                }
        st.conjugate(u);
    }
    if (off_levi_zero(r, g, t, st.b)) return true;
    throw PrecisionError("contraction did not converge in " + std::to_string(cap) + " rounds");
}

// Symplectic basis change Z, sigma-fixed and commuting with D, with Z^T B Z = lambda J.
// Entries of B between groups of weights w_a, w_a' are sigma-fixed up to a unit only
// modulo p^(N - max(w_a, w_a')), so lambda comes from the innermost group and Z
// acts on the heavier group of each pair.
std::optional<WMat> symplectic_adjustment(const WittRing& r, const GroupPreset& g, const Target& t, const WMat& B) {
    const int d = g.d;
    const auto& gs = t.groups[0];
    const size_t ng = gs.size();
    const int inner_row = gs[(ng - 1) / 2].front();
    int unit_col = -1;
    for (int j = 0; j < d && unit_col < 0; ++j)
        if (r.is_unit(B(inner_row, j))) unit_col = j;
    if (unit_col < 0) return std::nullopt;
    const WMat Bn = mat_scale(r, B, r.inverse(B(inner_row, unit_col)));
    const WMat J = form_matrix(r, g);
    WMat Z(r, d, d);
    for (size_t a = 0; a < ng; ++a) {
        const size_t ap = ng - 1 - a;
        if (a < ap) {
            const WMat blk = submatrix(Bn, gs[a], gs[ap]);
            if (!mat_is_invertible(r, blk)) return std::nullopt;
            put(Z, WMat::identity(r, static_cast<int>(gs[ap].size())), gs[ap], gs[ap]);
            put(Z, mat_transpose(mat_mul(r, submatrix(J, gs[a], gs[ap]), mat_inverse(r, blk))), gs[a], gs[a]);
        } else if (a == ap) {
            // Symplectic Gram-Schmidt on the self-dual group.
            const std::vector<int>& G = gs[a];
            const int m = static_cast<int>(G.size());
            const WMat form = submatrix(Bn, G, G);
            auto omega = [&](const std::vector<WittElem>& x, const std::vector<WittElem>& y) {
                WittElem acc = r.zero();
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) acc = r.add(acc, r.mul(x[i], r.mul(form(i, j), y[j])));
                return acc;
            };
            std::vector<std::vector<WittElem>> pool;
            for (int i = 0; i < m; ++i) {
                std::vector<WittElem> e(m, r.zero());
                e[i] = r.one();
                pool.push_back(e);
            }
            for (int k = 0; k < m / 2; ++k) {
                std::vector<WittElem> x = pool.front();
                pool.erase(pool.begin());
                size_t yi = pool.size();
                for (size_t c = 0; c < pool.size() && yi == pool.size(); ++c)
                    if (r.is_unit(omega(x, pool[c]))) yi = c;
                if (yi == pool.size()) return std::nullopt;
                std::vector<WittElem> y = pool[yi];
                pool.erase(pool.begin() + static_cast<long>(yi));
                const WittElem inv = r.inverse(omega(x, y));
                for (auto& e : y) e = r.mul(e, inv);
                for (auto& v : pool) {
                    const WittElem vy = omega(v, y), vx = omega(v, x);
                    for (int i = 0; i < m; ++i) v[i] = r.add(r.sub(v[i], r.mul(vy, x[i])), r.mul(vx, y[i]));
                }
                // Local index k pairs with m - 1 - k.
                for (int i = 0; i < m; ++i) {
                    Z(G[i], G[k]) = x[i];
                    Z(G[i], G[m - 1 - k]) = y[i];
                }
            }
        }
    }
    return Z;
}

// Solves X^{-1} b sigma_G(X) = D over r for b in D M(O), with X in M(O).
std::optional<WMat> lang_step(const WittRing& r, const GroupPreset& g, const Target& t, const WMat& b, Rng& rng) {
    const int d = g.d;
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (in_levi(g, t, i, j)) pos.emplace_back(i, j);
    const int np = static_cast<int>(pos.size());
    const WMat D = diag_ppow(r, t.w);
    auto to_mat = [&](const std::vector<WittElem>& v) {
        WMat X(r, d, d);
        for (int q = 0; q < np; ++q) X(pos[q].first, pos[q].second) = v[q];
        return X;
    };
    auto residual = [&](const std::vector<WittElem>& v) {
        const WMat X = to_mat(v);
        const WMat R = mat_sub(r, mat_mul(r, b, sigma_G(r, g, X)), mat_mul(r, X, D));
        std::vector<WittElem> out(np);
        for (int q = 0; q < np; ++q) out[q] = R(pos[q].first, pos[q].second);
        return out;
    };
    const ZMod& z = r.zmod();
    const Kernel ker = zkernel(z, linear_map_matrix(r, np, np, residual));
    if (ker.free.empty()) return std::nullopt;
    std::uniform_int_distribution<i64> coef(0, z.M - 1);
    for (int attempt = 0; attempt < 40; ++attempt) {
        std::vector<i64> c(static_cast<size_t>(np) * r.s(), 0);
        for (const auto& gen : ker.free) {
            const i64 a = coef(rng);
            for (size_t q = 0; q < c.size(); ++q) c[q] = z.add(c[q], z.mul(a, gen[q]));
        }
        WMat X = to_mat(from_coords(r, c));
        if (!mat_is_invertible(r, X)) continue;
        if (g.kind == GroupKind::GSp) {
            const WMat J = form_matrix(r, g);
            auto Z = symplectic_adjustment(r, g, t, mat_mul(r, mat_transpose(X), mat_mul(r, J, X)));
            if (!Z) continue;
            X = mat_mul(r, X, *Z);
        }
        if (mat_mul(r, mat_inverse(r, X), mat_mul(r, b, sigma_G(r, g, X))) == D) return X;
    }
    return std::nullopt;
}

WMat apply_conj(const WittRing& r, const GroupPreset& g, const WMat& b, const WMat& h) {
    return mat_mul(r, mat_inverse(r, h), mat_mul(r, b, sigma_G(r, g, h)));
}

}  // namespace

GCrystal embed_crystal(const RingExtension& ext, const GCrystal& x) {
    return make_crystal(ext.big, x.preset, mat_embed(ext, x.ring, x.b), x.shift);
}

NormalForm normal_form(const GCrystal& x, const Cochar& mu, int ext_budget, std::uint64_t seed) {
    const WittRing& r = x.ring;
    const GroupPreset& g = x.preset;
    if (ext_budget <= 0) ext_budget = 8 * r.s();
    if (!is_mu_ordinary(x, mu)) throw NotOrdinary("crystal is not " + format_cochar(mu) + "-ordinary");
    const Cochar upsilon = dominant_rep(g, galois_action(g, mu));
    const Target t = make_target(g, upsilon, x.shift);
    Rng rng(seed);
    if (x.b == diag_ppow(r, t.w))
        return NormalForm{r, std::nullopt, WMat::identity(r, g.d), upsilon, 0, 0, x};

    const int cap = 4 * r.N() * g.s0 + 10;
    const auto weyl = weyl_group(g);
    State st{r, g, x.b, WMat::identity(r, g.d)};
    int iterations = 0, restarts = 0;
    const int random_restarts = 20;
    for (;; ++restarts) {
        // Restart k = 0 uses b itself, then Weyl representatives, then random G(O) elements.
        WMat h0 = WMat::identity(r, g.d);
        if (restarts > 0 && restarts < static_cast<int>(weyl.size())) h0 = weyl_matrix(r, g, weyl[restarts]);
        else if (restarts >= static_cast<int>(weyl.size())) h0 = random_group_element(r, g, rng);
        if (restarts >= static_cast<int>(weyl.size()) + random_restarts)
            throw BigCellFailure("no big-cell position after " + std::to_string(weyl.size() - 1) +
                                 " Weyl representatives and " + std::to_string(random_restarts) + " random elements");
        st.gacc = h0;
        st.b = apply_conj(r, g, x.b, h0);
        const CartanResult cr = cartan_decomposition(make_crystal(r, g, st.b, x.shift));
        st.conjugate(cr.k1);
        if (contract(st, t, cap, iterations)) break;
    }

    NormalForm out{r, std::nullopt, st.gacc, upsilon, iterations, restarts, x};
    for (int e = 1; e * r.s() <= ext_budget; ++e) {
        std::optional<RingExtension> ext;
        if (e > 1) ext = extend_ring(r, e);
        const WittRing& R = ext ? ext->big : r;
        const WMat b = ext ? mat_embed(*ext, r, st.b) : st.b;
        auto X = lang_step(R, g, t, b, rng);
        if (!X) continue;
        const WMat gtot = mat_mul(R, ext ? mat_embed(*ext, r, st.gacc) : st.gacc, *X);
        const WMat borig = ext ? mat_embed(*ext, r, x.b) : x.b;
        const WMat D = diag_ppow(R, t.w);
        if (!in_group_O(R, g, gtot) || apply_conj(R, g, borig, gtot) != D)
            throw PrecisionError("normal form failed the substitution check");
        out.ring = R;
        out.extension = ext;
        out.g = gtot;
        out.reduced = make_crystal(R, g, D, x.shift);
        return out;
    }
    throw ExtensionBudgetExceeded("Lang step needs residue degree above " + std::to_string(ext_budget));
}

namespace {

GCrystal with_shift(const GCrystal& x, int shift) {
    if (shift == x.shift) return x;
    const WittRing& r = x.ring;
    WMat b = mat_scale(r, x.b, r.pow(r.from_int(r.p()), static_cast<std::uint64_t>(shift - x.shift)));
    return make_crystal(r, x.preset, std::move(b), shift);
}

int extension_degree(const NormalForm& nf) { return nf.extension ? nf.extension->degree : 1; }

}  // namespace

Isomorphism isomorphism_witness(const GCrystal& x, const GCrystal& y, const Cochar& mu, int ext_budget,
                                std::uint64_t seed) {
    if (!(x.ring == y.ring) || !(x.preset == y.preset))
        throw InvalidParams("crystals live over different rings or groups");
    if (ext_budget <= 0) ext_budget = 8 * x.ring.s();
    const int shift = std::max(x.shift, y.shift);
    GCrystal cx = with_shift(x, shift), cy = with_shift(y, shift);
    for (;;) {
        const NormalForm nx = normal_form(cx, mu, ext_budget, seed);
        const NormalForm ny = normal_form(cy, mu, ext_budget, seed + 1);
        if (nx.ring == ny.ring) {
            const WittRing& R = nx.ring;
            const WMat theta = mat_mul(R, nx.g, mat_inverse(R, ny.g));
            const WMat bx = nx.extension ? mat_embed(*nx.extension, cx.ring, cx.b) : cx.b;
            const WMat by = ny.extension ? mat_embed(*ny.extension, cy.ring, cy.b) : cy.b;
            const WMat lhs = mat_mul(R, theta, mat_mul(R, by, mat_inverse(R, sigma_G(R, x.preset, theta))));
            if (!in_group_O(R, x.preset, theta) || lhs != bx)
                throw PrecisionError("isomorphism failed the substitution check");
            return Isomorphism{R, theta};
        }
        const int e = std::lcm(extension_degree(nx), extension_degree(ny));
        if (cx.ring.s() * e > ext_budget) throw ExtensionBudgetExceeded("no common extension within the budget");
        const RingExtension ext = extend_ring(cx.ring, e);
        cx = embed_crystal(ext, cx);
        cy = embed_crystal(ext, cy);
    }
}

std::vector<SlopePiece> slope_decomposition(const GCrystal& x) {
    const WittRing& r = x.ring;
    const GroupPreset& g = x.preset;
    Cochar w(g.d);
    for (int i = 0; i < g.d; ++i)
        for (int j = 0; j < g.d; ++j) {
            if (i == j) continue;
            if (!r.is_zero(x.b(i, j))) throw NotNormalForm("matrix is not diagonal");
        }
    for (int i = 0; i < g.d; ++i) {
        const int v = r.val(x.b(i, i));
        if (v >= r.N() || r.div_p_power(x.b(i, i), v) != r.one())
            throw NotNormalForm("diagonal entry " + std::to_string(i) + " is not a power of p");
        w[i] = v - x.shift;
    }
    if (!is_dominant(g, to_rational(w))) throw NotNormalForm(format_cochar(w) + " is not dominant");
    std::vector<SlopePiece> out;
    for (const auto& blk : levi_of(g, galois_average(g, w)))
        out.push_back(SlopePiece{blk.slope, blk.coords, submatrix(x.b, blk.coords, blk.coords)});
    return out;
}

}  // namespace fcrystal
