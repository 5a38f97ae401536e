#include "fcrystal/crystal.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fcrystal/errors.hpp"

namespace fcrystal {

namespace {

int cochar_max(const Cochar& w) { return w.empty() ? 0 : *std::max_element(w.begin(), w.end()); }

// Rank entering the precision bounds: the size of one GL block, or the GSp matrix size.
int precision_rank(const GroupPreset& g) { return g.kind == GroupKind::ResGL ? g.n : g.d; }

WittElem ratio(const WittRing& r, const WittElem& num, const WittElem& pivot, int v) {
    // num / pivot for val(num) >= val(pivot) = v; exact in W/p^N.
    return r.mul(r.div_p_power(num, v), r.inverse(r.div_p_power(pivot, v)));
}

struct Elim {
    const WittRing& r;
    WMat A, K1, K2;  // b = K1 A K2 throughout

    void left(const WMat& E, const WMat& Einv) {
        A = mat_mul(r, E, A);
        K1 = mat_mul(r, K1, Einv);
    }
    void right(const WMat& E, const WMat& Einv) {
        A = mat_mul(r, A, E);
        K2 = mat_mul(r, Einv, K2);
    }
};

WMat elementary(const WittRing& r, int d, int i, int j, const WittElem& t) {
    WMat E = WMat::identity(r, d);
    E(i, j) = r.add(E(i, j), t);
    return E;
}

WMat swap_matrix(const WittRing& r, int d, int i, int j) {
    WMat P = WMat::identity(r, d);
    if (i == j) return P;
    P(i, i) = r.zero();
    P(j, j) = r.zero();
    P(i, j) = r.one();
    P(j, i) = r.one();
    return P;
}

// Smith form of a GL block over W by unit-pivot elimination; exponents descending.
struct GLCartan {
    std::vector<int> w;
    WMat k1, k2;
};

GLCartan gl_cartan(const WittRing& r, const WMat& b) {
    const int m = b.rows;
    Elim E{r, b, WMat::identity(r, m), WMat::identity(r, m)};
    std::vector<int> w(m);
    for (int t = 0; t < m; ++t) {
        int best = r.N(), bi = t, bj = t;
        for (int i = t; i < m; ++i)
            for (int j = t; j < m; ++j) {
                const int v = r.val(E.A(i, j));
                if (v < best) best = v, bi = i, bj = j;
            }
        if (best >= r.N()) throw PrecisionError("matrix is singular at working precision");
        WMat S = swap_matrix(r, m, t, bi);
        E.left(S, S);
        S = swap_matrix(r, m, t, bj);
        E.right(S, S);
        const WittElem piv = E.A(t, t);
        for (int i = t + 1; i < m; ++i) {
            if (r.is_zero(E.A(i, t))) continue;
            const WittElem f = ratio(r, E.A(i, t), piv, best);
            E.left(elementary(r, m, i, t, r.neg(f)), elementary(r, m, i, t, f));
        }
        for (int j = t + 1; j < m; ++j) {
            if (r.is_zero(E.A(t, j))) continue;
            const WittElem f = ratio(r, E.A(t, j), piv, best);
            E.right(elementary(r, m, t, j, r.neg(f)), elementary(r, m, t, j, f));
        }
        w[t] = best;
    }
    // A = diag(p^w u); move the units into K2.
    for (int t = 0; t < m; ++t) {
        const WittElem u = r.div_p_power(E.A(t, t), w[t]);
        for (int c = 0; c < m; ++c) E.K2(t, c) = r.mul(u, E.K2(t, c));
    }
    // Pivots come out nondecreasing; reverse to make them dominant.
    WMat R(r, m, m);
    for (int i = 0; i < m; ++i) R(i, m - 1 - i) = r.one();
    std::reverse(w.begin(), w.end());
    return GLCartan{w, mat_mul(r, E.K1, R), mat_mul(r, R, E.K2)};
}

int form_sign(const GroupPreset& g, int i) { return i < g.n ? 1 : -1; }  // J(i, i')

// I + t (E_ij + eps E_j'i'), or I + t E_ii' on long roots; symplectic for every t.
WMat root_element(const WittRing& r, const GroupPreset& g, int i, int j, const WittElem& t) {
    WMat E = WMat::identity(r, g.d);
    const int ip = g.partner(i), jp = g.partner(j);
    E(i, j) = r.add(E(i, j), t);
    if (j != ip) {
        const int eps = -form_sign(g, i) * form_sign(g, j);
        E(jp, ip) = r.add(E(jp, ip), eps > 0 ? t : r.neg(t));
    }
    return E;
}

// Signed permutation in Sp with P(to, from) = +-1, for to in the first half.
WMat sp_move(const WittRing& r, const GroupPreset& g, int from, int to) {
    std::vector<int> pi(g.d);
    std::iota(pi.begin(), pi.end(), 0);
    auto compose = [&](const std::vector<int>& step) {
        std::vector<int> out(g.d);
        for (int i = 0; i < g.d; ++i) out[i] = step[pi[i]];
        pi = out;
    };
    int cur = from;
    if (cur >= g.n) {
        std::vector<int> flip(g.d);
        std::iota(flip.begin(), flip.end(), 0);
        std::swap(flip[cur], flip[g.partner(cur)]);
        compose(flip);
        cur = g.partner(cur);
    }
    if (cur != to) {
        std::vector<int> sw(g.d);
        std::iota(sw.begin(), sw.end(), 0);
        std::swap(sw[cur], sw[to]);
        std::swap(sw[g.partner(cur)], sw[g.partner(to)]);
        compose(sw);
    }
    return weyl_matrix(r, g, pi);
}

struct GSpCartan {
    std::vector<int> w;
    WMat k1, k2;
};

GSpCartan gsp_cartan(const WittRing& r, const GroupPreset& g, const WMat& b) {
    const int d = g.d, n = g.n;
    Elim E{r, b, WMat::identity(r, d), WMat::identity(r, d)};
    for (int t = 0; t < n; ++t) {
        const int tp = g.partner(t);
        int best = r.N(), bi = t, bj = t;
        for (int i = t; i <= tp; ++i)
            for (int j = t; j <= tp; ++j) {
                const int v = r.val(E.A(i, j));
                if (v < best) best = v, bi = i, bj = j;
            }
        if (best >= r.N()) throw PrecisionError("matrix is singular at working precision");
        WMat P = sp_move(r, g, bi, t);
        E.left(P, mat_transpose(P));
        P = sp_move(r, g, bj, t);
        E.right(mat_transpose(P), P);
        const WittElem piv = E.A(t, t);
        for (int i = t + 1; i < tp; ++i) {
            if (r.is_zero(E.A(i, t))) continue;
            const WittElem f = ratio(r, E.A(i, t), piv, best);
            E.left(root_element(r, g, i, t, r.neg(f)), root_element(r, g, i, t, f));
        }
        if (!r.is_zero(E.A(tp, t))) {
            const WittElem f = ratio(r, E.A(tp, t), piv, best);
            E.left(root_element(r, g, tp, t, r.neg(f)), root_element(r, g, tp, t, f));
        }
        for (int j = t + 1; j < tp; ++j) {
            if (r.is_zero(E.A(t, j))) continue;
            const WittElem f = ratio(r, E.A(t, j), piv, best);
            E.right(root_element(r, g, t, j, r.neg(f)), root_element(r, g, t, j, f));
        }
        if (!r.is_zero(E.A(t, tp))) {
            const WittElem f = ratio(r, E.A(t, tp), piv, best);
            E.right(root_element(r, g, t, tp, r.neg(f)), root_element(r, g, t, tp, f));
        }
        // The form forces the rest of row and column t' to vanish modulo p^(N - best).
        for (int k = t; k <= tp; ++k) {
            if (k == tp) continue;
            for (WittElem* e : {&E.A(tp, k), &E.A(k, tp)}) {
                if (r.val(*e) < r.N() - best) throw NotInDoubleCoset("elimination left a non-symplectic remainder");
                *e = r.zero();
            }
        }
    }
    std::vector<int> w(d);
    std::vector<WittElem> u(d);
    for (int i = 0; i < d; ++i) {
        w[i] = r.val(E.A(i, i));
        if (w[i] >= r.N()) throw PrecisionError("matrix is singular at working precision");
        u[i] = r.div_p_power(E.A(i, i), w[i]);
    }
    for (int i = 1; i < n; ++i)
        if (w[i] + w[g.partner(i)] != w[0] + w[d - 1]) throw NotInDoubleCoset("elementary divisors are not GSp-symmetric");
    // Units in GSp form: u_i u_i' constant.
    const WittElem lam = r.mul(u[0], u[d - 1]);
    for (int i = 1; i < n; ++i) u[g.partner(i)] = r.mul(lam, r.inverse(u[i]));
    WMat U(r, d, d);
    for (int i = 0; i < d; ++i) U(i, i) = u[i];
    // Sort: larger weight of each pair to the first half, then descending.
    std::vector<std::pair<int, int>> tops;  // (weight, source index)
    for (int i = 0; i < n; ++i) {
        const int ip = g.partner(i);
        tops.emplace_back(std::max(w[i], w[ip]), w[i] >= w[ip] ? i : ip);
    }
    std::stable_sort(tops.begin(), tops.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<int> pi(d);
    for (int k = 0; k < n; ++k) {
        pi[tops[k].second] = k;
        pi[g.partner(tops[k].second)] = g.partner(k);
    }
    WMat W = weyl_matrix(r, g, pi);
    std::vector<int> ws(d);
    for (int i = 0; i < d; ++i) ws[pi[i]] = w[i];
    return GSpCartan{ws, mat_mul(r, E.K1, mat_transpose(W)), mat_mul(r, W, mat_mul(r, U, E.K2))};
}

}  // namespace

WMat form_matrix(const WittRing& r, const GroupPreset& g) {
    if (g.kind != GroupKind::GSp) return WMat::identity(r, g.d);
    WMat J(r, g.d, g.d);
    for (int i = 0; i < g.d; ++i) J(i, g.partner(i)) = form_sign(g, i) > 0 ? r.one() : r.neg(r.one());
    return J;
}

WMat block_shift_matrix(const WittRing& r, const GroupPreset& g) {
    WMat P(r, g.d, g.d);
    for (int i = 0; i < g.d; ++i) P(g.galois_action[i], i) = r.one();
    return P;
}

WMat sigma_G(const WittRing& r, const GroupPreset& g, const WMat& m, long k) {
    if (g.kind != GroupKind::ResGL) return mat_frobenius(r, m, k);
    // P^k sigma^k(m) P^-k: entry (i, j) comes from (i - k n, j - k n).
    const long shift = ((k % g.s0) + g.s0) % g.s0 * g.n;
    WMat out(r, m.rows, m.cols);
    for (int i = 0; i < g.d; ++i)
        for (int j = 0; j < g.d; ++j)
            out(i, j) = r.frobenius(m((i - shift + g.d) % g.d, (j - shift + g.d) % g.d), k);
    return out;
}

WMat gl_frobenius_matrix(const GCrystal& x) {
    if (x.preset.kind != GroupKind::ResGL) return x.b;
    return mat_mul(x.ring, x.b, block_shift_matrix(x.ring, x.preset));
}

WittElem gsp_similitude(const WittRing& r, const GroupPreset& g, const WMat& m) {
    const WMat J = form_matrix(r, g);
    const WMat A = mat_mul(r, mat_transpose(m), mat_mul(r, J, m));
    const WittElem c = A(0, g.d - 1);
    if (A != mat_scale(r, J, c)) throw NotInGroup("matrix does not preserve the symplectic form up to a scalar");
    return c;
}

bool in_group_shape(const WittRing& r, const GroupPreset& g, const WMat& m) {
    if (m.rows != g.d || m.cols != g.d) return false;
    if (g.kind == GroupKind::ResGL) {
        for (int i = 0; i < g.d; ++i)
            for (int j = 0; j < g.d; ++j)
                if (!position_in_group(g, i, j) && !r.is_zero(m(i, j))) return false;
    }
    if (g.kind == GroupKind::GSp) {
        try {
            gsp_similitude(r, g, m);
        } catch (const NotInGroup&) {
            return false;
        }
    }
    return true;
}

bool in_group_O(const WittRing& r, const GroupPreset& g, const WMat& m) {
    return in_group_shape(r, g, m) && mat_is_invertible(r, m);
}

GCrystal make_crystal(const WittRing& r, const GroupPreset& g, WMat b, int shift) {
    if (b.rows != g.d || b.cols != g.d)
        throw InvalidParams("matrix is " + std::to_string(b.rows) + "x" + std::to_string(b.cols) + ", group " +
                            g.name() + " needs " + std::to_string(g.d));
    if (shift < 0) throw InvalidParams("negative shift");
    GCrystal x{r, g, std::move(b), shift, r.zero()};
    if (g.kind == GroupKind::ResGL && !in_group_shape(r, g, x.b))
        throw NotInGroup("ResGL matrices must be block diagonal");
    if (g.kind == GroupKind::GSp) x.similitude = gsp_similitude(r, g, x.b);
    if (r.val(determinant(r, x.b)) >= r.N()) throw PrecisionError("matrix is singular at working precision");
    return x;
}

GCrystal crystal_from_laurent(const WittRing& r, const GroupPreset& g, const std::vector<LaurentElem>& entries) {
    if (static_cast<int>(entries.size()) != g.d * g.d)
        throw InvalidParams("expected " + std::to_string(g.d * g.d) + " entries, got " + std::to_string(entries.size()));
    int shift = 0;
    for (const auto& e : entries)
        if (!e.zero) shift = std::max(shift, -e.val);
    WMat b(r, g.d, g.d);
    for (size_t i = 0; i < entries.size(); ++i) b.a[i] = laurent_to_integral(r, entries[i], shift);
    return make_crystal(r, g, std::move(b), shift);
}

WMat weyl_matrix(const WittRing& r, const GroupPreset& g, const std::vector<int>& pi) {
    WMat P(r, g.d, g.d);
    for (int i = 0; i < g.d; ++i) {
        int sign = 1;
        if (g.kind == GroupKind::GSp && i >= g.n) {
            const int k = g.partner(i);
            sign = form_sign(g, k) * form_sign(g, pi[k]);
        }
        P(pi[i], i) = sign > 0 ? r.one() : r.neg(r.one());
    }
    return P;
}

WMat cochar_matrix(const WittRing& r, const Cochar& mu) { return diag_ppow(r, mu); }

WMat random_group_element(const WittRing& r, const GroupPreset& g, Rng& rng) {
    switch (g.kind) {
        case GroupKind::GL: return random_invertible(r, g.d, rng);
        case GroupKind::ResGL: {
            WMat m(r, g.d, g.d);
            for (int b = 0; b < g.s0; ++b) {
                WMat blk = random_invertible(r, g.n, rng);
                for (int i = 0; i < g.n; ++i)
                    for (int j = 0; j < g.n; ++j) m(b * g.n + i, b * g.n + j) = blk(i, j);
            }
            return m;
        }
        case GroupKind::GSp: {
            const WMat J = form_matrix(r, g);
            const WittElem half = r.inverse(r.from_int(2));
            auto cayley = [&]() {
                for (;;) {
                    WMat M = random_matrix(r, g.d, g.d, rng);
                    // Projection to sp: (M + J M^T J) / 2.
                    WMat X = mat_scale(r, mat_add(r, M, mat_mul(r, J, mat_mul(r, mat_transpose(M), J))), half);
                    WMat I = WMat::identity(r, g.d);
                    WMat den = mat_sub(r, I, X);
                    if (!mat_is_invertible(r, den)) continue;
                    return mat_mul(r, mat_add(r, I, X), mat_inverse(r, den));
                }
            };
            WMat T(r, g.d, g.d);
            const WittElem lam = r.random_unit(rng);
            for (int i = 0; i < g.n; ++i) {
                T(i, i) = r.random_unit(rng);
                T(g.partner(i), g.partner(i)) = r.mul(lam, r.inverse(T(i, i)));
            }
            auto W = weyl_group(g);
            WMat w = weyl_matrix(r, g, W[rng() % W.size()]);
            return mat_mul(r, cayley(), mat_mul(r, T, mat_mul(r, w, cayley())));
        }
    }
    return WMat::identity(r, g.d);
}

GCrystal sigma_conjugate(const GCrystal& x, const WMat& g) {
    const WittRing& r = x.ring;
    if (!in_group_shape(r, x.preset, g)) throw NotInGroup("conjugating matrix is not in " + x.preset.name());
    if (!mat_is_invertible(r, g)) throw NotIntegral("conjugating matrix is not invertible over W");
    WMat b = mat_mul(r, mat_inverse(r, g), mat_mul(r, x.b, sigma_G(r, x.preset, g)));
    return make_crystal(r, x.preset, std::move(b), x.shift);
}

CartanResult cartan_decomposition(const GCrystal& x) {
    const WittRing& r = x.ring;
    const GroupPreset& g = x.preset;
    CartanResult out;
    if (g.kind == GroupKind::GSp) {
        GSpCartan c = gsp_cartan(r, g, x.b);
        out.mu = c.w;
        out.k1 = c.k1;
        out.k2 = c.k2;
    } else {
        out.k1 = WMat(r, g.d, g.d);
        out.k2 = WMat(r, g.d, g.d);
        const int blocks = g.kind == GroupKind::ResGL ? g.s0 : 1;
        const int m = g.d / blocks;
        for (int blk = 0; blk < blocks; ++blk) {
            auto idx = index_range(blk * m, (blk + 1) * m);
            GLCartan c = gl_cartan(r, submatrix(x.b, idx, idx));
            out.mu.insert(out.mu.end(), c.w.begin(), c.w.end());
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    out.k1(idx[i], idx[j]) = c.k1(i, j);
                    out.k2(idx[i], idx[j]) = c.k2(i, j);
                }
        }
    }
    const int top = cochar_max(out.mu);
    if (r.N() < precision_rank(g) * top + 1)
        throw PrecisionError("Hodge exponent " + std::to_string(top) + " needs precision at least " +
                             std::to_string(precision_rank(g) * top + 1));
    for (auto& w : out.mu) w -= x.shift;
    return out;
}

Cochar cartan(const GCrystal& x) { return cartan_decomposition(x).mu; }

QCochar newton(const GCrystal& x) {
    const WittRing& r = x.ring;
    const GroupPreset& g = x.preset;
    const Cochar hodge = cartan(x);
    int top = 0, total = 0;
    for (int w : hodge) top = std::max(top, w + x.shift), total += w + x.shift;
    // The determinant of the s-fold product has valuation s * total and must stay visible.
    const int need = std::max(r.s() * precision_rank(g) * top, r.s() * total) + 2;
    if (r.N() < need)
        throw PrecisionError("Newton polygon needs precision at least " + std::to_string(need));

    const WMat B = gl_frobenius_matrix(x);
    WMat Nb = B;
    for (int k = 1; k < r.s(); ++k) Nb = mat_mul(r, Nb, mat_frobenius(r, B, k));
    const auto cp = charpoly(r, Nb);
    const int d = g.d;
    std::vector<int> v(d + 1);
    for (int i = 0; i <= d; ++i) v[i] = r.val(cp[i]);
    if (v[0] >= r.N()) throw PrecisionError("determinant vanishes at working precision");
    // Lower convex hull from (0, v0) to (d, 0) over the known points.
    std::vector<Q> slopes;
    int i0 = 0;
    while (i0 < d) {
        int best = -1;
        Q best_slope;
        for (int i = i0 + 1; i <= d; ++i) {
            if (v[i] >= r.N()) continue;
            Q sl(v[i0] - v[i], i - i0);
            if (best < 0 || sl > best_slope || (sl == best_slope && i > best)) best = i, best_slope = sl;
        }
        // Unknown coefficients must lie strictly above the segment.
        for (int i = i0 + 1; i < best; ++i)
            if (v[i] >= r.N() && Q(v[i0]) - best_slope * (i - i0) >= Q(r.N()))
                throw PrecisionError("Newton polygon vertex is not determined at working precision");
        for (int i = i0; i < best; ++i) slopes.push_back(best_slope / r.s());
        i0 = best;
    }
    std::sort(slopes.begin(), slopes.end(), std::greater<>());
    QCochar nu(d);
    if (g.kind == GroupKind::ResGL) {
        // Each slope of b * P occurs with multiplicity divisible by s0; split it evenly.
        std::vector<Q> per_block;
        for (size_t i = 0; i < slopes.size();) {
            size_t j = i;
            while (j < slopes.size() && slopes[j] == slopes[i]) ++j;
            if ((j - i) % g.s0 != 0) throw PrecisionError("slope multiplicities are not compatible with the blocks");
            for (size_t k = 0; k < (j - i) / g.s0; ++k) per_block.push_back(slopes[i]);
            i = j;
        }
        for (int blk = 0; blk < g.s0; ++blk)
            for (int i = 0; i < g.n; ++i) nu[blk * g.n + i] = per_block[i];
    } else {
        nu.assign(slopes.begin(), slopes.end());
    }
    for (auto& s : nu) s -= x.shift;
    if (g.kind == GroupKind::GSp) {
        const Q c = nu[0] + nu[d - 1];
        for (int i = 0; i < g.n; ++i)
            if (nu[i] + nu[g.partner(i)] != c) throw NotInGroup("Newton slopes are not symmetric");
    }
    return nu;
}

i64 kottwitz(const GCrystal& x) {
    const WittRing& r = x.ring;
    if (x.preset.kind == GroupKind::GSp) {
        const int v = r.val(x.similitude);
        if (v >= r.N()) throw PrecisionError("similitude vanishes at working precision");
        return v - 2 * x.shift;
    }
    const int v = r.val(determinant(r, x.b));
    if (v >= r.N()) throw PrecisionError("determinant vanishes at working precision");
    return v - static_cast<i64>(x.preset.d) * x.shift;
}

Invariants invariants(const GCrystal& x) { return Invariants{cartan(x), newton(x), kottwitz(x)}; }

bool admissible(const GCrystal& x, const Cochar& mu) {
    const GroupPreset& g = x.preset;
    if (!is_dominant(g, to_rational(mu))) throw NotDominant(format_cochar(mu) + " is not dominant");
    if (kottwitz(x) != kottwitz_of_cocharacter(g, mu)) return false;
    return leq_dominance(g, newton(x), galois_average(g, mu));
}

bool is_mu_ordinary(const GCrystal& x, const Cochar& mu) {
    const GroupPreset& g = x.preset;
    if (!is_dominant(g, to_rational(mu))) throw NotDominant(format_cochar(mu) + " is not dominant");
    if (cartan(x) != dominant_rep(g, galois_action(g, mu))) return false;
    return newton(x) == galois_average(g, mu);
}

}  // namespace fcrystal
