#include "fcrystal/deformation.hpp"

#include <algorithm>
#include <numeric>

#include "fcrystal/errors.hpp"

namespace fcrystal {

namespace {

std::vector<int> coords_at_least(const Cochar& w, int k) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(w.size()); ++i)
        if (w[i] >= k) out.push_back(i);
    return out;
}

bool is_symplectic(const WittRing& r, const GroupPreset& g, const WMat& u) {
    const WMat J = form_matrix(r, g);
    return mat_mul(r, mat_transpose(u), mat_mul(r, J, u)) == J;
}

int max_weight(const Cochar& w) { return w.empty() ? 0 : *std::max_element(w.begin(), w.end()); }

}  // namespace

HodgeFiltration filtration_from_cocharacter(const WittRing& r, const Cochar& mu) {
    return {coordinate_span(r, static_cast<int>(mu.size()), coords_at_least(mu, 1)), mu};
}

std::vector<WMat> hodge_flag(const WittRing& r, const Cochar& w, const WMat& u) {
    std::vector<WMat> flag;
    for (int k = 1; k <= max_weight(w); ++k)
        flag.push_back(mat_mul(r, u, coordinate_span(r, static_cast<int>(w.size()), coords_at_least(w, k))));
    return flag;
}

std::vector<std::pair<int, int>> unipotent_positions(const GroupPreset& g, const Cochar& w) {
    return opposite_unipotent_positions(g, w);
}

WMat random_adapted_unipotent(const WittRing& r, const GroupPreset& g, const Cochar& w, Rng& rng) {
    const int d = g.d;
    WMat X(r, d, d);
    for (auto [i, j] : unipotent_positions(g, w)) X(i, j) = r.scale(r.random(rng), r.p());
    if (g.kind != GroupKind::GSp) {
        for (int i = 0; i < d; ++i) X(i, i) = r.one();
        return X;
    }
    // Project onto the symplectic Lie algebra, then take the Cayley transform.
    const WittElem half = r.inverse(r.from_int(2));
    WMat S(r, d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const int ap = g.partner(a), bp = g.partner(b);
            const int sign = (a < g.n ? 1 : -1) * (bp < g.n ? 1 : -1);
            const WittElem mirror = sign > 0 ? X(bp, ap) : r.neg(X(bp, ap));
            S(a, b) = r.mul(r.add(X(a, b), mirror), half);
        }
    const WMat I = WMat::identity(r, d);
    return mat_mul(r, mat_add(r, I, S), mat_inverse(r, mat_sub(r, I, S)));
}

std::string adapted_violation(const WittRing& r, const GroupPreset& g, const Cochar& w, const WMat& u) {
    const int d = g.d;
    if (u.rows != d || u.cols != d) return "coordinate has the wrong size";
    std::vector<char> allowed(static_cast<size_t>(d) * d, 0);
    for (auto [i, j] : unipotent_positions(g, w)) allowed[static_cast<size_t>(i) * d + j] = 1;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const WittElem& x = u(i, j);
            if (i == j) {
                if (x != r.one()) return "diagonal entry " + std::to_string(i) + " is not 1";
            } else if (!r.is_zero(x)) {
                if (!allowed[static_cast<size_t>(i) * d + j])
                    return "entry (" + std::to_string(i) + "," + std::to_string(j) + ") lies outside the unipotent";
                if (r.val(x) < 1)
                    return "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not divisible by p";
            }
        }
    if (g.kind == GroupKind::GSp && !is_symplectic(r, g, u)) return "coordinate is not symplectic";
    return {};
}

WMat unipotent_from_flag(const WittRing& r, const std::vector<WMat>& flag, const Cochar& w) {
    const int d = static_cast<int>(w.size());
    if (*std::min_element(w.begin(), w.end()) < 0) throw InvalidParams("weights must be nonnegative");
    if (static_cast<int>(flag.size()) != max_weight(w)) throw InvalidParams("flag length differs from the top weight");
    WMat u = WMat::identity(r, d);
    for (int k = max_weight(w); k >= 1; --k) {
        const std::vector<int> top = coords_at_least(w, k);
        const WMat& gens = flag[k - 1];
        if (gens.rows != d) throw InvalidParams("flag step has the wrong number of rows");
        EchelonBasis eb;
        try {
            eb = canonical_basis(r, gens);
        } catch (const PrecisionError&) {
            throw NotLiftOfF("Fil^" + std::to_string(k) + " is not a direct summand");
        }
        if (eb.pivots != top) throw NotLiftOfF("Fil^" + std::to_string(k) + " reduces to a different subspace mod p");
        // Rows outside the pivots vanish mod p exactly when the reductions agree.
        for (int i = 0; i < d; ++i)
            if (!std::binary_search(top.begin(), top.end(), i))
                for (int j = 0; j < eb.basis.cols; ++j)
                    if (r.val(eb.basis(i, j)) < 1) throw NotLiftOfF("reductions mod p differ");
        // u[:, top] = T u[top, top]; the square block is already known from higher steps.
        const WMat cols = mat_mul(r, eb.basis, submatrix(u, top, top));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < static_cast<int>(top.size()); ++j) u(i, top[j]) = cols(i, j);
    }
    return u;
}

WMat coordinate_from_flag(const WittRing& r, const GroupPreset& g, const std::vector<WMat>& flag, const Cochar& w) {
    if (static_cast<int>(w.size()) != g.d) throw InvalidParams("weights do not match the group");
    const WMat u = unipotent_from_flag(r, flag, w);
    const std::string why = adapted_violation(r, g, w, u);
    if (!why.empty()) throw NotAdapted(why);
    return u;
}

WMat unipotent_coordinate(const WittRing& r, const GroupPreset& g, const HodgeFiltration& Fprime,
                          const HodgeFiltration& F, const Cochar& mu) {
    for (int v : mu)
        if (v != 0 && v != 1) throw InvalidParams("a single filtration step pins u down only for weights in {0, 1}");
    if (!same_submodule(r, F.basis, filtration_from_cocharacter(r, mu).basis))
        throw InvalidParams("F is not the filtration of mu");
    return coordinate_from_flag(r, g, {Fprime.basis}, mu);
}

HondaReport honda_validate(const HondaSystem& h) {
    const WittRing& r = h.ring;
    const int d = h.frob.rows;
    HondaReport rep;
    const WMat image = mat_mul(r, h.frob, h.twist);  // phi(D) = frob twist D
    rep.contains_pD = contained_in(r, mat_scale(r, WMat::identity(r, d), r.from_int(r.p())), image);
    if (!rep.contains_pD) rep.failures.push_back("p D is not contained in phi(D)");
    rep.cokernel_length = colength(r, image);
    rep.image_length = rep.cokernel_length - colength(r, hconcat(r, image, h.F.basis));
    try {
        rep.hodge_length = canonical_basis(r, h.F.basis).basis.cols * r.s();
    } catch (const PrecisionError&) {
        rep.failures.push_back("F is not a direct summand");
        return rep;
    }
    rep.hodge_matches = rep.image_length == rep.cokernel_length && rep.image_length == rep.hodge_length;
    if (!rep.hodge_matches)
        rep.failures.push_back("F/pF -> D/phi(D) is not an isomorphism (lengths " + std::to_string(rep.hodge_length) +
                               ", image " + std::to_string(rep.image_length) + ", cokernel " +
                               std::to_string(rep.cokernel_length) + ")");
    return rep;
}

FilteredModule honda_filtered_module(const HondaSystem& h, int k) {
    const WittRing& r = h.ring;
    const WMat fil1 = mat_mul(r, mat_inverse(r, h.twist), h.F.basis);
    return make_filtered_module(r, mat_mul(r, h.frob, h.twist), {fil1}, k);
}

Cochar normal_form_weights(const GCrystal& x) {
    slope_decomposition(x);
    Cochar w(x.preset.d);
    for (int i = 0; i < x.preset.d; ++i) w[i] = x.ring.val(x.b(i, i));
    return w;
}

CanonicalLift canonical_lift(const GCrystal& x, const Cochar& mu, int ext_budget, std::uint64_t seed) {
    CanonicalLift out{normal_form(x, mu, ext_budget, seed), {}, {}, {}, {}, false};
    const GCrystal& y = out.normal.reduced;
    const WittRing& R = y.ring;
    out.weights = normal_form_weights(y);
    const WMat twist = x.preset.kind == GroupKind::ResGL ? block_shift_matrix(R, x.preset) : WMat::identity(R, x.preset.d);
    out.system = HondaSystem{R, y.b, twist, filtration_from_cocharacter(R, out.weights)};
    for (const auto& piece : slope_decomposition(y)) {
        Cochar wb;
        for (int i : piece.coords) wb.push_back(out.weights[i]);
        out.block_coords.push_back(piece.coords);
        out.blocks.push_back(
            HondaSystem{R, piece.block, submatrix(twist, piece.coords, piece.coords), filtration_from_cocharacter(R, wb)});
    }
    if (x.preset.kind == GroupKind::GSp) {
        const WMat& F = out.system.F.basis;
        out.lagrangian = mat_is_zero(mat_mul(R, mat_transpose(F), mat_mul(R, form_matrix(R, x.preset), F)));
    }
    return out;
}

GammaP gamma_p(const GCrystal& x) {
    const WittRing& r = x.ring;
    const GroupPreset& g = x.preset;
    GammaP out;
    QCochar nu;
    try {
        Cochar w = normal_form_weights(x);
        for (auto& v : w) v -= x.shift;
        nu = galois_average(g, w);
    } catch (const NotNormalForm&) {
        nu = newton(x);
        if (!std::all_of(nu.begin(), nu.end(), [&](const Q& v) { return v == nu.front(); }))
            throw NotNormalForm("gamma_p needs a normal form unless the slopes are central");
    }
    out.nu = nu;
    for (const Q& v : nu) out.n = std::lcm(out.n, static_cast<int>(v.denominator()));
    for (const Q& v : nu) {
        const Q e = (v + x.shift) * out.n;
        out.exponents.push_back(static_cast<int>(e.numerator()));
    }
    out.gamma = diag_ppow(r, out.exponents);
    out.in_centralizer = mat_mul(r, x.b, sigma_G(r, g, out.gamma)) == mat_mul(r, out.gamma, x.b);
    return out;
}

bool UniquenessCertificate::ok() const {
    return fixed_point == is_identity && trivialized == predicted_trivial && (!fixed_point || predicted_trivial) &&
           fixed_forces_vanishing;
}

UniquenessCertificate uniqueness_certificate(const WittRing& r, const WMat& u, const GCrystal& x) {
    const GammaP gp = gamma_p(x);
    const int d = u.rows;
    const int N = r.N();
    UniquenessCertificate c;
    c.conjugate = u;
    c.predicted_trivial = true;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            const int m = gp.exponents[j] - gp.exponents[i];
            if (m <= 0) {
                if (!r.is_zero(u(i, j))) throw NotAdapted("entry is not contracted by gamma_p");
                continue;
            }
            const WittElem scaled = m >= N ? r.zero() : r.scale(u(i, j), r.zmod().ppow(m));
            c.conjugate(i, j) = scaled;
            CertificateEntry e{i, j, r.val(u(i, j)), m, scaled == u(i, j), r.val(u(i, j)) >= N - m};
            c.predicted_trivial = c.predicted_trivial && e.vanishes_below;
            c.entries.push_back(e);
        }
    const WMat I = WMat::identity(r, d);
    c.is_identity = u == I;
    c.fixed_point = c.conjugate == u;
    c.trivialized = c.conjugate == I;
    c.fixed_forces_vanishing = !c.fixed_point || c.predicted_trivial;
    return c;
}

SlopeChain slope_filtration(const GCrystal& x) {
    SlopeChain c;
    for (const auto& piece : slope_decomposition(x)) {
        c.slopes.push_back(piece.slope);
        c.blocks.push_back(piece.coords);
    }
    std::vector<int> acc;
    for (int a = static_cast<int>(c.blocks.size()); a-- > 0;) {
        acc.insert(acc.end(), c.blocks[a].begin(), c.blocks[a].end());
        std::sort(acc.begin(), acc.end());
        c.steps.push_back(acc);
    }
    return c;
}

bool preserves_slope_chain(const WittRing& r, const WMat& u, const SlopeChain& chain) {
    for (const auto& S : chain.steps)
        for (int j : S)
            for (int i = 0; i < u.rows; ++i)
                if (!std::binary_search(S.begin(), S.end(), i) && !r.is_zero(u(i, j))) return false;
    for (const auto& B : chain.blocks)
        if (submatrix(u, B, B) != WMat::identity(r, static_cast<int>(B.size()))) return false;
    return true;
}

std::vector<GradedPiece> slope_filtration_lift(const WittRing& r, const WMat& u, const GCrystal& x) {
    const Cochar w = normal_form_weights(x);
    const SlopeChain chain = slope_filtration(x);
    const std::vector<WMat> flag = hodge_flag(r, w, u);
    const WMat twist =
        x.preset.kind == GroupKind::ResGL ? block_shift_matrix(r, x.preset) : WMat::identity(r, x.preset.d);
    const int nblocks = static_cast<int>(chain.blocks.size());
    std::vector<GradedPiece> out;
    for (int a = 0; a < nblocks; ++a) {
        // Block a is the top of the step made of blocks a .. r; quotient by blocks a+1 .. r.
        const std::vector<int>& B = chain.blocks[a];
        const std::vector<int>& S = chain.steps[nblocks - 1 - a];
        GradedPiece piece;
        piece.coords = B;
        piece.frob = submatrix(x.b, B, B);
        Cochar wb;
        for (int i : B) wb.push_back(w[i]);
        bool canonical = piece.frob == diag_ppow(r, wb);
        for (int k = 1; k <= static_cast<int>(flag.size()); ++k) {
            const WMat inter = intersect_coordinates(r, flag[k - 1], S);
            const WMat graded = submatrix(inter, B, index_range(0, inter.cols));
            const WMat basis = canonical_basis(r, graded).basis;
            canonical = canonical && basis == coordinate_span(r, static_cast<int>(B.size()), coords_at_least(wb, k));
            piece.flag.push_back(basis);
        }
        const WMat fil1 =
            piece.flag.empty() ? WMat(r, static_cast<int>(B.size()), 0) : piece.flag.front();
        piece.system = HondaSystem{r, piece.frob, submatrix(twist, B, B), {fil1, wb}};
        piece.canonical = canonical;
        out.push_back(std::move(piece));
    }
    return out;
}

}  // namespace fcrystal
