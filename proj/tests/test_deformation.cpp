#include "doctest.h"

#include "fcrystal/deformation.hpp"
#include "fcrystal/errors.hpp"

using namespace fcrystal;

namespace {

WMat from_ints(const WittRing& r, const std::vector<std::vector<i64>>& m) {
    WMat A(r, static_cast<int>(m.size()), static_cast<int>(m[0].size()));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) A(i, j) = r.from_int(m[i][j]);
    return A;
}

GCrystal diagonal_crystal(const WittRing& r, const GroupPreset& g, const Cochar& w) {
    return make_crystal(r, g, cochar_matrix(r, w));
}

struct Layout {
    GroupPreset g;
    Cochar w;  // dominant weights of the normal form
};

std::vector<Layout> layouts() {
    return {{make_gl(2), {1, 0}},          {make_gl(3), {1, 1, 0}},       {make_gl(3), {2, 1, 0}},
            {make_gsp(4), {1, 1, 0, 0}},   {make_gsp(4), {2, 1, 1, 0}},   {make_resgl(2, 2), {0, 0, 1, 0}},
            {make_resgl(3, 2), {1, 0, 0, 1, 1, 0}}};
}

bool minuscule(const Cochar& w) {
    for (int v : w)
        if (v > 1) return false;
    return true;
}

}  // namespace

TEST_CASE("filtration from a cocharacter") {
    const WittRing r = make_ring(3, 1, 4);
    CHECK(filtration_from_cocharacter(r, {1, 0}).basis == from_ints(r, {{1}, {0}}));
    CHECK(filtration_from_cocharacter(r, {0, 0}).basis.cols == 0);
    CHECK(filtration_from_cocharacter(r, {1, 1, 0}).basis == from_ints(r, {{1, 0}, {0, 1}, {0, 0}}));
}

TEST_CASE("unipotent coordinates of lifted filtrations") {
    const WittRing r = make_ring(3, 1, 4);
    const auto gl2 = make_gl(2);
    const HodgeFiltration F = filtration_from_cocharacter(r, {1, 0});
    CHECK(unipotent_coordinate(r, gl2, F, F, {1, 0}) == WMat::identity(r, 2));

    const WMat u = unipotent_coordinate(r, gl2, {from_ints(r, {{1}, {3}}), {}}, F, {1, 0});
    CHECK(u == from_ints(r, {{1, 0}, {3, 1}}));
    // Any generator of the same line gives the same coordinate.
    CHECK(unipotent_coordinate(r, gl2, {from_ints(r, {{2}, {6}}), {}}, F, {1, 0}) == u);

    CHECK_THROWS_AS(unipotent_coordinate(r, gl2, {from_ints(r, {{0}, {1}}), {}}, F, {1, 0}), NotLiftOfF);
    CHECK_THROWS_AS(unipotent_coordinate(r, gl2, {from_ints(r, {{1}, {1}}), {}}, F, {1, 0}), NotLiftOfF);

    // A GL unipotent with a single entry in the Siegel block breaks the symplectic symmetry.
    const WittRing R = make_ring(5, 1, 4);
    const auto gsp = make_gsp(4);
    WMat v = WMat::identity(R, 4);
    v(2, 0) = R.from_int(5);
    const HodgeFiltration Fs = filtration_from_cocharacter(R, {1, 1, 0, 0});
    CHECK_THROWS_AS(unipotent_coordinate(R, gsp, {mat_mul(R, v, Fs.basis), {}}, Fs, {1, 1, 0, 0}), NotAdapted);
    v(3, 1) = R.from_int(5);  // the mirrored entry restores it
    CHECK(unipotent_coordinate(R, gsp, {mat_mul(R, v, Fs.basis), {}}, Fs, {1, 1, 0, 0}) == v);
}

TEST_CASE("coordinates round trip through the lifted flag") {
    Rng rng(5);
    for (const auto& L : layouts()) {
        const WittRing r = make_ring(L.g.kind == GroupKind::GSp ? 5 : 3, 2, 5);
        INFO(L.g.name(), " ", format_cochar(L.w));
        for (int t = 0; t < 20; ++t) {
            const WMat u = random_adapted_unipotent(r, L.g, L.w, rng);
            CHECK(adapted_violation(r, L.g, L.w, u).empty());
            CHECK(coordinate_from_flag(r, L.g, hodge_flag(r, L.w, u), L.w) == u);
        }
    }
}

TEST_CASE("canonical lift of an ordinary crystal") {
    const WittRing r = make_ring(3, 1, 5);
    const CanonicalLift c = canonical_lift(diagonal_crystal(r, make_gl(2), {1, 0}), {1, 0});
    CHECK(c.system.frob == from_ints(r, {{3, 0}, {0, 1}}));
    CHECK(c.system.F.basis == from_ints(r, {{1}, {0}}));
    const HondaReport rep = honda_validate(c.system);
    CHECK(rep.ok());
    CHECK(rep.cokernel_length == 1);
    REQUIRE(c.blocks.size() == 2);
    CHECK(c.blocks[0].F.basis.cols == 1);
    CHECK(c.blocks[1].F.basis.cols == 0);

    Rng rng(2);
    const WittRing R = make_ring(5, 1, 6);
    const auto gsp = make_gsp(4);
    GCrystal x = sigma_conjugate(diagonal_crystal(R, gsp, {1, 1, 0, 0}), random_group_element(R, gsp, rng));
    const CanonicalLift cs = canonical_lift(x, {1, 1, 0, 0});
    CHECK(cs.lagrangian);
    CHECK(honda_validate(cs.system).ok());
    for (const auto& b : cs.blocks) CHECK(honda_validate(b).ok());

    const auto res = make_resgl(2, 2);
    GCrystal xr = sigma_conjugate(diagonal_crystal(R, res, {0, 0, 1, 0}), random_group_element(R, res, rng));
    const CanonicalLift cr = canonical_lift(xr, {1, 0, 0, 0});
    CHECK(cr.weights == Cochar{0, 0, 1, 0});
    CHECK(honda_validate(cr.system).ok());
}

TEST_CASE("Honda conditions detect wrong filtrations") {
    const WittRing r = make_ring(3, 2, 4);
    const WMat I = WMat::identity(r, 2);
    const WMat b = from_ints(r, {{3, 0}, {0, 1}});
    CHECK(honda_validate({r, b, I, {from_ints(r, {{1}, {0}}), {}}}).ok());
    const HondaReport bad = honda_validate({r, b, I, {from_ints(r, {{0}, {1}}), {}}});
    CHECK(bad.contains_pD);
    CHECK_FALSE(bad.hodge_matches);
    CHECK(bad.image_length == 0);

    const WMat pI = from_ints(r, {{3, 0}, {0, 3}});
    const HondaReport full = honda_validate({r, pI, I, {I, {}}});
    CHECK(full.contains_pD);
    CHECK(full.hodge_matches);
    CHECK(full.cokernel_length == 4);  // two coordinates, residue degree 2
    CHECK_FALSE(honda_validate({r, pI, I, {from_ints(r, {{1}, {0}}), {}}}).hodge_matches);

    const HondaReport deep = honda_validate({r, from_ints(r, {{9, 0}, {0, 1}}), I, {from_ints(r, {{1}, {0}}), {}}});
    CHECK_FALSE(deep.contains_pD);
}

TEST_CASE("adapted lifts are Honda systems and truncate to filtered modules") {
    Rng rng(11);
    for (const auto& L : layouts()) {
        if (!minuscule(L.w)) continue;
        const WittRing r = make_ring(L.g.kind == GroupKind::GSp ? 5 : 3, 2, 5);
        const GCrystal x = diagonal_crystal(r, L.g, L.w);
        const WMat twist = L.g.kind == GroupKind::ResGL ? block_shift_matrix(r, L.g) : WMat::identity(r, L.g.d);
        INFO(L.g.name());
        for (int t = 0; t < 10; ++t) {
            const WMat u = random_adapted_unipotent(r, L.g, L.w, rng);
            const HondaSystem h{r, x.b, twist, {mat_mul(r, u, filtration_from_cocharacter(r, L.w).basis), L.w}};
            CHECK(honda_validate(h).ok());
            for (int k = 1; k <= 4; ++k) {
                const FilteredModuleCheck c = check_filtered_module(honda_filtered_module(h, k));
                CHECK_MESSAGE(c.ok(), (c.failures.empty() ? "" : c.failures.front()));
            }
        }
    }
}

TEST_CASE("filtered module checks catch broken data") {
    const WittRing r = make_ring(3, 1, 4);
    FilteredModule m = make_filtered_module(r, from_ints(r, {{3, 0}, {0, 1}}), {from_ints(r, {{1}, {0}})}, 3);
    CHECK(check_filtered_module(m).ok());
    CHECK(check_filtered_module(truncate(m, 1)).ok());
    m.phi[1](0, 0) = m.ring.from_int(2);
    CHECK_FALSE(check_filtered_module(m).commuting);
    CHECK_THROWS_AS(make_filtered_module(r, from_ints(r, {{1, 0}, {0, 3}}), {from_ints(r, {{1}, {0}})}, 3), NotIntegral);
    CHECK_THROWS_AS(make_filtered_module(r, from_ints(r, {{3, 0}, {0, 1}}), {from_ints(r, {{1}, {0}})}, 4), PrecisionError);
}

TEST_CASE("gamma_p") {
    const WittRing r = make_ring(3, 1, 6);
    GammaP a = gamma_p(diagonal_crystal(r, make_gl(2), {1, 0}));
    CHECK(a.n == 1);
    CHECK(a.gamma == from_ints(r, {{3, 0}, {0, 1}}));
    CHECK(a.in_centralizer);

    GammaP b = gamma_p(make_crystal(r, make_gl(2), from_ints(r, {{0, 1}, {3, 0}})));
    CHECK(b.n == 2);
    CHECK(b.gamma == from_ints(r, {{3, 0}, {0, 3}}));
    CHECK(b.in_centralizer);

    GammaP c = gamma_p(diagonal_crystal(r, make_gl(3), {1, 1, 0}));
    CHECK(c.gamma == from_ints(r, {{3, 0, 0}, {0, 3, 0}, {0, 0, 1}}));

    // ResGL(2,2), upsilon = (0,0|1,0): nu = (1/2,0|1/2,0), n = 2.
    const auto res = make_resgl(2, 2);
    GammaP d = gamma_p(diagonal_crystal(make_ring(3, 2, 6), res, {0, 0, 1, 0}));
    CHECK(d.n == 2);
    CHECK(d.exponents == Cochar{1, 0, 1, 0});
    CHECK(d.in_centralizer);

    CHECK_THROWS_AS(gamma_p(make_crystal(r, make_gl(2), from_ints(r, {{3, 1}, {0, 1}}))), NotNormalForm);
}

TEST_CASE("uniqueness certificate") {
    const WittRing r = make_ring(3, 1, 4);
    const GCrystal x = diagonal_crystal(r, make_gl(2), {1, 0});
    const UniquenessCertificate id = uniqueness_certificate(r, WMat::identity(r, 2), x);
    CHECK(id.is_identity);
    CHECK(id.fixed_point);
    CHECK(id.ok());

    const UniquenessCertificate c = uniqueness_certificate(r, from_ints(r, {{1, 0}, {3, 1}}), x);
    REQUIRE(c.entries.size() == 1);
    CHECK(c.entries[0].scaling == 1);
    CHECK(c.conjugate(1, 0) == r.from_int(9));
    CHECK_FALSE(c.fixed_point);
    CHECK(c.ok());

    CHECK_THROWS_AS(uniqueness_certificate(r, from_ints(r, {{1, 3}, {0, 1}}), x), NotAdapted);
}

TEST_CASE("uniqueness certificate, every valuation at rank 2") {
    const int N = 6;
    for (int gap = 1; gap <= 2; ++gap) {
        const WittRing r = make_ring(3, 1, N);
        const GCrystal x = diagonal_crystal(r, make_gl(2), {gap, 0});
        for (int v = 1; v < N; ++v)
            for (i64 unit : {1, 2, 4, 5}) {
                WMat u = WMat::identity(r, 2);
                u(1, 0) = r.scale(r.from_int(unit), r.zmod().ppow(v));
                const UniquenessCertificate c = uniqueness_certificate(r, u, x);
                CHECK(c.ok());
                CHECK_FALSE(c.fixed_point);
                CHECK(c.trivialized == (v >= N - gap));
            }
    }
}

TEST_CASE("slope filtration") {
    const WittRing r = make_ring(3, 1, 6);
    const SlopeChain two = slope_filtration(diagonal_crystal(r, make_gl(2), {1, 0}));
    REQUIRE(two.steps.size() == 2);
    CHECK(two.steps[0] == std::vector<int>{1});
    CHECK(two.steps[1] == std::vector<int>{0, 1});

    const SlopeChain three = slope_filtration(diagonal_crystal(r, make_gl(3), {2, 1, 0}));
    REQUIRE(three.steps.size() == 3);
    CHECK(three.steps[0].size() == 1);
    CHECK(three.steps[1].size() == 2);
    CHECK(three.steps[2].size() == 3);
    CHECK(three.slopes == std::vector<Q>{Q(2), Q(1), Q(0)});

    Rng rng(3);
    for (const auto& L : layouts()) {
        const WittRing R = make_ring(L.g.kind == GroupKind::GSp ? 5 : 3, 2, 5);
        const SlopeChain c = slope_filtration(diagonal_crystal(R, L.g, L.w));
        for (int t = 0; t < 10; ++t) CHECK(preserves_slope_chain(R, random_adapted_unipotent(R, L.g, L.w, rng), c));
    }
    CHECK_FALSE(preserves_slope_chain(r, from_ints(r, {{1, 3}, {0, 1}}), two));
}

TEST_CASE("graded pieces of lifted slope filtrations are canonical") {
    Rng rng(21);
    for (const auto& L : layouts()) {
        const WittRing r = make_ring(L.g.kind == GroupKind::GSp ? 5 : 3, 2, 5);
        const GCrystal x = diagonal_crystal(r, L.g, L.w);
        INFO(L.g.name(), " ", format_cochar(L.w));
        const auto base = slope_filtration_lift(r, WMat::identity(r, L.g.d), x);
        for (const auto& piece : base) CHECK(piece.canonical);
        for (int t = 0; t < 10; ++t) {
            const auto pieces = slope_filtration_lift(r, random_adapted_unipotent(r, L.g, L.w, rng), x);
            REQUIRE(pieces.size() == base.size());
            for (size_t a = 0; a < pieces.size(); ++a) {
                CHECK(pieces[a].canonical);
                CHECK(pieces[a].flag == base[a].flag);
                if (minuscule(L.w)) CHECK(honda_validate(pieces[a].system).ok());
            }
        }
    }
}
