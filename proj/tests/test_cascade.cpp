#include "doctest.h"

#include "fcrystal/cascade.hpp"
#include "fcrystal/errors.hpp"

using namespace fcrystal;

namespace {

DefPoint two_slope_point(const WittRing& r, i64 entry) {
    WMat u = WMat::identity(r, 2);
    u(1, 0) = r.from_int(entry);
    return {1, 2, u};
}

}  // namespace

TEST_CASE("cascade layouts") {
    const WittRing r = make_ring(3, 2, 6);
    const CascadeLayout gl3 = make_layout(r, make_gl(3), {2, 1, 0});
    CHECK(gl3.r() == 3);
    CHECK(gl3.c == 1);
    CHECK(gl3.coords(2, 3) == std::vector<int>{1, 2});

    const CascadeLayout res = make_layout(r, make_resgl(2, 2), {0, 0, 1, 0});
    CHECK(res.r() == 2);
    CHECK(res.c == 2);
    CHECK(res.slopes == std::vector<Q>{Q(1, 2), Q(0)});
    CHECK(res.coords(1, 2) == std::vector<int>{0, 2, 1, 3});

    WMat b = WMat::identity(r, 2);
    b(0, 1) = r.one();
    CHECK_THROWS_AS(make_layout(make_crystal(r, make_gl(2), b)), NotNormalForm);
    CHECK(make_layout(make_crystal(r, make_gl(2), WMat::identity(r, 2))).r() == 1);
}

TEST_CASE("restriction maps") {
    Rng rng(1);
    const WittRing r = make_ring(3, 1, 6);
    const CascadeLayout L = make_layout(r, make_gl(3), {2, 1, 0});
    const DefPoint x = random_point(L, 1, 3, rng);
    CHECK(restrict(L, x, 1, 3).u == x.u);
    CHECK(restrict(L, restrict(L, x, 1, 2), 2, 2).u == restrict(L, restrict(L, x, 2, 3), 2, 2).u);
    for (int t = 0; t < 20; ++t) {
        const DefPoint y = random_point(L, 1, 3, rng);
        CHECK(restrict(L, restrict(L, y, 2, 3), 2, 2).u == restrict(L, restrict(L, y, 1, 2), 2, 2).u);
        CHECK(restrict(L, y, 2, 3).u == submatrix(y.u, {1, 2}, {1, 2}));
    }
    CHECK_THROWS_AS(restrict(L, restrict(L, x, 2, 3), 1, 2), BadIndices);
    CHECK_THROWS_AS(restrict(L, x, 2, 4), BadIndices);
}

TEST_CASE("fiber sums on two slopes") {
    const WittRing r = make_ring(3, 1, 3);
    const CascadeLayout L = make_layout(r, make_gl(2), {1, 0});
    const DefPoint s = fiber_sum(L, two_slope_point(r, 3), two_slope_point(r, 6), 2, 2);
    CHECK(s.u(1, 0) == r.from_int(9));
    CHECK(is_point(L, s));
    CHECK(fiber_sum(L, two_slope_point(r, 3), zero_point(L, 1, 2), 1, 1).u == two_slope_point(r, 3).u);
    CHECK_FALSE(is_point(L, two_slope_point(r, 1)));
    CHECK_FALSE(is_point(L, DefPoint{1, 2, mat_transpose(two_slope_point(r, 3).u)}));
}

TEST_CASE("fiber sums need a common base point") {
    Rng rng(2);
    const WittRing r = make_ring(3, 1, 6);
    const CascadeLayout L = make_layout(r, make_gl(3), {2, 1, 0});
    DefPoint x = zero_point(L, 1, 3), y = zero_point(L, 1, 3);
    x.u(2, 1) = r.from_int(3);
    CHECK_THROWS_AS(fiber_sum(L, x, y, 2, 3), DifferentFibers);
    CHECK_NOTHROW(fiber_sum(L, x, y, 1, 2));
    CHECK_THROWS_AS(coset_combine(L, x, y, y, 2, 3), DifferentFibers);
}

TEST_CASE("coset combinations") {
    Rng rng(3);
    const WittRing r = make_ring(5, 1, 8);
    const CascadeLayout L = make_layout(r, make_gsp(4), {2, 1, 1, 0});
    REQUIRE(L.r() == 3);
    bool any_sum_leaves = false;
    for (int t = 0; t < 20; ++t) {
        const DefPoint b0 = random_point(L, 2, 3, rng);
        const DefPoint x = random_fiber_point(L, 1, 3, b0, rng);
        const DefPoint y = random_fiber_point(L, 1, 3, b0, rng);
        const DefPoint z = random_fiber_point(L, 1, 3, b0, rng);
        REQUIRE(is_point(L, x));
        CHECK(restrict(L, x, 2, 3).u == b0.u);
        const DefPoint c = coset_combine(L, x, y, z, 2, 3);
        CHECK(is_point(L, c));
        CHECK(restrict(L, c, 2, 3).u == b0.u);
        CHECK(coset_combine(L, x, y, x, 2, 3).u == y.u);
        CHECK(coset_combine(L, x, y, y, 2, 3).u == x.u);
        // The full matrix of a point at level (1,3) is symplectic.
        const WMat J = form_matrix(r, L.preset());
        CHECK(mat_mul(r, mat_transpose(c.u), mat_mul(r, J, c.u)) == J);
        any_sum_leaves = any_sum_leaves || !is_point(L, fiber_sum(L, x, y, 2, 3));
    }
    CHECK(any_sum_leaves);  // the fibers are shifted: cosets, not subgroups
}

TEST_CASE("isogeny shifts") {
    const WittRing r = make_ring(3, 1, 3);
    const CascadeLayout L = make_layout(r, make_gl(2), {1, 0});
    CHECK(isogeny_shift(L, zero_point(L, 1, 2), 0).u == WMat::identity(r, 2));
    CHECK(isogeny_shift(L, two_slope_point(r, 3), 0).u(1, 0) == r.from_int(9));
    CHECK(isogeny_shift(L, two_slope_point(r, 3), 2).u(1, 0) == r.from_int(9));
    CHECK_THROWS_AS(isogeny_shift(L, two_slope_point(r, 9), 0), PrecisionError);

    Rng rng(4);
    const WittRing R = make_ring(3, 2, 10);
    const CascadeLayout L3 = make_layout(R, make_gl(3), {2, 1, 0});
    for (int t = 0; t < 20; ++t) {
        DefPoint x = zero_point(L3, 1, 3);
        x.u(1, 0) = R.scale(R.random_unit(rng), 3);
        x.u(2, 0) = R.scale(R.random_unit(rng), 3);
        x.u(2, 1) = R.scale(R.random_unit(rng), 9);
        const DefPoint full = isogeny_shift(L3, x, 0);
        CHECK(is_point(L3, full));
        CHECK(isogeny_shift(L3, isogeny_shift(L3, x, 2), 3).u == full.u);
        CHECK(R.val(full.u(2, 0)) == 3);
    }

    // ResGL(2,2): slopes 1/2 and 0, so c = 2 and the gap scales by p.
    const CascadeLayout LR = make_layout(R, make_resgl(2, 2), {0, 0, 1, 0});
    for (int t = 0; t < 10; ++t) {
        const DefPoint x = random_point(LR, 1, 2, rng);
        try {
            CHECK(is_point(LR, isogeny_shift(LR, x, 0)));
        } catch (const PrecisionError&) {
        }
    }
}

TEST_CASE("Baer sums agree with coordinate sums, every rank (1,1) case mod 27") {
    const WittRing r = make_ring(3, 1, 3);
    const CascadeLayout L = make_layout(r, make_gl(2), {1, 0});
    for (i64 s = 0; s < 27; s += 3)
        for (i64 t = 0; t < 27; t += 3) {
            const DefPoint x = two_slope_point(r, s), y = two_slope_point(r, t);
            for (auto [ba, bb] : std::vector<std::pair<int, int>>{{2, 2}, {1, 1}}) {
                const auto oracle = baer_sum_flag(L, x, y, ba, bb);
                CHECK(oracle == echelon_flag(L, point_flag(L, fiber_sum(L, x, y, ba, bb))));
                CHECK(oracle == echelon_flag(L, point_flag(L, two_slope_point(r, s + t))));
            }
        }
}

TEST_CASE("hypothesis audits") {
    struct Case {
        GroupPreset g;
        Cochar w;
        i64 p;
        bool subgroups;
    };
    for (const auto& c : std::vector<Case>{{make_gl(2), {1, 0}, 3, true},
                                           {make_gl(3), {2, 1, 0}, 3, true},
                                           {make_gsp(4), {1, 1, 0, 0}, 5, true},
                                           {make_gsp(4), {2, 1, 1, 0}, 5, false},
                                           {make_resgl(3, 2), {1, 0, 0, 1, 1, 0}, 3, true}}) {
        const WittRing r = make_ring(c.p, 2, 8);
        const CascadeLayout L = make_layout(r, c.g, c.w);
        const AuditReport rep = hypothesis_audit(L, 7, 4);
        INFO(c.g.name(), " ", format_cochar(c.w));
        for (const auto& chk : rep.checks) CHECK_MESSAGE(chk.pass, chk.level, " ", chk.name);
        CHECK(rep.pass());
        CHECK(rep.subgroup_fibers == c.subgroups);
        CHECK(rep.notes.size() >= 3);
    }
}
