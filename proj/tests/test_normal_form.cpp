#include "doctest.h"

#include "fcrystal/errors.hpp"
#include "fcrystal/normal_form.hpp"

using namespace fcrystal;

namespace {

WMat from_ints(const WittRing& r, const std::vector<std::vector<i64>>& m) {
    WMat A(r, static_cast<int>(m.size()), static_cast<int>(m[0].size()));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) A(i, j) = r.from_int(m[i][j]);
    return A;
}

// The substitution oracle: g in G(O) and g^{-1} b sigma_G(g) = upsilon(p) over nf.ring.
bool substitution_holds(const GCrystal& x, const NormalForm& nf) {
    const WittRing& R = nf.ring;
    const WMat b = nf.extension ? mat_embed(*nf.extension, x.ring, x.b) : x.b;
    Cochar w = nf.upsilon;
    for (auto& v : w) v += x.shift;
    const WMat lhs = mat_mul(R, mat_inverse(R, nf.g), mat_mul(R, b, sigma_G(R, x.preset, nf.g)));
    return in_group_O(R, x.preset, nf.g) && lhs == diag_ppow(R, w);
}

struct Case {
    GroupPreset g;
    Cochar mu;
    int s, N;
};

std::vector<Case> round_trip_cases() {
    return {{make_gl(2), {1, 0}, 1, 6},
            {make_gl(2), {1, 0}, 2, 6},
            {make_gl(3), {1, 1, 0}, 2, 8},
            {make_gl(3), {2, 1, 0}, 1, 8},
            {make_gsp(4), {1, 1, 0, 0}, 1, 6},
            {make_gsp(4), {2, 1, 1, 0}, 1, 10},
            {make_gsp(4), {1, 1, 0, 0}, 2, 10},
            {make_gsp(6), {1, 1, 1, 0, 0, 0}, 1, 8},
            {make_resgl(2, 2), {1, 0, 0, 0}, 2, 6},
            {make_resgl(3, 2), {1, 1, 0, 1, 0, 0}, 2, 8}};
}

}  // namespace

TEST_CASE("upsilon(p) is its own normal form") {
    const WittRing r = make_ring(3, 1, 6);
    for (const auto& c : std::vector<std::pair<GroupPreset, Cochar>>{
             {make_gl(2), {1, 0}}, {make_gsp(4), {1, 1, 0, 0}}, {make_resgl(2, 2), {0, 0, 1, 0}}}) {
        const Cochar up = dominant_rep(c.first, galois_action(c.first, c.second));
        GCrystal x = make_crystal(r, c.first, cochar_matrix(r, up));
        NormalForm nf = normal_form(x, c.second);
        CHECK(nf.g == WMat::identity(r, c.first.d));
        CHECK(nf.upsilon == up);
    }
}

TEST_CASE("normal form of a perturbed ordinary matrix") {
    const WittRing r = make_ring(3, 1, 6);
    GCrystal x = make_crystal(r, make_gl(2), mat_mul(r, from_ints(r, {{3, 0}, {0, 1}}), from_ints(r, {{1, 0}, {3, 1}})));
    NormalForm nf = normal_form(x, {1, 0});
    CHECK(substitution_holds(x, nf));
    CHECK(mat_mul(r, mat_inverse(r, nf.g), mat_mul(r, x.b, nf.g)) == from_ints(r, {{3, 0}, {0, 1}}));
    CHECK(nf.reduced.b == from_ints(r, {{3, 0}, {0, 1}}));
}

TEST_CASE("normal form round trips across presets") {
    Rng rng(17);
    for (const auto& c : round_trip_cases()) {
        const WittRing r = make_ring(c.g.kind == GroupKind::GSp ? 5 : 3, c.s, c.N);
        const Cochar up = dominant_rep(c.g, galois_action(c.g, c.mu));
        INFO(c.g.name(), " s=", c.s);
        for (int t = 0; t < 10; ++t) {
            GCrystal x = sigma_conjugate(make_crystal(r, c.g, cochar_matrix(r, up)), random_group_element(r, c.g, rng));
            NormalForm nf = normal_form(x, c.mu, 0, rng());
            CHECK_MESSAGE(substitution_holds(x, nf), c.g.name());
            CHECK_FALSE(nf.extension.has_value());
        }
    }
}

TEST_CASE("normal form handles shifted crystals") {
    Rng rng(4);
    const WittRing r = make_ring(3, 1, 8);
    const auto g = make_gl(3);
    // True Frobenius p^{-1} * diag(p^2, p, 1): upsilon = (1, 0, -1).
    GCrystal x = sigma_conjugate(make_crystal(r, g, cochar_matrix(r, {2, 1, 0}), 1), random_group_element(r, g, rng));
    NormalForm nf = normal_form(x, {1, 0, -1});
    CHECK(nf.upsilon == Cochar{1, 0, -1});
    CHECK(substitution_holds(x, nf));
}

TEST_CASE("normal form needs an extension for units without a sigma-root") {
    // b = 2 on GL(1) over Z/9: sigma(x)/x = 1/2 forces 2^e = 1 mod 9, so degree 6.
    const WittRing r = make_ring(3, 1, 2);
    WMat b(r, 1, 1);
    b(0, 0) = r.from_int(2);
    GCrystal x = make_crystal(r, make_gl(1), b);
    NormalForm nf = normal_form(x, {0});
    REQUIRE(nf.extension.has_value());
    CHECK(nf.extension->degree == 6);
    CHECK(substitution_holds(x, nf));
    CHECK_THROWS_AS(normal_form(x, {0}, 5), ExtensionBudgetExceeded);
    b(0, 0) = r.from_int(4);  // order 3
    NormalForm nf4 = normal_form(make_crystal(r, make_gl(1), b), {0});
    REQUIRE(nf4.extension.has_value());
    CHECK(nf4.extension->degree == 3);
}

TEST_CASE("normal form rejects non-ordinary crystals") {
    const WittRing r = make_ring(3, 1, 6);
    GCrystal x = make_crystal(r, make_gl(2), from_ints(r, {{0, 1}, {3, 0}}));
    CHECK_THROWS_AS(normal_form(x, {1, 0}), NotOrdinary);
}

TEST_CASE("isomorphism witnesses") {
    Rng rng(8);
    const WittRing r = make_ring(5, 2, 6);
    for (const auto& c : std::vector<std::pair<GroupPreset, Cochar>>{
             {make_gl(3), {1, 0, 0}}, {make_gsp(4), {1, 1, 0, 0}}, {make_resgl(2, 2), {1, 0, 0, 0}}}) {
        const GroupPreset& g = c.first;
        const Cochar up = dominant_rep(g, galois_action(g, c.second));
        const int N = g.kind == GroupKind::GSp ? 10 : 8;
        const WittRing R = make_ring(5, 2, N);
        GCrystal x = sigma_conjugate(make_crystal(R, g, cochar_matrix(R, up)), random_group_element(R, g, rng));
        auto check = [&](const GCrystal& a, const GCrystal& b) {
            Isomorphism iso = isomorphism_witness(a, b, c.second);
            const WittRing& W = iso.ring;
            CHECK(in_group_O(W, g, iso.theta));
            CHECK(mat_mul(W, iso.theta, mat_mul(W, b.b, mat_inverse(W, sigma_G(W, g, iso.theta)))) == a.b);
        };
        check(x, x);
        check(x, sigma_conjugate(x, random_group_element(R, g, rng)));
        check(x, sigma_conjugate(make_crystal(R, g, cochar_matrix(R, up)), random_group_element(R, g, rng)));
    }
    (void)r;
}

TEST_CASE("slope decomposition") {
    const WittRing r = make_ring(3, 1, 6);
    auto pieces = slope_decomposition(make_crystal(r, make_gl(2), from_ints(r, {{3, 0}, {0, 1}})));
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].slope == Q(1));
    CHECK(pieces[0].coords.size() == 1);
    CHECK(pieces[1].slope == Q(0));

    auto p3 = slope_decomposition(make_crystal(r, make_gl(3), cochar_matrix(r, {1, 1, 0})));
    REQUIRE(p3.size() == 2);
    CHECK(p3[0].coords.size() == 2);
    CHECK(p3[1].coords.size() == 1);

    // ResGL(2,2), mu = (1,0|0,0): upsilon = (0,0|1,0), nu = (1/2,0|1/2,0).
    auto pr = slope_decomposition(make_crystal(r, make_resgl(2, 2), cochar_matrix(r, {0, 0, 1, 0})));
    REQUIRE(pr.size() == 2);
    CHECK(pr[0].slope == Q(1, 2));
    CHECK(pr[0].coords == std::vector<int>{0, 2});
    CHECK(pr[1].slope == Q(0));
    CHECK(pr[1].coords == std::vector<int>{1, 3});

    CHECK_THROWS_AS(slope_decomposition(make_crystal(r, make_gl(2), from_ints(r, {{3, 1}, {0, 1}}))), NotNormalForm);
    CHECK_THROWS_AS(slope_decomposition(make_crystal(r, make_gl(2), from_ints(r, {{6, 0}, {0, 1}}))), NotNormalForm);
    CHECK_THROWS_AS(slope_decomposition(make_crystal(r, make_gl(2), from_ints(r, {{1, 0}, {0, 3}}))), NotNormalForm);
}
