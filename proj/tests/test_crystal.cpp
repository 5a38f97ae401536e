#include "doctest.h"

#include <random>

#include "fcrystal/crystal.hpp"
#include "fcrystal/errors.hpp"

using namespace fcrystal;

namespace {

using IntMat = std::vector<std::vector<i64>>;

WMat from_ints(const WittRing& r, const IntMat& m) {
    WMat A(r, static_cast<int>(m.size()), static_cast<int>(m[0].size()));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) A(i, j) = r.from_int(m[i][j]);
    return A;
}

IntMat int_mul(const IntMat& a, const IntMat& b) {
    IntMat c(a.size(), std::vector<i64>(b[0].size(), 0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b[0].size(); ++j)
            for (size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

QCochar qv(std::initializer_list<Q> xs) { return QCochar(xs); }

// g^-1 mu(p) sigma_G(g): an element of the double coset of mu, sigma-conjugate to mu(p).
GCrystal conjugated_cochar(const WittRing& r, const GroupPreset& g, const Cochar& mu, Rng& rng) {
    GCrystal x = make_crystal(r, g, cochar_matrix(r, mu));
    return sigma_conjugate(x, random_group_element(r, g, rng));
}

// k1 mu(p) k2 for random k1, k2: a generic element of the double coset.
GCrystal double_coset_element(const WittRing& r, const GroupPreset& g, const Cochar& mu, Rng& rng) {
    WMat b = mat_mul(r, random_group_element(r, g, rng),
                     mat_mul(r, cochar_matrix(r, mu), random_group_element(r, g, rng)));
    return make_crystal(r, g, b);
}

}  // namespace

TEST_CASE("construction checks group membership") {
    const WittRing r = make_ring(3, 1, 6);
    CHECK_THROWS_AS(make_crystal(r, make_gl(2), from_ints(r, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})), InvalidParams);
    CHECK_THROWS_AS(make_crystal(r, make_gsp(4), from_ints(r, {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})),
                    NotInGroup);
    CHECK_THROWS_AS(make_crystal(r, make_resgl(2, 2), from_ints(r, {{1, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})),
                    NotInGroup);
    CHECK_THROWS_AS(make_crystal(r, make_gl(2), from_ints(r, {{1, 2}, {2, 4}})), PrecisionError);
    GCrystal x = make_crystal(r, make_gsp(4), cochar_matrix(r, {1, 1, 0, 0}));
    CHECK(x.similitude == r.from_int(3));

    std::vector<LaurentElem> e = {laurent_make(r, -1, r.one()), laurent_zero(r), laurent_zero(r),
                                  laurent_from_integral(r, r.one())};
    GCrystal y = crystal_from_laurent(r, make_gl(2), e);
    CHECK(y.shift == 1);
    CHECK(y.b == from_ints(r, {{1, 0}, {0, 3}}));
    CHECK(cartan(y) == Cochar{0, -1});
}

TEST_CASE("random group elements and Weyl matrices lie in G(O)") {
    Rng rng(11);
    const WittRing r = make_ring(5, 2, 4);
    for (const auto& g : {make_gl(3), make_gsp(4), make_gsp(6), make_resgl(2, 2)}) {
        for (int t = 0; t < 5; ++t) CHECK(in_group_O(r, g, random_group_element(r, g, rng)));
        for (const auto& pi : weyl_group(g)) {
            WMat w = weyl_matrix(r, g, pi);
            CHECK(in_group_O(r, g, w));
        }
    }
}

TEST_CASE("sigma_G on ResGL moves block k to block k+1") {
    Rng rng(3);
    const WittRing r = make_ring(3, 2, 3);
    const auto g = make_resgl(2, 2);
    WMat m = random_group_element(r, g, rng);
    WMat P = block_shift_matrix(r, g);
    CHECK(sigma_G(r, g, m) == mat_mul(r, P, mat_mul(r, mat_frobenius(r, m), mat_inverse(r, P))));
    CHECK(sigma_G(r, g, sigma_G(r, g, m, 1), -1) == m);
}

TEST_CASE("sigma conjugation") {
    const WittRing r = make_ring(3, 1, 6);
    const auto gl2 = make_gl(2);
    GCrystal x = make_crystal(r, gl2, from_ints(r, {{3, 0}, {0, 1}}));
    CHECK(sigma_conjugate(x, WMat::identity(r, 2)).b == x.b);

    // sigma is trivial on Z_3, so this is ordinary conjugation.
    const IntMat g = {{1, 0}, {1, 1}}, ginv = {{1, 0}, {-1, 1}};
    const IntMat expected = int_mul(ginv, int_mul({{3, 0}, {0, 1}}, g));
    CHECK(sigma_conjugate(x, from_ints(r, g)).b == from_ints(r, expected));

    Rng rng(1);
    for (const auto& G : {make_gl(3), make_gsp(4), make_resgl(2, 2)}) {
        const WittRing r2 = make_ring(5, 2, 5);
        GCrystal y = make_crystal(r2, G, random_group_element(r2, G, rng));
        WMat h = random_group_element(r2, G, rng);
        CHECK(sigma_conjugate(sigma_conjugate(y, h), mat_inverse(r2, h)).b == y.b);
    }
    CHECK_THROWS_AS(sigma_conjugate(x, from_ints(r, {{3, 0}, {0, 1}})), NotIntegral);
    const WittRing r4 = make_ring(3, 1, 6);
    GCrystal z = make_crystal(r4, make_gsp(4), cochar_matrix(r4, {1, 1, 0, 0}));
    CHECK_THROWS_AS(sigma_conjugate(z, from_ints(r4, {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})),
                    NotInGroup);
}

TEST_CASE("Cartan decomposition") {
    const WittRing r = make_ring(3, 1, 6);
    const auto gl2 = make_gl(2);
    CHECK(cartan(make_crystal(r, gl2, from_ints(r, {{9, 0}, {0, 1}}))) == Cochar{2, 0});
    CHECK(cartan(make_crystal(r, gl2, from_ints(r, {{0, 1}, {3, 0}}))) == Cochar{1, 0});
    // Precision bound: exponent 3 on GL(2) needs N >= 7.
    CHECK_THROWS_AS(cartan(make_crystal(r, gl2, from_ints(r, {{27, 0}, {0, 1}}))), PrecisionError);

    Rng rng(2);
    const WittRing r2 = make_ring(5, 2, 9);
    struct Case {
        GroupPreset g;
        Cochar mu;
    };
    const std::vector<Case> cases = {{make_gl(3), {2, 1, 0}},       {make_gl(2), {1, 1}},
                                     {make_gsp(4), {1, 1, 0, 0}},   {make_gsp(4), {2, 1, 1, 0}},
                                     {make_gsp(6), {1, 1, 1, 0, 0, 0}}, {make_resgl(2, 2), {1, 0, 2, 1}}};
    for (const auto& c : cases) {
        for (int t = 0; t < 10; ++t) {
            GCrystal x = double_coset_element(r2, c.g, c.mu, rng);
            CartanResult cr = cartan_decomposition(x);
            CHECK(cr.mu == c.mu);
            CHECK(in_group_O(r2, c.g, cr.k1));
            CHECK(in_group_O(r2, c.g, cr.k2));
            const int top = *std::max_element(c.mu.begin(), c.mu.end());
            WMat prod = mat_mul(r2, cr.k1, mat_mul(r2, cochar_matrix(r2, cr.mu), cr.k2));
            CHECK(mat_reduce(r2, prod, r2.N() - top) == mat_reduce(r2, x.b, r2.N() - top));
            // Invariant under sigma-conjugation.
            CHECK(cartan(sigma_conjugate(x, random_group_element(r2, c.g, rng))) == c.mu);
        }
    }
}

TEST_CASE("Newton polygons") {
    const WittRing r = make_ring(3, 1, 6);
    const auto gl2 = make_gl(2);
    CHECK(newton(make_crystal(r, gl2, from_ints(r, {{3, 0}, {0, 1}}))) == qv({1, 0}));
    CHECK(newton(make_crystal(r, gl2, from_ints(r, {{0, 1}, {3, 0}}))) == qv({Q(1, 2), Q(1, 2)}));
    for (int k = 0; k <= 4; ++k) {
        WMat b(r, 1, 1);
        b(0, 0) = r.mul(r.pow(r.from_int(3), k), r.from_int(2));
        CHECK(newton(make_crystal(r, make_gl(1), b)) == qv({k}));
    }
    // Exponent 5 on GL(1) needs N >= 7.
    WMat b(r, 1, 1);
    b(0, 0) = r.pow(r.from_int(3), 5);
    CHECK_THROWS_AS(newton(make_crystal(r, make_gl(1), b)), PrecisionError);

    // Unramified degree 2: the Frobenius b sigma with b = [[0,1],[3,0]] still has slopes 1/2.
    const WittRing r2 = make_ring(3, 2, 6);
    CHECK(newton(make_crystal(r2, gl2, from_ints(r2, {{0, 1}, {3, 0}}))) == qv({Q(1, 2), Q(1, 2)}));
    // ResGL(2,2) with mu = (1,0|0,0): the averaged slopes sit in both blocks.
    const auto res = make_resgl(2, 2);
    CHECK(newton(make_crystal(r2, res, cochar_matrix(r2, {1, 0, 0, 0}))) == qv({Q(1, 2), 0, Q(1, 2), 0}));
    // GSp(4) supersingular-type element: slopes 1/2.
    const auto gsp = make_gsp(4);
    const WittRing r3 = make_ring(3, 1, 8);
    GCrystal ss = make_crystal(r3, gsp, from_ints(r3, {{0, 1, 0, 0}, {3, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 3, 0}}));
    CHECK(newton(ss) == qv({Q(1, 2), Q(1, 2), Q(1, 2), Q(1, 2)}));
}

TEST_CASE("Kottwitz classes") {
    const WittRing r = make_ring(3, 1, 6);
    CHECK(kottwitz(make_crystal(r, make_gl(2), from_ints(r, {{3, 0}, {0, 1}}))) == 1);
    Rng rng(4);
    CHECK(kottwitz(make_crystal(r, make_gl(3), random_group_element(r, make_gl(3), rng))) == 0);
    CHECK(kottwitz(make_crystal(r, make_gsp(4), cochar_matrix(r, {1, 1, 0, 0}))) == 1);
    CHECK(kottwitz(make_crystal(r, make_resgl(2, 2), cochar_matrix(r, {1, 0, 1, 1}))) == 3);
}

TEST_CASE("admissibility and mu-ordinariness") {
    const WittRing r = make_ring(3, 1, 6);
    const auto gl2 = make_gl(2);
    const GCrystal diag31 = make_crystal(r, gl2, from_ints(r, {{3, 0}, {0, 1}}));
    const GCrystal ss = make_crystal(r, gl2, from_ints(r, {{0, 1}, {3, 0}}));
    CHECK(admissible(diag31, {1, 0}));
    CHECK_FALSE(admissible(diag31, {2, 0}));
    CHECK(admissible(ss, {1, 0}));
    CHECK(is_mu_ordinary(diag31, {1, 0}));
    CHECK_FALSE(is_mu_ordinary(ss, {1, 0}));
    CHECK_THROWS_AS(admissible(diag31, {0, 1}), NotDominant);

    Rng rng(9);
    const WittRing r2 = make_ring(5, 2, 10);
    struct Case {
        GroupPreset g;
        Cochar mu;
    };
    for (const auto& c : std::vector<Case>{{make_gl(3), {1, 1, 0}},
                                           {make_gsp(4), {1, 1, 0, 0}},
                                           {make_resgl(2, 2), {1, 0, 0, 0}},
                                           {make_resgl(3, 2), {1, 1, 0, 1, 0, 0}}}) {
        GCrystal mu_p = make_crystal(r2, c.g, cochar_matrix(r2, c.mu));
        CHECK(admissible(mu_p, c.mu));
        const Cochar up = dominant_rep(c.g, galois_action(c.g, c.mu));
        for (int t = 0; t < 5; ++t) {
            GCrystal x = conjugated_cochar(r2, c.g, up, rng);
            CHECK(is_mu_ordinary(x, c.mu));
            CHECK(newton(x) == galois_average(c.g, c.mu));
        }
    }
}

TEST_CASE("property: invariants are unchanged by sigma-conjugation") {
    Rng rng(21);
    const WittRing r = make_ring(3, 2, 10);
    struct Case {
        GroupPreset g;
        Cochar mu;
    };
    for (const auto& c : std::vector<Case>{{make_gl(3), {1, 0, 0}},
                                           {make_gl(2), {1, 0}},
                                           {make_gsp(4), {1, 1, 0, 0}},
                                           {make_resgl(2, 2), {1, 0, 1, 0}}}) {
        for (int t = 0; t < 8; ++t) {
            GCrystal x = double_coset_element(r, c.g, c.mu, rng);
            GCrystal y = sigma_conjugate(x, random_group_element(r, c.g, rng));
            const Invariants a = invariants(x), b = invariants(y);
            CHECK(a.hodge == b.hodge);
            CHECK(a.newton == b.newton);
            CHECK(a.kottwitz == b.kottwitz);
            CHECK(is_mu_ordinary(x, c.mu) == is_mu_ordinary(y, c.mu));
        }
    }
}

TEST_CASE("property: Mazur inequality and the slope sum rule") {
    Rng rng(33);
    const WittRing r = make_ring(3, 1, 14);
    for (const auto& g : {make_gl(2), make_gl(3), make_resgl(2, 2)}) {
        int tested = 0;
        while (tested < 40) {
            // Random integral matrices with small elementary divisors.
            WMat b = random_matrix(r, g.d, g.d, rng);
            if (g.kind == GroupKind::ResGL)
                for (int i = 0; i < g.d; ++i)
                    for (int j = 0; j < g.d; ++j)
                        if (!position_in_group(g, i, j)) b(i, j) = r.zero();
            if (r.val(determinant(r, b)) >= r.N()) continue;
            GCrystal x = make_crystal(r, g, b);
            Invariants inv;
            try {
                inv = invariants(x);
            } catch (const PrecisionError&) {
                continue;
            }
            ++tested;
            CHECK(leq_dominance(g, inv.newton, galois_average(g, inv.hodge)));
            Q sum = 0;
            for (const auto& v : inv.newton) sum += v;
            CHECK(sum == Q(inv.kottwitz));
            CHECK(inv.kottwitz == kottwitz_of_cocharacter(g, inv.hodge));
        }
    }
}
