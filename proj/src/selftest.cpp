#include "fcrystal/selftest.hpp"

#include "fcrystal/errors.hpp"

namespace fcrystal {

namespace {

struct Tally {
    SuiteResult res;
    explicit Tally(std::string name) { res.name = std::move(name); }
    void record(bool ok, const std::string& what) {
        ++res.instances;
        if (ok) return;
        if (res.failures++ == 0) res.first_failure = what;
    }
};

std::string describe(const GroupPreset& g, const Cochar& mu, const WittRing& r) {
    return g.name() + " mu=" + format_cochar(mu) + " p=" + std::to_string(r.p()) + " s=" + std::to_string(r.s()) +
           " N=" + std::to_string(r.N());
}

bool minuscule(const Cochar& w) {
    for (int v : w)
        if (v < 0 || v > 1) return false;
    return true;
}

struct Config {
    GroupPreset g;
    Cochar mu;
    std::vector<int> s_options;
};

const std::vector<Config>& round_trip_configs() {
    static const std::vector<Config> cs = {
        {make_gl(2), {1, 0}, {1, 2, 3}},         {make_gl(3), {1, 1, 0}, {1, 2, 3}},
        {make_gsp(4), {1, 1, 0, 0}, {1, 2}},     {make_resgl(2, 2), {0, 0, 1, 0}, {2}},
        {make_gl(2), {2, 0}, {1, 2}},            {make_gl(3), {2, 1, 0}, {1}},
        {make_gsp(4), {2, 1, 1, 0}, {1}},        {make_resgl(2, 2), {1, 0, 1, 1}, {2}},
    };
    return cs;
}

// The precision the Newton polygon asks for.
int newton_need(const GroupPreset& g, const Cochar& mu, int s) {
    int top = 0, total = 0;
    for (int v : mu) top = std::max(top, v), total += v;
    return std::max(s * (g.kind == GroupKind::ResGL ? g.n : g.d) * top, s * total) + 2;
}

struct LayoutCase {
    GroupPreset g;
    Cochar w;
    i64 p;
};

const std::vector<LayoutCase>& multi_slope_layouts() {
    static const std::vector<LayoutCase> ls = {
        {make_gl(2), {1, 0}, 3},         {make_gl(3), {1, 1, 0}, 3},       {make_gl(3), {2, 1, 0}, 3},
        {make_gl(4), {2, 1, 1, 0}, 3},   {make_gsp(4), {1, 1, 0, 0}, 5},   {make_gsp(4), {2, 1, 1, 0}, 5},
        {make_resgl(2, 2), {0, 0, 1, 0}, 3}, {make_resgl(3, 2), {1, 0, 0, 1, 1, 0}, 3},
    };
    return ls;
}

i64 int_pow(i64 p, int k) {
    i64 v = 1;
    while (k-- > 0) v *= p;
    return v;
}

int uniform(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

}  // namespace

RoundTripCase round_trip_case(int index, Rng& rng, bool minuscule_only) {
    std::vector<Config> pool;
    for (const auto& c : round_trip_configs())
        if (!minuscule_only || minuscule(c.mu)) pool.push_back(c);
    const Config& cfg = pool[static_cast<size_t>(index) % pool.size()];
    static const i64 primes[] = {3, 5, 7};
    const i64 p = primes[rng() % 3];
    std::vector<int> ss;
    for (int s : cfg.s_options)
        if (newton_need(cfg.g, cfg.mu, s) <= 12) ss.push_back(s);
    const int s = ss[rng() % ss.size()];
    const int N = uniform(rng, newton_need(cfg.g, cfg.mu, s), 12);
    const WittRing r = make_ring(p, s, N);
    const Cochar upsilon = dominant_rep(cfg.g, galois_action(cfg.g, cfg.mu));
    const GCrystal x0 = make_crystal(r, cfg.g, cochar_matrix(r, upsilon));
    const WMat g0 = random_group_element(r, cfg.g, rng);
    return RoundTripCase{cfg.g, cfg.mu, r, g0, sigma_conjugate(x0, g0)};
}

SuiteResult suite_normal_form_round_trip(std::uint64_t seed, int instances) {
    Tally t("normal_form_round_trip");
    Rng rng(seed);
    int extended = 0;
    for (int i = 0; i < instances; ++i) {
        std::string what = "instance " + std::to_string(i);
        try {
            const RoundTripCase c = round_trip_case(i, rng);
            what = describe(c.preset, c.mu, c.ring);
            const Cochar upsilon = dominant_rep(c.preset, galois_action(c.preset, c.mu));
            const NormalForm nf = normal_form(c.crystal, c.mu, 0, seed + static_cast<std::uint64_t>(i));
            const GCrystal x = nf.extension ? embed_crystal(*nf.extension, c.crystal) : c.crystal;
            if (nf.extension) ++extended;
            const bool ok = is_mu_ordinary(c.crystal, c.mu) && nf.upsilon == upsilon &&
                            in_group_O(nf.ring, c.preset, nf.g) &&
                            sigma_conjugate(x, nf.g).b == cochar_matrix(nf.ring, upsilon);
            t.record(ok, what);
        } catch (const DomainError& e) {
            t.record(false, what + ": " + e.what());
        }
    }
    t.res.summary = std::to_string(extended) + " needed an unramified extension";
    return t.res;
}

SuiteResult suite_mazur_inequality(std::uint64_t seed, int instances) {
    Tally t("mazur_inequality");
    Rng rng(seed);
    for (int i = 0; i < instances; ++i) {
        const int d = uniform(rng, 2, 3);
        const int s = uniform(rng, 1, 2);
        const i64 p = rng() % 2 ? 5 : 3;
        Cochar e(static_cast<size_t>(d));
        for (int& v : e) v = uniform(rng, 0, 2);
        const GroupPreset g = make_gl(d);
        const int N = std::max(4, newton_need(g, e, s)) + uniform(rng, 0, 2);
        const WittRing r = make_ring(p, s, N);
        const std::string what = describe(g, e, r);
        try {
            const WMat b = mat_mul(r, random_invertible(r, d, rng),
                                   mat_mul(r, diag_ppow(r, e), random_invertible(r, d, rng)));
            const GCrystal x = make_crystal(r, g, b);
            const Cochar hodge = cartan(x);
            const QCochar nu = newton(x);
            Q total(0);
            for (const Q& v : nu) total += v;
            t.record(hodge == dominant_rep(g, e) && leq_dominance(g, dominant_rep(g, nu), to_rational(hodge)) &&
                         total == Q(kottwitz(x)),
                     what);
        } catch (const DomainError& err) {
            t.record(false, what + ": " + err.what());
        }
    }
    return t.res;
}

SuiteResult suite_central_descent(std::uint64_t seed, int instances) {
    Tally t("central_descent");
    Rng rng(seed);
    int premise = 0;
    for (int i = 0; i < instances; ++i) {
        const GroupPreset g = make_resgl(uniform(rng, 2, 3), uniform(rng, 2, 3));
        Cochar mu;
        for (int k = 0; k < g.s0; ++k) {
            std::vector<int> block(static_cast<size_t>(g.n));
            if (rng() % 2) {
                std::fill(block.begin(), block.end(), uniform(rng, -3, 3));
            } else {
                for (int& v : block) v = uniform(rng, -3, 3);
                std::sort(block.rbegin(), block.rend());
            }
            mu.insert(mu.end(), block.begin(), block.end());
        }
        const bool avg_central = is_central(g, galois_average(g, mu));
        premise += avg_central;
        t.record(is_dominant(g, to_rational(mu)) && (!avg_central || is_central(g, mu)),
                 g.name() + " mu=" + format_cochar(mu));
    }
    t.res.summary = "premise held " + std::to_string(premise) + " times";
    return t.res;
}

SuiteResult suite_honda_invariants(std::uint64_t seed, int coordinates) {
    Tally t("honda_invariants");
    Rng rng(seed);
    int lifts = 0, lift_failures = 0;
    for (int i = 0; t.res.instances < coordinates; ++i) {
        std::string what = "instance " + std::to_string(i);
        try {
            const RoundTripCase c = round_trip_case(i, rng, true);
            what = describe(c.preset, c.mu, c.ring);
            const CanonicalLift lift = canonical_lift(c.crystal, c.mu, 0, seed + static_cast<std::uint64_t>(i));
            ++lifts;
            bool lift_ok = honda_validate(lift.system).ok();
            for (const auto& blk : lift.blocks) lift_ok = lift_ok && honda_validate(blk).ok();
            if (!lift_ok && lift_failures++ == 0 && t.res.failures == 0) t.res.first_failure = what + ": canonical lift";
            const WittRing& R = lift.normal.ring;
            for (int k = 0; k < 4 && t.res.instances < coordinates; ++k) {
                const WMat u = random_adapted_unipotent(R, c.preset, lift.weights, rng);
                HondaSystem h = lift.system;
                h.F = HodgeFiltration{mat_mul(R, u, h.F.basis), std::nullopt};
                t.record(lift_ok && adapted_violation(R, c.preset, lift.weights, u).empty() && honda_validate(h).ok(),
                         what);
            }
        } catch (const DomainError& e) {
            t.record(false, what + ": " + e.what());
        }
    }
    t.res.summary = std::to_string(lifts) + " canonical lifts, " + std::to_string(lift_failures) + " failed";
    return t.res;
}

SuiteResult suite_uniqueness_certificate(const std::vector<i64>& primes, int N, const std::vector<int>& gaps) {
    Tally t("uniqueness_certificate");
    int literal = 0;
    for (i64 p : primes)
        for (int m : gaps) {
            if (m >= N) continue;
            const WittRing r = make_ring(p, 1, N);
            const GroupPreset g = make_gl(2);
            const GCrystal x = make_crystal(r, g, cochar_matrix(r, {m, 0}));
            const i64 pN = int_pow(p, N), pNm = int_pow(p, N - m);
            for (i64 v = 0; v < pN; v += p) {
                WMat u = WMat::identity(r, 2);
                u(1, 0) = r.from_int(v);
                const std::string what = describe(g, {m, 0}, r) + " u21=" + std::to_string(v);
                try {
                    const UniquenessCertificate cert = uniqueness_certificate(r, u, x);
                    // Conjugation sends v to p^m v: fixed iff v = 0, trivial iff p^(N-m) | v.
                    const bool ok = cert.ok() && cert.fixed_point == (v == 0) &&
                                    cert.trivialized == (v % pNm == 0) && cert.predicted_trivial == (v % pNm == 0);
                    t.record(ok, what);
                    literal += cert.fixed_point != cert.predicted_trivial;
                } catch (const DomainError& e) {
                    t.record(false, what + ": " + e.what());
                }
            }
        }
    t.res.summary = "unqualified reading 'fixed iff u - 1 vanishes mod p^(N-m)' fails on " + std::to_string(literal) +
                    " nonidentity coordinates";
    return t.res;
}

SuiteResult suite_baer_sum(i64 p, int N, std::uint64_t seed, int random_cases, int random_N) {
    Tally t("baer_sum");
    {
        const WittRing r = make_ring(p, 1, N);
        const CascadeLayout L = make_layout(r, make_gl(2), {1, 0});
        auto point = [&](i64 v) {
            WMat u = WMat::identity(r, 2);
            u(1, 0) = r.from_int(v);
            return DefPoint{1, 2, u};
        };
        const i64 pN = int_pow(p, N);
        for (i64 a = 0; a < pN; a += p)
            for (i64 b = 0; b < pN; b += p)
                for (auto [ba, bb] : {std::pair{2, 2}, std::pair{1, 1}}) {
                    const auto oracle = baer_sum_flag(L, point(a), point(b), ba, bb);
                    t.record(oracle == echelon_flag(L, point_flag(L, fiber_sum(L, point(a), point(b), ba, bb))) &&
                                 oracle == echelon_flag(L, point_flag(L, point(a + b))),
                             "rank (1,1) " + std::to_string(a) + " + " + std::to_string(b));
                }
    }
    Rng rng(seed);
    const auto& layouts = multi_slope_layouts();
    for (int i = 0; i < random_cases; ++i) {
        const LayoutCase& lc = layouts[static_cast<size_t>(i) % layouts.size()];
        const WittRing r = make_ring(lc.p, 2, random_N);
        std::string what = describe(lc.g, lc.w, r);
        try {
            const CascadeLayout L = make_layout(r, lc.g, lc.w);
            const int a = uniform(rng, 1, L.r() - 1);
            const int b = uniform(rng, a + 1, L.r());
            const bool drop_first = rng() % 2;
            const int ba = drop_first ? a + 1 : a, bb = drop_first ? b : b - 1;
            what += " level (" + std::to_string(a) + "," + std::to_string(b) + ") base (" + std::to_string(ba) + "," +
                    std::to_string(bb) + ")";
            const DefPoint base = random_point(L, ba, bb, rng);
            const DefPoint x = random_fiber_point(L, a, b, base, rng);
            const DefPoint y = random_fiber_point(L, a, b, base, rng);
            t.record(baer_sum_flag(L, x, y, ba, bb) == echelon_flag(L, point_flag(L, fiber_sum(L, x, y, ba, bb))),
                     what);
        } catch (const DomainError& e) {
            t.record(false, what + ": " + e.what());
        }
    }
    return t.res;
}

SuiteResult suite_hypothesis_audit(std::uint64_t seed, int samples, bool small) {
    Tally t("hypothesis_audit");
    std::vector<LayoutCase> cases = {{make_gl(2), {1, 0}, 3}};
    if (!small)
        cases.insert(cases.end(), {{make_gl(3), {2, 1, 0}, 3}, {make_gsp(4), {1, 1, 0, 0}, 5}, {make_gsp(4), {2, 1, 1, 0}, 5}});
    std::string shifted;
    for (const auto& lc : cases) {
        const WittRing r = make_ring(lc.p, 2, 8);
        const std::string what = describe(lc.g, lc.w, r);
        try {
            const AuditReport rep = hypothesis_audit(make_layout(r, lc.g, lc.w), seed, samples);
            for (const auto& c : rep.checks) t.record(c.pass, what + " " + c.level + " " + c.name);
            if (!rep.subgroup_fibers) shifted += (shifted.empty() ? "" : ", ") + lc.g.name() + " " + format_cochar(lc.w);
        } catch (const DomainError& e) {
            t.record(false, what + ": " + e.what());
        }
    }
    t.res.summary = "shifted fibers (cosets only): " + (shifted.empty() ? std::string("none") : shifted);
    return t.res;
}

SuiteResult suite_slope_filtration_lift(std::uint64_t seed, int instances) {
    Tally t("slope_filtration_lift");
    Rng rng(seed);
    const auto& layouts = multi_slope_layouts();
    for (int i = 0; i < instances; ++i) {
        const LayoutCase& lc = layouts[static_cast<size_t>(i) % layouts.size()];
        const WittRing r = make_ring(lc.p, 2, 5);
        const std::string what = describe(lc.g, lc.w, r);
        try {
            const GCrystal x = make_crystal(r, lc.g, cochar_matrix(r, lc.w));
            const auto base = slope_filtration_lift(r, WMat::identity(r, lc.g.d), x);
            const auto pieces = slope_filtration_lift(r, random_adapted_unipotent(r, lc.g, lc.w, rng), x);
            bool ok = pieces.size() == base.size();
            for (size_t k = 0; ok && k < pieces.size(); ++k) {
                ok = pieces[k].canonical && pieces[k].frob == base[k].frob && pieces[k].flag == base[k].flag;
                if (minuscule(lc.w)) ok = ok && honda_validate(pieces[k].system).ok();
            }
            t.record(ok, what);
        } catch (const DomainError& e) {
            t.record(false, what + ": " + e.what());
        }
    }
    return t.res;
}

std::vector<SuiteResult> run_selftest(std::uint64_t seed, const std::string& scale) {
    if (scale != "small" && scale != "default") throw InvalidParams("scale must be small or default");
    const bool small = scale == "small";
    return {
        suite_normal_form_round_trip(seed, small ? 8 : 60),
        suite_mazur_inequality(seed + 1, small ? 40 : 300),
        suite_central_descent(seed + 2, small ? 200 : 1000),
        suite_honda_invariants(seed + 3, small ? 8 : 60),
        suite_uniqueness_certificate(small ? std::vector<i64>{3} : std::vector<i64>{3, 5}, small ? 4 : 6, {1, 2}),
        suite_baer_sum(3, small ? 2 : 3, seed + 5, small ? 8 : 30, 6),
        suite_hypothesis_audit(seed + 6, small ? 2 : 3, small),
        suite_slope_filtration_lift(seed + 7, small ? 8 : 40),
    };
}

Report cmd_selftest(std::uint64_t seed, const std::string& scale) {
    Report rep;
    rep.command = "selftest";
    rep.add("seed", std::to_string(seed));
    rep.add("scale", scale);
    for (const auto& s : run_selftest(seed, scale)) {
        rep.check(s.name, s.pass());
        rep.add(s.name + "_instances", static_cast<i64>(s.instances));
        rep.add(s.name + "_failures", static_cast<i64>(s.failures));
        if (!s.summary.empty()) rep.add(s.name + "_summary", s.summary);
        if (!s.first_failure.empty()) rep.add(s.name + "_first_failure", s.first_failure);
    }
    return rep;
}

}  // namespace fcrystal
