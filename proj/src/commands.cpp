#include "fcrystal/commands.hpp"

#include "fcrystal/cascade.hpp"
#include "fcrystal/errors.hpp"

namespace fcrystal {

namespace {

Report start(const std::string& command, const WorkbenchInput& in, const Problem& P, const CommandOptions& opt) {
    Report rep;
    rep.command = command;
    rep.input_hash = input_hash(in);
    rep.add("group", P.preset.name());
    rep.add("p", static_cast<i64>(P.ring.p()));
    rep.add("s", static_cast<i64>(P.ring.s()));
    rep.add("N", static_cast<i64>(P.ring.N()));
    rep.add("mu", format_cochar(P.mu));
    rep.add("seed", std::to_string(opt.seed));
    // Echoing b in canonical form lets a record report be read back as an input.
    rep.add_matrix("b", raw_from_matrix(P.ring, P.crystal.b, P.crystal.shift));
    return rep;
}

// A matrix from the input, moved into the ring of the normal form.
WMat input_matrix(const WorkbenchInput& in, const std::string& key, const Problem& P, const NormalForm& nf) {
    const WMat A = matrix_from_raw(P.ring, in.matrix(key));
    return nf.extension ? mat_embed(*nf.extension, P.ring, A) : A;
}

std::pair<int, int> level_of(const WorkbenchInput& in, const std::string& key) {
    const std::vector<int> v = in.get_ints(key);
    if (v.size() != 2) throw ParseError("key '" + key + "' expects two indices a, b");
    return {v[0], v[1]};
}

std::string level_name(int a, int b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

}  // namespace

Report cmd_invariants(const WorkbenchInput& in, const CommandOptions& opt) {
    const Problem P = load_problem(in, opt.precision);
    Report rep = start("invariants", in, P, opt);
    const Invariants inv = invariants(P.crystal);
    rep.add("hodge", format_cochar(inv.hodge));
    rep.add("newton", format_cochar(inv.newton));
    rep.add("kottwitz", inv.kottwitz);
    rep.add("admissible", admissible(P.crystal, P.mu));
    rep.add("ordinary", is_mu_ordinary(P.crystal, P.mu));
    return rep;
}

Report cmd_canonical(const WorkbenchInput& in, const CommandOptions& opt) {
    const Problem P = load_problem(in, opt.precision);
    Report rep = start("canonical", in, P, opt);
    const CanonicalLift lift = canonical_lift(P.crystal, P.mu, opt.ext_budget, opt.seed);
    const NormalForm& nf = lift.normal;
    const WittRing& R = nf.ring;
    const GroupPreset& g = P.preset;

    rep.add("extension_degree", static_cast<i64>(nf.extension ? nf.extension->degree : 1));
    rep.add("upsilon", format_cochar(nf.upsilon));
    rep.add("weights", format_cochar(lift.weights));
    rep.add_matrix("g", raw_from_matrix(R, nf.g));
    const GCrystal x = nf.extension ? embed_crystal(*nf.extension, P.crystal) : P.crystal;
    rep.check("witness", in_group_O(R, g, nf.g) && sigma_conjugate(x, nf.g).b == nf.reduced.b);

    const HondaReport h = honda_validate(lift.system);
    rep.add("honda_contains_pD", h.contains_pD);
    rep.add("honda_hodge_matches", h.hodge_matches);
    rep.add("honda_cokernel_length", static_cast<i64>(h.cokernel_length));
    rep.add_matrix("F_can", raw_from_matrix(R, lift.system.F.basis));
    rep.check("honda", h.ok());
    bool blocks_ok = true;
    for (const auto& blk : lift.blocks) blocks_ok = blocks_ok && honda_validate(blk).ok();
    rep.add("slope_blocks", static_cast<i64>(lift.blocks.size()));
    rep.check("honda_blocks", blocks_ok);
    if (g.kind == GroupKind::GSp) rep.check("lagrangian", lift.lagrangian);

    const GammaP gp = gamma_p(nf.reduced);
    rep.add("gamma_power", static_cast<i64>(gp.n));
    rep.add("gamma_exponents", format_cochar(gp.exponents));
    rep.check("gamma_centralizes", gp.in_centralizer);

    const WMat u = in.matrices.count("u") ? input_matrix(in, "u", P, nf) : WMat::identity(R, g.d);
    const std::string bad = adapted_violation(R, g, lift.weights, u);
    if (!bad.empty()) throw NotAdapted(bad);
    HondaSystem moved = lift.system;
    moved.F = HodgeFiltration{mat_mul(R, u, moved.F.basis), std::nullopt};
    rep.check("honda_u", honda_validate(moved).ok());
    const UniquenessCertificate cert = uniqueness_certificate(R, u, nf.reduced);
    rep.add("certificate_identity", cert.is_identity);
    rep.add("certificate_fixed", cert.fixed_point);
    rep.add("certificate_trivialized", cert.trivialized);
    rep.add("certificate_predicted_trivial", cert.predicted_trivial);
    rep.check("certificate", cert.ok());
    return rep;
}

Report cmd_cascade(const WorkbenchInput& in, const CommandOptions& opt) {
    const Problem P = load_problem(in, opt.precision);
    Report rep = start("cascade", in, P, opt);
    const NormalForm nf = normal_form(P.crystal, P.mu, opt.ext_budget, opt.seed);
    const CascadeLayout L = make_layout(nf.reduced);
    const std::string op = in.has("op") ? in.get("op") : "audit";
    rep.add("op", op);
    rep.add("levels", static_cast<i64>(L.r()));
    rep.add("weights", format_cochar(L.weights));

    if (op == "audit") {
        const int samples = in.has("samples") ? static_cast<int>(in.get_int("samples")) : 6;
        if (samples < 1 || samples > 1000) throw InvalidParams("samples must lie in 1..1000");
        const AuditReport audit = hypothesis_audit(L, opt.seed, samples);
        for (size_t i = 0; i < audit.checks.size(); ++i) {
            const AuditCheck& c = audit.checks[i];
            rep.add("check_" + std::to_string(i + 1),
                    c.level + " " + c.name + ": " + (c.pass ? "PASS" : "FAIL") + (c.detail.empty() ? "" : " (" + c.detail + ")"));
        }
        for (size_t i = 0; i < audit.notes.size(); ++i) rep.add("note_" + std::to_string(i + 1), audit.notes[i]);
        rep.add("subgroup_fibers", audit.subgroup_fibers);
        rep.check("audit", audit.pass());
        return rep;
    }

    const auto [a, b] = level_of(in, "level");
    auto point = [&](const std::string& key) {
        DefPoint x{a, b, input_matrix(in, key, P, nf)};
        const std::string bad = point_violation(L, x);
        if (!bad.empty()) throw NotAdapted(key + " is not a point of level " + level_name(a, b) + ": " + bad);
        return x;
    };
    rep.add("level", level_name(a, b));
    DefPoint result;
    if (op == "sum" || op == "combine") {
        const auto [ba, bb] = level_of(in, "base");
        rep.add("base", level_name(ba, bb));
        result = op == "sum" ? fiber_sum(L, point("x"), point("y"), ba, bb)
                             : coset_combine(L, point("x"), point("y"), point("z"), ba, bb);
    } else if (op == "shift") {
        const int k = static_cast<int>(in.get_int("k"));
        rep.add("k", static_cast<i64>(k));
        result = isogeny_shift(L, point("x"), k);
    } else if (op == "restrict") {
        const auto [ta, tb] = level_of(in, "to");
        rep.add("to", level_name(ta, tb));
        result = restrict(L, point("x"), ta, tb);
    } else {
        throw ParseError("unknown cascade op '" + op + "' (audit, sum, combine, shift, restrict)");
    }
    rep.add_matrix("result", raw_from_matrix(L.ring(), result.u));
    rep.check("result_is_point", is_point(L, result));
    return rep;
}

}  // namespace fcrystal
