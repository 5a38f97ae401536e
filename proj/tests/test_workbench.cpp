#include "doctest.h"

#include "fcrystal/commands.hpp"
#include "fcrystal/errors.hpp"
#include "fcrystal/selftest.hpp"

using namespace fcrystal;

namespace {

const char* kOrdinary = R"(# b = diag(p, 1)
group = GL:2
p = 3
s = 1
N = 6
mu = (1, 0)
b = [
  (1,[1]) 0
  0 (0,[1])   # trailing comment
]
)";

WorkbenchInput with_b(const std::string& head, const std::string& rows) {
    return parse_workbench(head + "b = [\n" + rows + "]\n");
}

const std::string kGl2Head = "group = GL:2\np = 3\ns = 1\nN = 6\nmu = 1, 0\n";

}  // namespace

TEST_CASE("parsing the workbench format") {
    const WorkbenchInput in = parse_workbench(kOrdinary);
    CHECK(in.get("group") == "GL:2");
    CHECK(in.get_int("N") == 6);
    CHECK(in.get_ints("mu") == std::vector<int>{1, 0});
    const RawMatrix& b = in.matrix("b");
    REQUIRE(b.size() == 2);
    CHECK(b[0][0] == RawEntry{false, 1, {1}});
    CHECK(b[0][1].zero);
    CHECK(b[1][1] == RawEntry{false, 0, {1}});
    CHECK(parse_workbench(serialize_workbench(in)) == in);
    CHECK(parse_workbench("m = [\n ( -2 , [ 4 , -1 ] ) 0\n]\n").matrix("m")[0][0] == RawEntry{false, -2, {4, -1}});
}

TEST_CASE("parse errors name the line") {
    auto message = [](const std::string& text) {
        try {
            parse_workbench(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("a = 1\na = 2\n").find("line 2: duplicate key") != std::string::npos);
    CHECK(message("a = 1\njunk\n").find("line 2") != std::string::npos);
    CHECK(message("b = [\n0 0\n0\n]\n").find("line 3: row of 1") != std::string::npos);
    CHECK(message("b = [\n0 0\n").find("not closed") != std::string::npos);
    CHECK(message("b = [\n(1,[1) 0\n]\n").find("expected ']'") != std::string::npos);
    CHECK(message("b = [\n2 0\n]\n").find("an entry is 0") != std::string::npos);
    CHECK(message("1x = 3\n").find("bad key") != std::string::npos);
    CHECK(message("b = [ 0 ]\n").find("line after") != std::string::npos);
    CHECK_THROWS_AS(parse_workbench("mu = (1, x)\n").get_ints("mu"), ParseError);
    CHECK_THROWS_AS(parse_workbench("N = 6a\n").get_int("N"), ParseError);
    CHECK_THROWS_AS(parse_workbench("").get("group"), ParseError);
}

TEST_CASE("matrices round-trip bit-exactly through canonical residues") {
    Rng rng(5);
    for (auto [p, s, N] : std::vector<std::tuple<i64, int, int>>{{3, 1, 6}, {5, 2, 5}, {7, 3, 4}}) {
        const WittRing r = make_ring(p, s, N);
        for (int t = 0; t < 20; ++t) {
            WMat A = random_matrix(r, 3, 2, rng);
            A(0, 0) = r.scale(A(0, 0), r.zmod().ppow(t % N));
            A(1, 1) = r.zero();
            const RawMatrix raw = raw_from_matrix(r, A);
            CHECK(matrix_from_raw(r, raw) == A);
            WorkbenchInput in;
            in.matrices["a"] = raw;
            const WorkbenchInput back = parse_workbench(serialize_workbench(in));
            CHECK(back == in);
            CHECK(matrix_from_raw(r, back.matrix("a")) == A);
            CHECK(input_hash(back) == input_hash(in));
        }
    }
}

TEST_CASE("loading problems") {
    const Problem P = load_problem(parse_workbench(kOrdinary));
    CHECK(P.ring.N() == 6);
    CHECK(P.crystal.shift == 0);
    CHECK(P.mu == Cochar{1, 0});
    CHECK(load_problem(parse_workbench(kOrdinary), 4).ring.N() == 4);

    // A pole of order one: the integral matrix is p * b with shift 1.
    const Problem Q = load_problem(with_b(kGl2Head, "(-1,[1]) 0\n0 (0,[2])\n"));
    CHECK(Q.crystal.shift == 1);
    CHECK(raw_from_matrix(Q.ring, Q.crystal.b, Q.crystal.shift)[0][0] == RawEntry{false, -1, {1}});
    CHECK(raw_from_matrix(Q.ring, Q.crystal.b, Q.crystal.shift)[1][1] == RawEntry{false, 0, {2}});

    CHECK_THROWS_AS(load_problem(with_b(kGl2Head, "(0,[3]) 0\n0 (0,[1])\n")), ParseError);    // not a unit
    CHECK_THROWS_AS(load_problem(with_b(kGl2Head, "(0,[1,0]) 0\n0 (0,[1])\n")), ParseError);  // wrong s
    CHECK_THROWS_AS(load_problem(with_b(kGl2Head, "(0,[1]) 0 0\n0 (0,[1]) 0\n")), ParseError);
    CHECK_THROWS_AS(load_problem(with_b("group = GL:2\np = 4\ns = 1\nN = 6\nmu = 1, 0\n", "(0,[1]) 0\n0 (0,[1])\n")),
                    InvalidParams);
    CHECK_THROWS_AS(load_problem(with_b("group = GL:2\np = 3\ns = 1\nN = 6\nmu = 1, 0, 0\n", "(0,[1]) 0\n0 (0,[1])\n")),
                    InvalidParams);
    CHECK_THROWS_AS(load_problem(with_b("group = SL:2\np = 3\ns = 1\nN = 6\nmu = 1, 0\n", "(0,[1]) 0\n0 (0,[1])\n")),
                    ParseError);
    CHECK_THROWS_AS(matrix_from_raw(Q.ring, RawMatrix{{RawEntry{false, -1, {1}}}}), NotIntegral);
}

TEST_CASE("invariants command") {
    const Report ord = cmd_invariants(parse_workbench(kOrdinary), {});
    CHECK(*ord.find("hodge") == "(1,0)");
    CHECK(*ord.find("newton") == "(1,0)");
    CHECK(*ord.find("ordinary") == "true");

    const Report ss = cmd_invariants(with_b(kGl2Head, "0 (0,[1])\n(1,[1]) 0\n"), {});
    CHECK(*ss.find("newton") == "(1/2,1/2)");
    CHECK(*ss.find("ordinary") == "false");
    CHECK(*ss.find("kottwitz") == "1");
    CHECK_THROWS_AS(cmd_canonical(with_b(kGl2Head, "0 (0,[1])\n(1,[1]) 0\n"), {}), NotOrdinary);

    CommandOptions low;
    low.precision = 3;
    CHECK_THROWS_AS(cmd_invariants(with_b(kGl2Head, "0 (0,[1])\n(1,[1]) 0\n"), low), PrecisionError);
}

TEST_CASE("canonical command on round-trip inputs") {
    Rng rng(17);
    for (int i = 0; i < 8; ++i) {
        const RoundTripCase c = round_trip_case(i, rng, true);
        WorkbenchInput in;
        in.values = {{"group", c.preset.name()},
                     {"p", std::to_string(c.ring.p())},
                     {"s", std::to_string(c.ring.s())},
                     {"N", std::to_string(c.ring.N())},
                     {"mu", format_cochar(c.mu)}};
        in.matrices["b"] = raw_from_matrix(c.ring, c.crystal.b, c.crystal.shift);
        const Report rep = cmd_canonical(in, {});
        INFO(rep.render(ReportFormat::Text));
        CHECK(rep.pass);
        CHECK(*rep.find("certificate") == "PASS");
        if (c.preset.kind == GroupKind::GSp) CHECK(*rep.find("lagrangian") == "PASS");
        // The record rendering is itself a valid input describing the same crystal.
        const WorkbenchInput back = parse_workbench(rep.render(ReportFormat::Record));
        CHECK(load_problem(back).crystal.b == c.crystal.b);
        CHECK(cmd_canonical(back, {}).pass);
    }
}

TEST_CASE("canonical command rejects coordinates outside U(w)") {
    WorkbenchInput in = parse_workbench(kOrdinary);
    in.matrices["u"] = parse_workbench("u = [\n(0,[1]) (1,[1])\n0 (0,[1])\n]\n").matrix("u");
    CHECK_THROWS_AS(cmd_canonical(in, {}), NotAdapted);
    in.matrices["u"] = parse_workbench("u = [\n(0,[1]) 0\n(1,[1]) (0,[1])\n]\n").matrix("u");
    const Report rep = cmd_canonical(in, {});
    CHECK(*rep.find("certificate_fixed") == "false");
    CHECK(*rep.find("certificate_trivialized") == "false");
    CHECK(rep.pass);
}

TEST_CASE("cascade command") {
    const std::string head = "group = GL:2\np = 3\ns = 1\nN = 4\nmu = 1, 0\nb = [\n(1,[1]) 0\n0 (0,[1])\n]\n";
    const std::string x = "x = [\n(0,[1]) 0\n(1,[1]) (0,[1])\n]\n";
    const std::string y = "y = [\n(0,[1]) 0\n(1,[2]) (0,[1])\n]\n";
    const Report sum = cmd_cascade(parse_workbench(head + "op = sum\nlevel = 1, 2\nbase = 2, 2\n" + x + y), {});
    CHECK(sum.pass);
    const RawMatrix* result = nullptr;
    for (const auto& it : sum.items)
        if (it.key == "result") result = &*it.matrix;
    REQUIRE(result);
    CHECK((*result)[1][0] == RawEntry{false, 2, {1}});

    const Report shift = cmd_cascade(parse_workbench(head + "op = shift\nlevel = 1, 2\nk = 0\n" + x), {});
    CHECK(shift.pass);
    CHECK(shift.render(ReportFormat::Text).find("(2,[1]) (0,[1])") != std::string::npos);

    const Report res = cmd_cascade(parse_workbench(head + "op = restrict\nlevel = 1, 2\nto = 2, 2\n" + x), {});
    CHECK(res.render(ReportFormat::Text).find("result: [\n  (0,[1])\n]") != std::string::npos);

    CHECK_THROWS_AS(cmd_cascade(parse_workbench(head + "op = twist\nlevel = 1, 2\n" + x), {}), ParseError);
    CHECK_THROWS_AS(cmd_cascade(parse_workbench(head + "op = sum\nlevel = 1, 2\nbase = 2, 2\n" + x +
                                                "y = [\n(0,[1]) 0\n(0,[1]) (0,[1])\n]\n"),
                                {}),
                    NotAdapted);

    const std::string gl3 = "group = GL:3\np = 3\ns = 1\nN = 8\nmu = 2, 1, 0\nb = [\n(2,[1]) 0 0\n0 (1,[1]) 0\n0 0 (0,[1])\n]\n";
    const Report audit = cmd_cascade(parse_workbench(gl3 + "op = audit\nsamples = 3\n"), {});
    CHECK(audit.pass);
    CHECK(*audit.find("subgroup_fibers") == "true");
    CHECK_THROWS_AS(cmd_cascade(parse_workbench(gl3 + "op = sum\nlevel = 1, 3\nbase = 2, 3\n" +
                                                "x = [\n(0,[1]) 0 0\n0 (0,[1]) 0\n0 (1,[1]) (0,[1])\n]\n" +
                                                "y = [\n(0,[1]) 0 0\n0 (0,[1]) 0\n0 0 (0,[1])\n]\n"),
                                {}),
                    DifferentFibers);
}

TEST_CASE("reports are deterministic") {
    const std::string a = cmd_selftest(9, "small").render(ReportFormat::Record);
    CHECK(a == cmd_selftest(9, "small").render(ReportFormat::Record));
    CHECK(a.find("status = PASS") != std::string::npos);
    CHECK(a != cmd_selftest(10, "small").render(ReportFormat::Record));
    CHECK_THROWS_AS(cmd_selftest(1, "huge"), InvalidParams);

    const WorkbenchInput in = parse_workbench(kOrdinary);
    CommandOptions o1, o2;
    o2.seed = 2;
    CHECK(cmd_canonical(in, o1).render(ReportFormat::Text) == cmd_canonical(in, o1).render(ReportFormat::Text));
    CHECK(input_hash(in) == input_hash(parse_workbench(serialize_workbench(in))));
    CHECK(input_hash(in) != input_hash(parse_workbench(std::string(kOrdinary) + "seed = 3\n")));
    CHECK(cmd_canonical(in, o2).pass);
}
