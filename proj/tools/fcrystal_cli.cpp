#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fcrystal/commands.hpp"
#include "fcrystal/errors.hpp"
#include "fcrystal/selftest.hpp"

using namespace fcrystal;

namespace {

// Exit codes: 0 ok, 1 a reported check failed, 2 domain error, 3 precision loss, 4 I/O.
constexpr int kCheckFailed = 1;
constexpr int kDomain = 2;
constexpr int kPrecision = 3;
constexpr int kIo = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

WorkbenchInput read_input(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_workbench(ss.str());
}

std::uint64_t parse_seed(const std::string& text, const char* source) {
    try {
        size_t pos = 0;
        const unsigned long long v = std::stoull(text, &pos);
        if (pos == text.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw InvalidParams(std::string("bad seed '") + text + "' from " + source);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fcrystal: invariants, normal forms, canonical lifts and deformation cascades of F-crystals"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string input, format = "text", scale = "default";
    std::optional<std::string> seed_flag;
    std::optional<int> precision;
    int ext_budget = 0;
    bool timing = false;

    app.add_option("--seed", seed_flag, "randomness seed (default: WORKBENCH_SEED, then the input's seed, then 1)");
    app.add_option("--precision", precision, "override N from the input")->check(CLI::Range(1, 64));
    app.add_option("--ext-budget", ext_budget, "largest residue degree the normal form may use (0 = 8 s)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "record"}));
    app.add_flag("--timing", timing, "append the elapsed time (makes reports non-reproducible)");

    auto* inv = app.add_subcommand("invariants", "Hodge, Newton, Kottwitz, admissibility, mu-ordinarity");
    auto* can = app.add_subcommand("canonical", "normal form, canonical lift, Honda checks, uniqueness certificate");
    auto* cas = app.add_subcommand("cascade", "fiber sums, coset combinations, isogeny shifts, hypothesis audit");
    auto* st = app.add_subcommand("selftest", "run the property battery");
    for (auto* sub : {inv, can, cas})
        sub->add_option("--input", input, "workbench input file")->required();
    st->add_option("--scale", scale, "battery size")->check(CLI::IsMember({"small", "default"}));

    CLI11_PARSE(app, argc, argv);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::optional<WorkbenchInput> in;
        if (!st->parsed()) in = read_input(input);

        CommandOptions opt;
        opt.precision = precision;
        opt.ext_budget = ext_budget;
        if (seed_flag)
            opt.seed = parse_seed(*seed_flag, "--seed");
        else if (const char* env = std::getenv("WORKBENCH_SEED"))
            opt.seed = parse_seed(env, "WORKBENCH_SEED");
        else if (in && in->has("seed"))
            opt.seed = parse_seed(in->get("seed"), "the input");

        Report rep;
        if (inv->parsed())
            rep = cmd_invariants(*in, opt);
        else if (can->parsed())
            rep = cmd_canonical(*in, opt);
        else if (cas->parsed())
            rep = cmd_cascade(*in, opt);
        else
            rep = cmd_selftest(opt.seed, scale);

        if (timing) {
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rep.add("elapsed_seconds", std::to_string(secs));
        }
        std::cout << rep.render(format == "record" ? ReportFormat::Record : ReportFormat::Text);
        return rep.pass ? 0 : kCheckFailed;
    } catch (const PrecisionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPrecision;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const IoError& e) {
        std::cerr << "error: IOError: " << e.what() << "\n";
        return kIo;
    }
}
