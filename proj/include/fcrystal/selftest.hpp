#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcrystal/cascade.hpp"
#include "fcrystal/workbench_io.hpp"

namespace fcrystal {

struct SuiteResult {
    std::string name;
    int instances = 0;
    int failures = 0;
    std::string first_failure;
    std::string summary;  // suite-specific counts worth printing
    bool pass() const { return failures == 0 && instances > 0; }
};

// b = g0^{-1} upsilon(p) sigma_G(g0) with g0 random in G(W).
struct RoundTripCase {
    GroupPreset preset;
    Cochar mu;
    WittRing ring;
    WMat g0;
    GCrystal crystal;
};

// Cycles through GL:2, GL:3, GSp:4 and ResGL:2:2 with p in {3, 5, 7}, s <= 3, N <= 12.
// minuscule_only keeps the cocharacters with weights in {0, 1}.
RoundTripCase round_trip_case(int index, Rng& rng, bool minuscule_only = false);

// Every suite is a pure function of its arguments.
SuiteResult suite_normal_form_round_trip(std::uint64_t seed, int instances);
SuiteResult suite_mazur_inequality(std::uint64_t seed, int instances);
SuiteResult suite_central_descent(std::uint64_t seed, int instances);
// One canonical lift per group of four adapted coordinates.
SuiteResult suite_honda_invariants(std::uint64_t seed, int coordinates);
// Every coordinate of U(w) for GL:2 with w = (m, 0), m in gaps, over Z/p^N.
SuiteResult suite_uniqueness_certificate(const std::vector<i64>& primes, int N, const std::vector<int>& gaps);
// Exhaustive rank (1,1) over Z/p^N plus random_cases multi-slope cases at precision random_N.
SuiteResult suite_baer_sum(i64 p, int N, std::uint64_t seed, int random_cases, int random_N);
SuiteResult suite_hypothesis_audit(std::uint64_t seed, int samples, bool small);
SuiteResult suite_slope_filtration_lift(std::uint64_t seed, int instances);

// "small" runs a subset in well under 5 s; "default" runs the whole battery.
std::vector<SuiteResult> run_selftest(std::uint64_t seed, const std::string& scale);
Report cmd_selftest(std::uint64_t seed, const std::string& scale);

}  // namespace fcrystal
