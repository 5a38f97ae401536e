#pragma once

#include <cstdint>
#include <optional>

#include "fcrystal/workbench_io.hpp"

namespace fcrystal {

struct CommandOptions {
    std::uint64_t seed = 1;
    std::optional<int> precision;  // overrides N from the input
    int ext_budget = 0;            // 0 lets normal_form pick 8 s
};

// Hodge, Newton and Kottwitz invariants plus admissibility and mu-ordinarity.
Report cmd_invariants(const WorkbenchInput& in, const CommandOptions& opt);

// Normal form witness, canonical lift, Honda validation and the uniqueness
// certificate of the optional coordinate matrix u (identity when absent).
Report cmd_canonical(const WorkbenchInput& in, const CommandOptions& opt);

// op = audit | sum | combine | shift | restrict on the normal-form layout.
// Points x, y, z are matrices on the level's coordinates.
Report cmd_cascade(const WorkbenchInput& in, const CommandOptions& opt);

}  // namespace fcrystal
