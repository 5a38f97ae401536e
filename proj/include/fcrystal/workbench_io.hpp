#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcrystal/crystal.hpp"

namespace fcrystal {

// One matrix entry as written in a workbench file: 0, or p^val times a unit
// given by its power-basis coefficients.
struct RawEntry {
    bool zero = true;
    int val = 0;
    std::vector<i64> coeffs;
    bool operator==(const RawEntry&) const = default;
};
using RawMatrix = std::vector<std::vector<RawEntry>>;

// Flat key = value lines plus bracketed matrix blocks; see docs/input_grammar.md.
struct WorkbenchInput {
    std::map<std::string, std::string> values;
    std::map<std::string, RawMatrix> matrices;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    const std::string& get(const std::string& key) const;  // ParseError when absent
    i64 get_int(const std::string& key) const;
    std::vector<int> get_ints(const std::string& key) const;
    const RawMatrix& matrix(const std::string& key) const;
    bool operator==(const WorkbenchInput&) const = default;
};

WorkbenchInput parse_workbench(std::string_view text);  // ParseError naming the line
std::string serialize_workbench(const WorkbenchInput& in);
std::string input_hash(const WorkbenchInput& in);  // FNV-1a of the canonical form, 16 hex digits

std::string format_raw_matrix(const RawMatrix& m, int indent = 2);

// Entries of an integral matrix in canonical form: unit coefficients reduced
// modulo p^(N - val). shift is subtracted from every valuation.
RawMatrix raw_from_matrix(const WittRing& r, const WMat& A, int shift = 0);
// Integral matrix from entries with val >= 0; NotIntegral otherwise.
WMat matrix_from_raw(const WittRing& r, const RawMatrix& m);

struct Problem {
    WittRing ring;
    GroupPreset preset;
    GCrystal crystal;
    Cochar mu;
};

// Reads group, p, s, N, mu and the matrix b. precision overrides N.
Problem load_problem(const WorkbenchInput& in, std::optional<int> precision = std::nullopt);

enum class ReportFormat { Text, Record };

// Ordered results of one command. Rendering depends only on the records, so a
// report is byte-identical for identical input and seed; timing is opt-in.
struct Report {
    struct Item {
        std::string key;
        std::string value;
        std::optional<RawMatrix> matrix;
    };
    std::string command;
    std::string input_hash;
    std::vector<Item> items;
    bool pass = true;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, bool value);
    void add(const std::string& key, i64 value);
    void add_matrix(const std::string& key, RawMatrix m);
    // Records a named check and folds it into the overall status.
    void check(const std::string& key, bool ok);
    const std::string* find(const std::string& key) const;

    // Text prints "key: value"; Record prints "key = value" and parses back as input.
    std::string render(ReportFormat fmt) const;
};

}  // namespace fcrystal
