#include "fcrystal/workbench_io.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

#include "fcrystal/errors.hpp"

namespace fcrystal {

namespace {

std::string trim(std::string_view s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool valid_key(const std::string& k) {
    if (k.empty() || !std::isalpha(static_cast<unsigned char>(k[0]))) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

ParseError error_at(int line, const std::string& what) {
    return ParseError("line " + std::to_string(line) + ": " + what);
}

// Cursor over one matrix row.
struct RowReader {
    std::string_view s;
    size_t i = 0;
    int line = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip();
        return i >= s.size();
    }
    void expect(char c) {
        skip();
        if (i >= s.size() || s[i] != c)
            throw error_at(line, std::string("expected '") + c + "' in matrix entry");
        ++i;
    }
    i64 integer() {
        skip();
        const size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        const std::string tok(s.substr(start, i - start));
        try {
            size_t pos = 0;
            const long long v = std::stoll(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::logic_error&) {
            throw error_at(line, "bad integer '" + tok + "' in matrix entry");
        }
    }
    RawEntry entry() {
        skip();
        if (i < s.size() && s[i] == '(') {
            ++i;
            RawEntry e;
            e.zero = false;
            const i64 v = integer();
            if (v < -1000 || v > 1000) throw error_at(line, "valuation out of range");
            e.val = static_cast<int>(v);
            expect(',');
            expect('[');
            e.coeffs.push_back(integer());
            for (skip(); i < s.size() && s[i] == ','; skip()) {
                ++i;
                e.coeffs.push_back(integer());
            }
            expect(']');
            expect(')');
            return e;
        }
        if (integer() != 0) throw error_at(line, "an entry is 0 or (val, [c0, ..., c_{s-1}])");
        return RawEntry{};
    }
};

std::string format_entry(const RawEntry& e) {
    if (e.zero) return "0";
    std::string out = "(" + std::to_string(e.val) + ",[";
    for (size_t k = 0; k < e.coeffs.size(); ++k) out += (k ? "," : "") + std::to_string(e.coeffs[k]);
    return out + "])";
}

WittElem unit_of(const WittRing& r, const RawEntry& e) {
    if (static_cast<int>(e.coeffs.size()) != r.s())
        throw ParseError("entry " + format_entry(e) + " needs " + std::to_string(r.s()) + " coefficients");
    const WittElem u = r.from_coeffs(e.coeffs);
    if (!r.is_unit(u)) throw ParseError("entry " + format_entry(e) + " does not have a unit part");
    return u;
}

}  // namespace

const std::string& WorkbenchInput::get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ParseError("missing key '" + key + "'");
    return it->second;
}

i64 WorkbenchInput::get_int(const std::string& key) const {
    const std::string& v = get(key);
    try {
        size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::logic_error&) {
        throw ParseError("key '" + key + "' expects an integer, got '" + v + "'");
    }
}

std::vector<int> WorkbenchInput::get_ints(const std::string& key) const {
    std::string v = get(key);
    for (char& c : v)
        if (c == ',' || c == '(' || c == ')') c = ' ';
    std::istringstream ss(v);
    std::vector<int> out;
    for (std::string tok; ss >> tok;) {
        try {
            size_t pos = 0;
            out.push_back(std::stoi(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::logic_error&) {
            throw ParseError("key '" + key + "' expects integers, got '" + get(key) + "'");
        }
    }
    if (out.empty()) throw ParseError("key '" + key + "' is empty");
    return out;
}

const RawMatrix& WorkbenchInput::matrix(const std::string& key) const {
    auto it = matrices.find(key);
    if (it == matrices.end()) throw ParseError("missing matrix '" + key + "'");
    return it->second;
}

WorkbenchInput parse_workbench(std::string_view text) {
    WorkbenchInput in;
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        lines.push_back(cur);
    }
    auto strip_comment = [](const std::string& l) {
        const size_t h = l.find('#');
        return trim(h == std::string::npos ? std::string_view(l) : std::string_view(l).substr(0, h));
    };
    for (size_t li = 0; li < lines.size(); ++li) {
        const int line_no = static_cast<int>(li) + 1;
        const std::string l = strip_comment(lines[li]);
        if (l.empty()) continue;
        const size_t eq = l.find('=');
        if (eq == std::string::npos) throw error_at(line_no, "expected 'key = value'");
        const std::string key = trim(std::string_view(l).substr(0, eq));
        const std::string value = trim(std::string_view(l).substr(eq + 1));
        if (!valid_key(key)) throw error_at(line_no, "bad key '" + key + "'");
        if (in.values.count(key) || in.matrices.count(key)) throw error_at(line_no, "duplicate key '" + key + "'");
        if (value.empty()) throw error_at(line_no, "empty value for '" + key + "'");
        if (value[0] != '[') {
            in.values[key] = value;
            continue;
        }
        // Matrix block: rows follow, one per line, until a line holding "]".
        if (value != "[") throw error_at(line_no, "matrix rows start on the line after '['");
        RawMatrix m;
        bool closed = false;
        for (++li; li < lines.size(); ++li) {
            const int row_no = static_cast<int>(li) + 1;
            const std::string row = strip_comment(lines[li]);
            if (row.empty()) continue;
            if (row == "]") {
                closed = true;
                break;
            }
            RowReader rd{row, 0, row_no};
            std::vector<RawEntry> entries;
            while (!rd.done()) entries.push_back(rd.entry());
            if (!m.empty() && entries.size() != m.front().size())
                throw error_at(row_no, "row of " + std::to_string(entries.size()) + " entries in a matrix with " +
                                           std::to_string(m.front().size()) + " columns");
            m.push_back(std::move(entries));
        }
        if (!closed) throw error_at(line_no, "matrix '" + key + "' is not closed by ']'");
        if (m.empty()) throw error_at(line_no, "matrix '" + key + "' has no rows");
        in.matrices[key] = std::move(m);
    }
    return in;
}

std::string format_raw_matrix(const RawMatrix& m, int indent) {
    std::string out = "[\n";
    for (const auto& row : m) {
        out += std::string(static_cast<size_t>(indent), ' ');
        for (size_t j = 0; j < row.size(); ++j) out += (j ? " " : "") + format_entry(row[j]);
        out += "\n";
    }
    return out + "]";
}

std::string serialize_workbench(const WorkbenchInput& in) {
    std::string out;
    for (const auto& [k, v] : in.values) out += k + " = " + v + "\n";
    for (const auto& [k, m] : in.matrices) out += k + " = " + format_raw_matrix(m) + "\n";
    return out;
}

std::string input_hash(const WorkbenchInput& in) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_workbench(in)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RawMatrix raw_from_matrix(const WittRing& r, const WMat& A, int shift) {
    RawMatrix m(static_cast<size_t>(A.rows), std::vector<RawEntry>(static_cast<size_t>(A.cols)));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) {
            const WittElem& x = A(i, j);
            if (r.is_zero(x)) continue;
            const int v = r.val(x);
            RawEntry& e = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
            e.zero = false;
            e.val = v - shift;
            e.coeffs = r.reduce_mod_p_power(r.div_p_power(x, v), r.N() - v).coeffs;
        }
    return m;
}

WMat matrix_from_raw(const WittRing& r, const RawMatrix& m) {
    const int rows = static_cast<int>(m.size());
    const int cols = rows ? static_cast<int>(m.front().size()) : 0;
    WMat A(r, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const RawEntry& e = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (e.zero) continue;
            if (e.val < 0) throw NotIntegral("entry " + format_entry(e) + " has negative valuation");
            const WittElem u = unit_of(r, e);
            if (e.val < r.N()) A(i, j) = r.scale(u, r.zmod().ppow(e.val));
        }
    return A;
}

Problem load_problem(const WorkbenchInput& in, std::optional<int> precision) {
    const GroupPreset g = parse_preset(in.get("group"));
    const i64 N = precision ? *precision : in.get_int("N");
    const i64 s = in.get_int("s");
    if (N < 1 || N > 64 || s < 1 || s > 64) throw InvalidParams("N and s must lie in 1..64");
    const WittRing r = make_ring(in.get_int("p"), static_cast<int>(s), static_cast<int>(N));
    const Cochar mu = in.get_ints("mu");
    if (static_cast<int>(mu.size()) != g.d)
        throw InvalidParams("mu has " + std::to_string(mu.size()) + " weights, " + g.name() + " needs " +
                            std::to_string(g.d));
    const RawMatrix& b = in.matrix("b");
    if (static_cast<int>(b.size()) != g.d || static_cast<int>(b.front().size()) != g.d)
        throw ParseError("b must be " + std::to_string(g.d) + " x " + std::to_string(g.d) + " for " + g.name());
    std::vector<LaurentElem> entries;
    for (const auto& row : b)
        for (const auto& e : row) entries.push_back(e.zero ? LaurentElem{} : laurent_make(r, e.val, unit_of(r, e)));
    return Problem{r, g, crystal_from_laurent(r, g, entries), mu};
}

void Report::add(const std::string& key, const std::string& value) { items.push_back({key, value, std::nullopt}); }
void Report::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
void Report::add(const std::string& key, i64 value) { add(key, std::to_string(value)); }
void Report::add_matrix(const std::string& key, RawMatrix m) { items.push_back({key, "", std::move(m)}); }

void Report::check(const std::string& key, bool ok) {
    add(key, std::string(ok ? "PASS" : "FAIL"));
    pass = pass && ok;
}

const std::string* Report::find(const std::string& key) const {
    for (const auto& it : items)
        if (it.key == key) return &it.value;
    return nullptr;
}

std::string Report::render(ReportFormat fmt) const {
    const std::string sep = fmt == ReportFormat::Text ? ": " : " = ";
    std::string out = "command" + sep + command + "\n";
    if (!input_hash.empty()) out += "input_hash" + sep + input_hash + "\n";
    for (const auto& it : items) {
        if (it.matrix)
            out += it.key + sep + format_raw_matrix(*it.matrix) + "\n";
        else
            out += it.key + sep + it.value + "\n";
    }
    out += "status" + sep + (pass ? "PASS" : "FAIL") + "\n";
    return out;
}

}  // namespace fcrystal
