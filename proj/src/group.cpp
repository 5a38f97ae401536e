#include "fcrystal/group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fcrystal/errors.hpp"

namespace fcrystal {

namespace {

std::vector<int> root(int d, int i, int j) {
    std::vector<int> a(d, 0);
    a[i] += 1;
    a[j] -= 1;
    return a;
}

void check_length(const GroupPreset& g, size_t len) {
    if (static_cast<int>(len) != g.d)
        throw InvalidParams("cocharacter has length " + std::to_string(len) + ", expected " + std::to_string(g.d));
}

}  // namespace

std::string GroupPreset::name() const {
    switch (kind) {
        case GroupKind::GL: return "GL:" + std::to_string(n);
        case GroupKind::GSp: return "GSp:" + std::to_string(2 * n);
        case GroupKind::ResGL: return "ResGL:" + std::to_string(n) + ":" + std::to_string(s0);
    }
    return "?";
}

GroupPreset make_gl(int n) {
    if (n < 1) throw InvalidParams("GL rank must be positive");
    GroupPreset g;
    g.kind = GroupKind::GL;
    g.n = n;
    g.d = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.positive_roots.push_back(root(n, i, j));
    for (int i = 0; i + 1 < n; ++i) g.simple_coroots.push_back(root(n, i, i + 1));
    g.galois_action.resize(n);
    std::iota(g.galois_action.begin(), g.galois_action.end(), 0);
    return g;
}

GroupPreset make_gsp(int two_n) {
    if (two_n < 2 || two_n % 2 != 0) throw InvalidParams("GSp rank must be even and positive");
    GroupPreset g;
    g.kind = GroupKind::GSp;
    g.n = two_n / 2;
    g.d = two_n;
    const int d = two_n;
    // e_i - e_j and e_j' - e_i' agree on the torus; keep the one with i + j <= d - 1 (0-based).
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (i + j <= d - 1) g.positive_roots.push_back(root(d, i, j));
    for (int i = 0; i + 1 < g.n; ++i) {
        Cochar c = root(d, i, i + 1);
        c[d - 1 - (i + 1)] += 1;
        c[d - 1 - i] -= 1;
        g.simple_coroots.push_back(c);
    }
    g.simple_coroots.push_back(root(d, g.n - 1, g.n));
    g.galois_action.resize(d);
    std::iota(g.galois_action.begin(), g.galois_action.end(), 0);
    return g;
}

GroupPreset make_resgl(int n, int s0) {
    if (n < 1 || s0 < 1) throw InvalidParams("ResGL needs positive block size and degree");
    GroupPreset g;
    g.kind = GroupKind::ResGL;
    g.n = n;
    g.s0 = s0;
    g.d = n * s0;
    for (int b = 0; b < s0; ++b) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) g.positive_roots.push_back(root(g.d, b * n + i, b * n + j));
        for (int i = 0; i + 1 < n; ++i) g.simple_coroots.push_back(root(g.d, b * n + i, b * n + i + 1));
    }
    g.galois_action.resize(g.d);
    for (int i = 0; i < g.d; ++i) g.galois_action[i] = (i + n) % g.d;
    return g;
}

GroupPreset parse_preset(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    auto num = [&](const std::string& s) {
        try {
            size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos != s.size()) throw ParseError("bad integer '" + s + "' in group '" + text + "'");
            return v;
        } catch (const std::logic_error&) {
            throw ParseError("bad integer '" + s + "' in group '" + text + "'");
        }
    };
    try {
        if (parts.size() == 2 && parts[0] == "GL") return make_gl(num(parts[1]));
        if (parts.size() == 2 && parts[0] == "GSp") return make_gsp(num(parts[1]));
        if (parts.size() == 3 && parts[0] == "ResGL") return make_resgl(num(parts[1]), num(parts[2]));
    } catch (const InvalidParams& e) {
        throw ParseError(e.what());
    }
    throw ParseError("unknown group '" + text + "' (expected GL:n, GSp:2n or ResGL:n:s0)");
}

QCochar to_rational(const Cochar& mu) { return QCochar(mu.begin(), mu.end()); }

bool is_integral(const QCochar& mu) {
    return std::all_of(mu.begin(), mu.end(), [](const Q& q) { return q.denominator() == 1; });
}

Cochar to_integral(const QCochar& mu) {
    Cochar c;
    for (const auto& q : mu) {
        if (q.denominator() != 1) throw InvalidParams("cocharacter is not integral");
        c.push_back(static_cast<int>(q.numerator()));
    }
    return c;
}

bool on_torus(const GroupPreset& g, const QCochar& mu) {
    if (static_cast<int>(mu.size()) != g.d) return false;
    if (g.kind != GroupKind::GSp) return true;
    const Q c = mu[0] + mu[g.d - 1];
    for (int i = 0; i < g.n; ++i)
        if (mu[i] + mu[g.partner(i)] != c) return false;
    return true;
}

bool is_dominant(const GroupPreset& g, const QCochar& mu) {
    if (!on_torus(g, mu)) return false;
    for (const auto& a : g.positive_roots)
        if (pairing(a, mu) < Q(0)) return false;
    return true;
}

QCochar dominant_rep(const GroupPreset& g, const QCochar& mu) {
    check_length(g, mu.size());
    QCochar out = mu;
    switch (g.kind) {
        case GroupKind::GL: std::sort(out.begin(), out.end(), std::greater<>()); break;
        case GroupKind::ResGL:
            for (int b = 0; b < g.s0; ++b)
                std::sort(out.begin() + b * g.n, out.begin() + (b + 1) * g.n, std::greater<>());
            break;
        case GroupKind::GSp: {
            if (!on_torus(g, mu)) throw InvalidParams("cocharacter " + format_cochar(mu) + " is not on the GSp torus");
            const Q c = mu[0] + mu[g.d - 1];
            std::vector<Q> top;
            for (int i = 0; i < g.n; ++i) top.push_back(std::max(mu[i], mu[g.partner(i)]));
            std::sort(top.begin(), top.end(), std::greater<>());
            for (int i = 0; i < g.n; ++i) {
                out[i] = top[i];
                out[g.partner(i)] = c - top[i];
            }
            break;
        }
    }
    return out;
}

Cochar dominant_rep(const GroupPreset& g, const Cochar& mu) { return to_integral(dominant_rep(g, to_rational(mu))); }

bool leq_dominance(const GroupPreset& g, const QCochar& mu, const QCochar& mu2) {
    if (!is_dominant(g, mu)) throw NotDominant(format_cochar(mu) + " is not dominant");
    if (!is_dominant(g, mu2)) throw NotDominant(format_cochar(mu2) + " is not dominant");
    // Solve sum_k x_k coroot_k = mu2 - mu exactly; columns are the simple coroots.
    const int d = g.d, r = static_cast<int>(g.simple_coroots.size());
    std::vector<std::vector<Q>> M(d, std::vector<Q>(r + 1));
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < r; ++k) M[i][k] = g.simple_coroots[k][i];
        M[i][r] = mu2[i] - mu[i];
    }
    int row = 0;
    for (int k = 0; k < r && row < d; ++k) {
        int piv = -1;
        for (int i = row; i < d; ++i)
            if (M[i][k] != Q(0)) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[row], M[piv]);
        const Q inv = Q(1) / M[row][k];
        for (auto& x : M[row]) x *= inv;
        for (int i = 0; i < d; ++i) {
            if (i == row || M[i][k] == Q(0)) continue;
            const Q f = M[i][k];
            for (int j = 0; j <= r; ++j) M[i][j] -= f * M[row][j];
        }
        ++row;
    }
    for (int i = row; i < d; ++i)
        if (M[i][r] != Q(0)) return false;  // outside the coroot span
    for (int i = 0; i < row; ++i)
        if (M[i][r] < Q(0)) return false;
    return true;
}

QCochar galois_action(const GroupPreset& g, const QCochar& mu) {
    check_length(g, mu.size());
    QCochar out(mu.size());
    for (int i = 0; i < g.d; ++i) out[g.galois_action[i]] = mu[i];
    return out;
}

Cochar galois_action(const GroupPreset& g, const Cochar& mu) { return to_integral(galois_action(g, to_rational(mu))); }

QCochar galois_average(const GroupPreset& g, const QCochar& mu) {
    check_length(g, mu.size());
    const int order = g.kind == GroupKind::ResGL ? g.s0 : 1;
    QCochar acc(mu.size(), Q(0)), cur = mu;
    for (int k = 0; k < order; ++k) {
        for (int i = 0; i < g.d; ++i) acc[i] += cur[i];
        cur = galois_action(g, cur);
    }
    for (auto& x : acc) x /= order;
    return acc;
}

QCochar galois_average(const GroupPreset& g, const Cochar& mu) { return galois_average(g, to_rational(mu)); }

Q pairing(const std::vector<int>& root, const QCochar& mu) {
    Q acc = 0;
    for (size_t i = 0; i < root.size(); ++i) acc += root[i] * mu[i];
    return acc;
}

bool is_central(const GroupPreset& g, const QCochar& mu) {
    check_length(g, mu.size());
    for (const auto& a : g.positive_roots)
        if (pairing(a, mu) != Q(0)) return false;
    return true;
}

bool is_central(const GroupPreset& g, const Cochar& mu) { return is_central(g, to_rational(mu)); }

i64 kottwitz_of_cocharacter(const GroupPreset& g, const Cochar& mu) {
    Q k = kottwitz_of_cocharacter(g, to_rational(mu));
    return k.numerator();
}

Q kottwitz_of_cocharacter(const GroupPreset& g, const QCochar& mu) {
    check_length(g, mu.size());
    if (g.kind == GroupKind::GSp) {
        if (!on_torus(g, mu)) throw InvalidParams("cocharacter " + format_cochar(mu) + " is not on the GSp torus");
        return mu[0] + mu[g.d - 1];
    }
    Q acc = 0;
    for (const auto& x : mu) acc += x;
    return acc;
}

std::vector<SlopeBlock> levi_of(const GroupPreset& g, const QCochar& nu) {
    if (!is_dominant(g, nu)) throw NotDominant(format_cochar(nu) + " is not dominant");
    std::vector<Q> values(nu.begin(), nu.end());
    std::sort(values.begin(), values.end(), std::greater<>());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<SlopeBlock> blocks;
    for (const Q& v : values) {
        SlopeBlock b{v, {}};
        for (int i = 0; i < g.d; ++i)
            if (nu[i] == v) b.coords.push_back(i);
        blocks.push_back(std::move(b));
    }
    return blocks;
}

bool same_levi_block(const GroupPreset& g, const QCochar& nu, int i, int j) {
    return g.block_of(i) == g.block_of(j) && nu[i] == nu[j];
}

bool position_in_group(const GroupPreset& g, int i, int j) { return g.block_of(i) == g.block_of(j); }

std::vector<std::pair<int, int>> opposite_unipotent_positions(const GroupPreset& g, const Cochar& mu) {
    check_length(g, mu.size());
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < g.d; ++i)
        for (int j = 0; j < g.d; ++j)
            if (position_in_group(g, i, j) && mu[i] < mu[j]) out.emplace_back(i, j);
    return out;
}

std::vector<std::vector<int>> weyl_group(const GroupPreset& g) {
    std::vector<std::vector<int>> out;
    if (g.kind == GroupKind::GSp) {
        std::vector<int> perm(g.n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            for (int signs = 0; signs < (1 << g.n); ++signs) {
                std::vector<int> pi(g.d);
                for (int i = 0; i < g.n; ++i) {
                    const bool flip = (signs >> i) & 1;
                    pi[i] = flip ? g.partner(perm[i]) : perm[i];
                    pi[g.partner(i)] = g.partner(pi[i]);
                }
                out.push_back(pi);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }
    const int blocks = g.kind == GroupKind::ResGL ? g.s0 : 1;
    std::vector<int> base(g.n);
    std::iota(base.begin(), base.end(), 0);
    std::vector<std::vector<int>> block_perms;
    do block_perms.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
    std::vector<size_t> idx(blocks, 0);
    for (;;) {
        std::vector<int> pi(g.d);
        for (int b = 0; b < blocks; ++b)
            for (int i = 0; i < g.n; ++i) pi[b * g.n + i] = b * g.n + block_perms[idx[b]][i];
        out.push_back(pi);
        int b = 0;
        while (b < blocks && ++idx[b] == block_perms.size()) idx[b++] = 0;
        if (b == blocks) break;
    }
    return out;
}

QCochar weyl_act(const std::vector<int>& pi, const QCochar& mu) {
    QCochar out(mu.size());
    for (size_t i = 0; i < mu.size(); ++i) out[pi[i]] = mu[i];
    return out;
}

std::string format_cochar(const Cochar& mu) { return format_cochar(to_rational(mu)); }

std::string format_cochar(const QCochar& mu) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < mu.size(); ++i) {
        if (i) os << ',';
        os << mu[i].numerator();
        if (mu[i].denominator() != 1) os << '/' << mu[i].denominator();
    }
    os << ')';
    return os.str();
}

}  // namespace fcrystal
