#pragma once

#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "fcrystal/modint.hpp"

namespace fcrystal {

using Q = boost::rational<i64>;
using Cochar = std::vector<int>;  // weights on the diagonal torus, length d
using QCochar = std::vector<Q>;

enum class GroupKind { GL, GSp, ResGL };

// GL(n); GSp(2n) with form antidiag(1,...,1,-1,...,-1) and torus
// diag(t_1, ..., t_n, c/t_n, ..., c/t_1); ResGL(n, s0) as s0 diagonal GL(n)
// blocks with sigma moving block k to block k+1.
struct GroupPreset {
    GroupKind kind = GroupKind::GL;
    int n = 1;   // GL rank, half the GSp rank, or the block size
    int s0 = 1;  // number of blocks for ResGL
    int d = 1;   // matrix size
    std::vector<std::vector<int>> positive_roots;  // characters of the diagonal torus
    std::vector<Cochar> simple_coroots;
    std::vector<int> galois_action;  // coordinate i maps to galois_action[i]

    std::string name() const;
    int block_of(int i) const { return kind == GroupKind::ResGL ? i / n : 0; }
    int partner(int i) const { return d - 1 - i; }  // GSp: the index paired with i by the form
    bool operator==(const GroupPreset& o) const { return kind == o.kind && n == o.n && s0 == o.s0; }
};

GroupPreset make_gl(int n);
GroupPreset make_gsp(int two_n);
GroupPreset make_resgl(int n, int s0);
// "GL:n", "GSp:2n", "ResGL:n:s0"; ParseError otherwise.
GroupPreset parse_preset(const std::string& text);

QCochar to_rational(const Cochar& mu);
bool is_integral(const QCochar& mu);
Cochar to_integral(const QCochar& mu);  // requires is_integral

// GSp cocharacters satisfy w_i + w_{i'} = c; every vector lies on the torus otherwise.
bool on_torus(const GroupPreset& g, const QCochar& mu);
bool is_dominant(const GroupPreset& g, const QCochar& mu);

QCochar dominant_rep(const GroupPreset& g, const QCochar& mu);
Cochar dominant_rep(const GroupPreset& g, const Cochar& mu);

// mu <= mu2: mu2 - mu is a nonnegative rational combination of simple coroots.
bool leq_dominance(const GroupPreset& g, const QCochar& mu, const QCochar& mu2);

QCochar galois_action(const GroupPreset& g, const QCochar& mu);  // the image of mu under sigma
Cochar galois_action(const GroupPreset& g, const Cochar& mu);
QCochar galois_average(const GroupPreset& g, const Cochar& mu);
QCochar galois_average(const GroupPreset& g, const QCochar& mu);

Q pairing(const std::vector<int>& root, const QCochar& mu);
bool is_central(const GroupPreset& g, const QCochar& mu);
bool is_central(const GroupPreset& g, const Cochar& mu);

// pi_1(G)_Gamma = Z: weight sum for GL and ResGL, similitude weight for GSp.
i64 kottwitz_of_cocharacter(const GroupPreset& g, const Cochar& mu);
Q kottwitz_of_cocharacter(const GroupPreset& g, const QCochar& mu);

struct SlopeBlock {
    Q slope;
    std::vector<int> coords;  // increasing
};

// Coordinates grouped by equal weight, slopes decreasing. For ResGL the group
// spans all GL blocks; the Levi itself is cut further by same_levi_block.
std::vector<SlopeBlock> levi_of(const GroupPreset& g, const QCochar& nu);
bool same_levi_block(const GroupPreset& g, const QCochar& nu, int i, int j);

// Matrix positions (i, j) whose root pairs negatively with mu, i.e. mu_i < mu_j
// inside one GL block.
std::vector<std::pair<int, int>> opposite_unipotent_positions(const GroupPreset& g, const Cochar& mu);
// Matrix positions allowed in G's Lie algebra at all (same GL block).
bool position_in_group(const GroupPreset& g, int i, int j);

// Weyl group elements as coordinate permutations pi (coordinate i goes to pi[i]).
// GSp permutations commute with i -> i'.
std::vector<std::vector<int>> weyl_group(const GroupPreset& g);
QCochar weyl_act(const std::vector<int>& pi, const QCochar& mu);

std::string format_cochar(const Cochar& mu);
std::string format_cochar(const QCochar& mu);

}  // namespace fcrystal
