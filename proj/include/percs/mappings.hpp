#pragma once

// Task-to-processor mapping schemes.
//
// Processor slots are ordered (supernode, node, core): slot = sn*128 +
// node*4 + core. Blocking schemes cut the task grid into alpha x beta blocks
// (row-major block index) and assign them to equal-size processor blocks in
// that canonical slot order, sequentially or by a seeded random bijection.
// The mod-coloring scheme builds the two-permutation perfect coloring and
// places each color's two blocks on the 32 nodes of its supernode. Row and
// column schemes map contiguous row/column slabs of the grid per supernode.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percs/patterns.hpp"
#include "percs/topology.hpp"

namespace percs {

enum class SchemeKind { Default, Blocking, ModColor, Row, Column, Hybrid };

struct SchemeSpec {
  SchemeKind kind = SchemeKind::Default;
  int alpha = 0;  // blocking only
  int beta = 0;
  bool random = false;  // blocking only
  std::string label;    // canonical CLI string
};

// Accepts: default, node-seq, node-rnd, drawer-seq, drawer-rnd, sn-seq,
// sn-rnd, block-<A>x<B>-seq, block-<A>x<B>-rnd, mod-color, row, column,
// hybrid. Throws std::invalid_argument otherwise.
SchemeSpec parse_scheme(const std::string& name);

struct Mapping {
  SystemConfig cfg;
  JobGrid grid;
  std::string scheme;
  std::string detail;  // e.g. which variant hybrid resolved to
  bool randomized = false;
  uint64_t seed = 0;
  std::vector<int> slot;  // task rank -> processor slot

  int supernode_of(int task) const { return slot[task] / kTasksPerSupernode; }
  NodeRef node_of(int task) const {
    const int s = slot[task];
    return {s / kTasksPerSupernode, s % kTasksPerSupernode / kCoresPerNode};
  }
  int core_of(int task) const { return slot[task] % kCoresPerNode; }
};

Mapping default_mapping(const SystemConfig& cfg, const JobGrid& grid);
Mapping blocking_mapping(const SystemConfig& cfg, const JobGrid& grid, int alpha, int beta,
                         bool random, uint64_t seed);
Mapping mod_color_mapping(const SystemConfig& cfg, const JobGrid& grid);
Mapping row_mapping(const SystemConfig& cfg, const JobGrid& grid);
Mapping column_mapping(const SystemConfig& cfg, const JobGrid& grid);
Mapping hybrid_mapping(const SystemConfig& cfg, const JobGrid& grid);

// Dispatch on a parsed scheme; seed is consulted only by random schemes.
Mapping make_mapping(const SystemConfig& cfg, const JobGrid& grid, const SchemeSpec& scheme,
                     uint64_t seed);

// "task supernode node core" lines, one per task.
std::string export_mapping(const Mapping& m);

// --- permutation pairs: 2 x q "nice" stackings ---

struct PermutationPair {
  int q = 0;
  std::vector<int> s1;
  std::vector<int> s2;
};

// s1 = identity, s2(i) = (5i + 2) mod q. Requires q a power of two >= 8.
PermutationPair nice_pair(int q);

// True iff for every symbol the six neighbors in the 2 x q stacking
// (left/right in each row with wrap, below its row-1 copy, above its row-2
// copy) are pairwise distinct.
bool is_nice_pair(const PermutationPair& pair);

// --- perfect grid colorings ---

struct Coloring {
  int p = 0;  // rows
  int q = 0;  // cols
  int k = 0;  // colors
  std::vector<int> cell;  // row-major
  int at(int r, int c) const { return cell[r * q + c]; }
};

// p/2 groups of q colors; even rows take their group in order, odd rows apply
// (5i + 2) mod q to it. Requires p a positive multiple of 4 and q a power of
// two >= 8. Yields k = p*q/2 colors, each appearing twice.
Coloring mod_coloring(int p, int q);

// True iff no color's torus-neighbor multiset (over all its appearances)
// repeats a color or contains the color itself.
bool is_perfect_coloring(const Coloring& col);

// --- grid selection ---

// True when the grid satisfies the scheme's and pattern's preconditions
// (reason, if given, receives the first violated rule).
bool grid_eligible(const SystemConfig& cfg, Pattern pat, const SchemeSpec& scheme,
                   const JobGrid& grid, std::string* reason = nullptr);

// Most-square power-of-two factorization P <= Q of 128*ns that the scheme and
// pattern accept. Throws std::invalid_argument when none exists.
JobGrid choose_grid(const SystemConfig& cfg, Pattern pat, const SchemeSpec& scheme);

}  // namespace percs
