#pragma once

// Communication patterns over a p x q task grid (task rank = r*q + c).
//
// Halo: 2-D toroidal 5-point stencil, 1/4 unit to each of the four neighbors.
// Transpose: 1/(2q) unit to every task of the same row and 1/(2p) to every
// task of the same column, self included in both cliques; per-task out-volume
// is exactly 1 unit for both patterns.

#include <functional>
#include <string>
#include <vector>

#include "percs/rational.hpp"

namespace percs {

struct JobGrid {
  int p = 0;  // rows
  int q = 0;  // cols
  long long tasks() const { return 1LL * p * q; }
  bool operator==(const JobGrid&) const = default;
};

enum class Pattern { Halo, Transpose };

Pattern parse_pattern(const std::string& name);  // "halo" | "transpose"
const char* to_string(Pattern p);

struct Demand {
  int src = 0;
  int dst = 0;
  Rational volume;
};

using DemandFn = std::function<void(int src, int dst, const Rational& volume)>;

// Streams the 4*p*q halo demands. Requires p, q >= 2.
void halo_demands(const JobGrid& grid, const DemandFn& fn);

// Streams the (p+q)*p*q transpose demands (self appears once per clique).
void transpose_demands(const JobGrid& grid, const DemandFn& fn);

void pattern_demands(Pattern pat, const JobGrid& grid, const DemandFn& fn);

std::vector<Demand> demand_list(Pattern pat, const JobGrid& grid);

}  // namespace percs
