#include "percs/patterns.hpp"

#include <stdexcept>

namespace percs {

Pattern parse_pattern(const std::string& name) {
  if (name == "halo") return Pattern::Halo;
  if (name == "transpose") return Pattern::Transpose;
  throw std::invalid_argument("unknown pattern '" + name + "' (expected halo|transpose)");
}

const char* to_string(Pattern p) { return p == Pattern::Halo ? "halo" : "transpose"; }

void halo_demands(const JobGrid& grid, const DemandFn& fn) {
  if (grid.p < 2 || grid.q < 2)
    throw std::invalid_argument("halo needs a grid of at least 2x2");
  const Rational quarter(1, 4);
  const int p = grid.p, q = grid.q;
  for (int r = 0; r < p; r++) {
    const int north = ((r + p - 1) % p) * q;
    const int south = ((r + 1) % p) * q;
    const int row = r * q;
    for (int c = 0; c < q; c++) {
      const int self = row + c;
      fn(self, north + c, quarter);
      fn(self, south + c, quarter);
      fn(self, row + (c + q - 1) % q, quarter);
      fn(self, row + (c + 1) % q, quarter);
    }
  }
}

void transpose_demands(const JobGrid& grid, const DemandFn& fn) {
  if (grid.p < 1 || grid.q < 1) throw std::invalid_argument("transpose needs a nonempty grid");
  const Rational row_share(1, 2LL * grid.q);
  const Rational col_share(1, 2LL * grid.p);
  const int p = grid.p, q = grid.q;
  for (int r = 0; r < p; r++)
    for (int c = 0; c < q; c++) {
      const int self = r * q + c;
      for (int c2 = 0; c2 < q; c2++) fn(self, r * q + c2, row_share);
      for (int r2 = 0; r2 < p; r2++) fn(self, r2 * q + c, col_share);
    }
}

void pattern_demands(Pattern pat, const JobGrid& grid, const DemandFn& fn) {
  if (pat == Pattern::Halo)
    halo_demands(grid, fn);
  else
    transpose_demands(grid, fn);
}

std::vector<Demand> demand_list(Pattern pat, const JobGrid& grid) {
  std::vector<Demand> out;
  pattern_demands(pat, grid, [&out](int s, int d, const Rational& v) { out.push_back({s, d, v}); });
  return out;
}

}  // namespace percs
