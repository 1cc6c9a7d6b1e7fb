#include "doctest.h"
#include "percs/patterns.hpp"

#include <map>
#include <stdexcept>

using namespace percs;

TEST_CASE("pattern parsing") {
  CHECK(parse_pattern("halo") == Pattern::Halo);
  CHECK(parse_pattern("transpose") == Pattern::Transpose);
  CHECK_THROWS_AS(parse_pattern("mesh"), std::invalid_argument);
  CHECK(std::string(to_string(Pattern::Halo)) == "halo");
}

TEST_CASE("halo demands on a 4x4 torus") {
  const JobGrid grid{4, 4};
  const auto demands = demand_list(Pattern::Halo, grid);
  CHECK(demands.size() == 4 * 16);

  std::map<int, Rational> out_volume;
  std::map<std::pair<int, int>, Rational> by_pair;
  for (const auto& d : demands) {
    out_volume[d.src] += d.volume;
    by_pair[{d.src, d.dst}] += d.volume;
  }
  for (const auto& [task, vol] : out_volume) CHECK(vol == 1);

  // Task (0,0) = rank 0: north (3,0)=12, south (1,0)=4, west (0,3)=3, east (0,1)=1.
  const Rational quarter(1, 4);
  CHECK(by_pair[{0, 12}] == quarter);
  CHECK(by_pair[{0, 4}] == quarter);
  CHECK(by_pair[{0, 3}] == quarter);
  CHECK(by_pair[{0, 1}] == quarter);
  CHECK(by_pair.count({0, 5}) == 0);  // no diagonal traffic

  CHECK_THROWS_AS(demand_list(Pattern::Halo, JobGrid{1, 8}), std::invalid_argument);
  CHECK_THROWS_AS(demand_list(Pattern::Halo, JobGrid{8, 1}), std::invalid_argument);
}

TEST_CASE("width-2 halo wraps double up") {
  // On a 2-row torus, north and south of a task are the same task: the
  // aggregated pair volume doubles while the out-volume stays 1.
  const JobGrid grid{2, 4};
  std::map<std::pair<int, int>, Rational> by_pair;
  halo_demands(grid, [&](int s, int d, const Rational& v) { by_pair[{s, d}] += v; });
  CHECK(by_pair[{0, 4}] == Rational(1, 2));  // both vertical quarters
  CHECK(by_pair[{0, 1}] == Rational(1, 4));
}

TEST_CASE("transpose demands on a 2x3 grid") {
  const JobGrid grid{2, 3};
  const auto demands = demand_list(Pattern::Transpose, grid);
  CHECK(demands.size() == (2 + 3) * 6);

  std::map<int, Rational> out_volume;
  std::map<std::pair<int, int>, Rational> by_pair;
  Rational total;
  for (const auto& d : demands) {
    out_volume[d.src] += d.volume;
    by_pair[{d.src, d.dst}] += d.volume;
    total += d.volume;
  }
  for (const auto& [task, vol] : out_volume) CHECK(vol == 1);
  CHECK(total == 6);

  // Rank 0 = (0,0): row partners at 1/(2q) = 1/6, column partners at
  // 1/(2p) = 1/4, itself once in each clique.
  CHECK(by_pair[{0, 1}] == Rational(1, 6));
  CHECK(by_pair[{0, 2}] == Rational(1, 6));
  CHECK(by_pair[{0, 3}] == Rational(1, 4));
  CHECK(by_pair[{0, 0}] == Rational(1, 6) + Rational(1, 4));
  CHECK(by_pair.count({0, 4}) == 0);  // different row and column
}
