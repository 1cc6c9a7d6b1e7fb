#include "doctest.h"
#include "oracle.hpp"
#include "percs/analysis.hpp"
#include "percs/routing.hpp"

#include <random>
#include <sstream>

using namespace percs;
using percs::testoracle::loadmaps_equal;
using percs::testoracle::oracle_route;

namespace {

// Sum of a path set's weights must be 1: the pair's volume is conserved.
Rational weight_sum(const std::vector<RoutePath>& paths) {
  Rational sum;
  for (const auto& p : paths) sum += p.weight;
  return sum;
}

Rational intra_total_with_self(const LoadMap& lm) {
  return lm.total_load(LinkKind::LL) + lm.total_load(LinkKind::LR) +
         lm.self_total(LinkKind::LL);
}

TrafficMatrix random_traffic(const SystemConfig& cfg, int pairs, uint64_t seed) {
  TrafficMatrix tm;
  tm.ns = cfg.ns;
  std::mt19937_64 rng(seed);
  const int gids = cfg.ns * kNodesPerSupernode;
  for (int i = 0; i < pairs; i++) {
    const int src = static_cast<int>(rng() % gids);
    const int dst = static_cast<int>(rng() % gids);
    const long long num = 1 + static_cast<long long>(rng() % 9);
    const long long den = 1 + static_cast<long long>(rng() % 9);
    tm.add(src, dst, ratio(num, den));
  }
  return tm;
}

}  // namespace

TEST_CASE("traffic aggregation folds tasks onto nodes") {
  const SystemConfig cfg = validate_config(32, 1);
  const JobGrid grid{64, 64};
  const Mapping m = blocking_mapping(cfg, grid, 8, 16, false, 0);
  const TrafficMatrix tm = aggregate_traffic(grid, Pattern::Halo, m);

  CHECK(tm.total == 4096);  // 4 quarters per task
  // One 8x16 block per supernode: each supernode exports 64*(8+16)/128 = 12.
  CHECK(tm.inter == 32 * predict_blocking_outflow(8, 16));
  CHECK(tm.local + tm.intra_cross + tm.inter == tm.total);
  // 2x2 quads keep two full volume units per quad on the node.
  CHECK(tm.local == Rational(2 * 32 * 32));
}

TEST_CASE("striped intra-supernode spread") {
  const SystemConfig cfg = validate_config(4, 8);
  const auto paths = intra_paths(cfg, 0, 0, 1);
  CHECK(paths.size() == 8);
  CHECK(weight_sum(paths) == 1);
  for (const auto& p : paths) CHECK(p.hops.size() == 2);

  TrafficMatrix tm;
  tm.ns = 4;
  tm.add(0, 1, Rational(1));
  const LoadMap lm = apply_routing(tm, cfg, {Route::Direct, false, true});

  // Via d=0 the first hop bounces 0->0; via d=1 the second bounces 1->1; the
  // direct link 0->1 carries both remaining shares.
  CHECK(lm.intra_at(0, 0, 1) == Rational(2, 8));
  for (int d = 2; d < 8; d++) {
    CHECK(lm.intra_at(0, 0, d) == Rational(1, 8));
    CHECK(lm.intra_at(0, d, 1) == Rational(1, 8));
  }
  CHECK(lm.intra_at(0, 0, 0) == Rational(1, 8));
  CHECK(lm.intra_at(0, 1, 1) == Rational(1, 8));
  CHECK(lm.self_total(LinkKind::LL) == Rational(2, 8));
  CHECK(lm.total_load(LinkKind::LR) == 0);
  CHECK(lm.total_load(LinkKind::D) == 0);
}

TEST_CASE("direct paths at (32,2)") {
  const SystemConfig cfg = validate_config(32, 2);
  const auto paths = direct_paths(cfg, {2, 1}, {11, 31});
  REQUIRE(paths.size() == 2);
  CHECK(weight_sum(paths) == 1);

  CHECK(paths[0].hops.size() == 3);
  CHECK(paths[0].hops[0] == LinkRef{LinkKind::LR, {2, 1}, {2, 11}});
  CHECK(paths[0].hops[1] == LinkRef{LinkKind::D, {2, 11}, {11, 2}, 0});
  CHECK(paths[0].hops[2] == LinkRef{LinkKind::LR, {11, 2}, {11, 31}});

  CHECK(paths[1].hops[0] == LinkRef{LinkKind::LR, {2, 1}, {2, 27}});
  CHECK(paths[1].hops[1] == LinkRef{LinkKind::D, {2, 27}, {11, 18}, 1});
  CHECK(paths[1].hops[2] == LinkRef{LinkKind::LR, {11, 18}, {11, 31}});
}

TEST_CASE("indirect path shapes") {
  const SystemConfig cfg = validate_config(4, 8);

  auto paths = indirect_paths(cfg, {0, 3}, {2, 9}, false, true);
  CHECK(paths.size() == 32);  // ns * nd
  CHECK(weight_sum(paths) == 1);
  for (const auto& p : paths) CHECK(p.hops.size() == 5);

  paths = indirect_paths(cfg, {0, 3}, {2, 9}, true, true);
  CHECK(paths.size() == 16);  // (ns-2) * nd
  CHECK(weight_sum(paths) == 1);
  for (const auto& p : paths)
    for (const auto& hop : p.hops)
      if (hop.kind == LinkKind::D) CHECK_FALSE(hop.self_loop());

  paths = indirect_paths(cfg, {0, 3}, {2, 9}, false, false);
  CHECK(paths.size() == 32);
  for (const auto& p : paths) CHECK(p.hops.size() == 4);  // middle hop uncharged

  CHECK_THROWS_AS(indirect_paths(validate_config(2, 16), {0, 0}, {1, 0}, true, true),
                  std::invalid_argument);
}

TEST_CASE("factored indirect accumulation matches literal paths") {
  const SystemConfig cfg = validate_config(4, 8);
  TrafficMatrix tm;
  tm.ns = 4;
  tm.add(5, 17, ratio(3, 7));        // same supernode
  tm.add(3, 32 + 9, ratio(2, 5));    // 0 -> 1
  tm.add(64 + 31, 32 + 0, 1);        // 2 -> 1
  tm.add(96 + 12, 8, ratio(5, 3));   // 3 -> 0
  tm.add(32 + 7, 96 + 7, ratio(1, 4));  // 1 -> 3, same node index
  tm.add(3, 32 + 9, ratio(1, 6));    // repeat pair accumulates

  for (const RoutingOptions opt :
       {RoutingOptions{Route::Direct, false, true}, RoutingOptions{Route::Indirect, false, true},
        RoutingOptions{Route::Indirect, true, true},
        RoutingOptions{Route::Indirect, false, false},
        RoutingOptions{Route::Indirect, true, false}}) {
    CAPTURE(static_cast<int>(opt.route));
    CAPTURE(opt.strict);
    CAPTURE(opt.middle_hop);
    CHECK(loadmaps_equal(apply_routing(tm, cfg, opt), oracle_route(tm, cfg, opt)));
  }
}

TEST_CASE("factored accumulation matches on random traffic") {
  for (const auto& [ns, nd] : {std::pair{8, 4}, std::pair{32, 2}}) {
    const SystemConfig cfg = validate_config(ns, nd);
    const TrafficMatrix tm = random_traffic(cfg, 60, 1234 + ns);
    for (bool strict : {false, true})
      for (bool middle : {true, false}) {
        const RoutingOptions opt{Route::Indirect, strict, middle};
        CAPTURE(ns);
        CAPTURE(strict);
        CAPTURE(middle);
        CHECK(loadmaps_equal(apply_routing(tm, cfg, opt), oracle_route(tm, cfg, opt)));
      }
  }
}

TEST_CASE("full halo pattern matches the oracle at (32,2)") {
  const SystemConfig cfg = validate_config(32, 2);
  const JobGrid grid{64, 64};
  const Mapping m = blocking_mapping(cfg, grid, 8, 16, false, 0);
  const TrafficMatrix tm = aggregate_traffic(grid, Pattern::Halo, m);

  for (const RoutingOptions opt :
       {RoutingOptions{Route::Direct, false, true}, RoutingOptions{Route::Indirect, false, true},
        RoutingOptions{Route::Indirect, true, true}}) {
    CHECK(loadmaps_equal(apply_routing(tm, cfg, opt), oracle_route(tm, cfg, opt)));
  }
}

TEST_CASE("flow conservation") {
  const SystemConfig cfg = validate_config(32, 2);
  const JobGrid grid{64, 64};
  const Mapping m = blocking_mapping(cfg, grid, 8, 16, false, 0);
  const TrafficMatrix tm = aggregate_traffic(grid, Pattern::Halo, m);

  SUBCASE("direct: one D hop per unit, two L hops per path") {
    const LoadMap lm = apply_routing(tm, cfg, {Route::Direct, false, true});
    CHECK(lm.total_load(LinkKind::D) == tm.inter);
    CHECK(lm.self_total(LinkKind::D) == 0);
    CHECK(intra_total_with_self(lm) == 2 * tm.intra_cross + 2 * tm.inter);
  }
  SUBCASE("indirect: two D hops per unit, the degenerate share on self-loops") {
    const LoadMap lm = apply_routing(tm, cfg, {Route::Indirect, false, true});
    CHECK(lm.total_load(LinkKind::D) + lm.self_total(LinkKind::D) == 2 * tm.inter);
    CHECK(lm.self_total(LinkKind::D) == 2 * tm.inter / cfg.ns);
    CHECK(intra_total_with_self(lm) == 2 * tm.intra_cross + 3 * tm.inter);
  }
  SUBCASE("strict indirect: no D self-loops at all") {
    const LoadMap lm = apply_routing(tm, cfg, {Route::Indirect, true, true});
    CHECK(lm.total_load(LinkKind::D) == 2 * tm.inter);
    CHECK(lm.self_total(LinkKind::D) == 0);
    CHECK(intra_total_with_self(lm) == 2 * tm.intra_cross + 3 * tm.inter);
  }
  SUBCASE("uncharged middle hop drops one L unit per inter unit") {
    const LoadMap lm = apply_routing(tm, cfg, {Route::Indirect, false, false});
    CHECK(intra_total_with_self(lm) == 2 * tm.intra_cross + 2 * tm.inter);
  }
}

TEST_CASE("congruent supernodes bounce the middle hop on a self-loop") {
  const SystemConfig cfg = validate_config(32, 2);  // w = 16: 0 and 16 congruent
  TrafficMatrix tm;
  tm.ns = 32;
  const Rational vol = ratio(3, 5);
  tm.add(0 * 32 + 5, 16 * 32 + 9, vol);

  const LoadMap with_mid = apply_routing(tm, cfg, {Route::Indirect, false, true});
  const LoadMap no_mid = apply_routing(tm, cfg, {Route::Indirect, false, false});

  // Every middle hop of this pair is a self-loop (0 = 16 mod 16), so charging
  // it changes only the LL self-loop diagnostic, by exactly the volume.
  CHECK(with_mid.self_total(LinkKind::LL) - no_mid.self_total(LinkKind::LL) == vol);
  CHECK(with_mid.total_load(LinkKind::LL) == no_mid.total_load(LinkKind::LL));
  CHECK(with_mid.total_load(LinkKind::LR) == no_mid.total_load(LinkKind::LR));
}

TEST_CASE("transpose on row mapping loads all D links evenly") {
  const SystemConfig cfg = validate_config(32, 1);
  const JobGrid grid{64, 64};
  const Mapping m = row_mapping(cfg, grid);
  const TrafficMatrix tm = aggregate_traffic(grid, Pattern::Transpose, m);
  const LoadMap lm = apply_routing(tm, cfg, {Route::Indirect, false, true});

  const Rational expect = Rational(128) / (cfg.ns * cfg.nd) * ratio(cfg.ns - 1, cfg.ns);
  for (int a = 0; a < cfg.ns; a++)
    for (int b = 0; b < cfg.ns; b++) {
      if (a == b) continue;
      for (int j = 0; j < cfg.nd; j++) CHECK(lm.d_at(a, b, j) == expect);
    }
}

TEST_CASE("load export format") {
  const SystemConfig cfg = validate_config(4, 8);
  TrafficMatrix tm;
  tm.ns = 4;
  tm.add(0, 32, 1);  // node 0 of sn 0 -> node 0 of sn 1
  const LoadMap lm = apply_routing(tm, cfg, {Route::Direct, false, true});
  const std::string text = lm.export_text();

  std::istringstream in(text);
  std::string kind;
  int asn, an, bsn, bn;
  long long num, den;
  int d_lines = 0;
  bool saw_first_l = false;
  while (in >> kind >> asn >> an >> bsn >> bn >> num >> den) {
    CHECK((kind == "LL" || kind == "LR" || kind == "D"));
    CHECK_FALSE((asn == bsn && an == bn));  // self-loops never exported
    CHECK(den != 0);
    if (kind == "D") {
      d_lines++;
      CHECK(asn == 0);
      CHECK(bsn == 1);
      CHECK(Rational(num, den) == ratio(1, 8));
      CHECK(an % cfg.w == 1);  // port toward supernode 1
      CHECK(bn % cfg.w == 0);
    }
    if (kind == "LL" && asn == 0 && an == 0 && bn == 1) saw_first_l = true;
  }
  CHECK(d_lines == 8);
  CHECK(saw_first_l);

  CHECK(apply_routing(TrafficMatrix{4, {}, 0, 0, 0, 0}, cfg, {Route::Direct, false, true})
            .export_text()
            .empty());
}

TEST_CASE("routing rejects mismatched traffic") {
  const SystemConfig cfg = validate_config(8, 4);
  TrafficMatrix tm;
  tm.ns = 4;
  CHECK_THROWS_AS(apply_routing(tm, cfg, {Route::Direct, false, true}), std::invalid_argument);
  CHECK_THROWS_AS(parse_route("sideways"), std::invalid_argument);
  CHECK(parse_route("indirect") == Route::Indirect);
}
