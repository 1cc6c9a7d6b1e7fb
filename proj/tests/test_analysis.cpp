#include "doctest.h"
#include "percs/analysis.hpp"

#include <string>

using namespace percs;

TEST_CASE("display rounding is round-half-even") {
  CHECK(round_half_even(ratio(160, 3)) == 53);
  CHECK(round_half_even(ratio(320, 3)) == 107);
  CHECK(round_half_even(ratio(640, 7)) == 91);
  CHECK(round_half_even(ratio(1280, 7)) == 183);
  CHECK(round_half_even(ratio(5, 2)) == 2);    // ties to even
  CHECK(round_half_even(ratio(7, 2)) == 4);
  CHECK(round_half_even(ratio(-5, 2)) == -2);
  CHECK(round_half_even(Rational(42)) == 42);
  CHECK(round_half_even(ratio(672, 5)) == 134);
  CHECK(rational_str(ratio(160, 3)) == "160/3");
  CHECK(rational_str(Rational(8)) == "8");
}

TEST_CASE("throughput identities") {
  const SystemConfig cfg = validate_config(4, 8);

  SUBCASE("full LL link gives cycle time 1") {
    LoadMap lm(cfg);
    lm.intra_at(0, 0, 1) = 21;
    const ThroughputReport r = throughput(lm);
    CHECK_FALSE(r.unloaded);
    CHECK(r.t == 1);
    CHECK(r.tau == 4);
    CHECK(r.bottleneck == LinkKind::LL);
    CHECK(*r.tau_ll == 4);
    CHECK_FALSE(r.tau_lr.has_value());
    CHECK_FALSE(r.tau_d.has_value());
  }
  SUBCASE("ties prefer D over LR over LL") {
    LoadMap lm(cfg);
    lm.intra_at(0, 0, 1) = 21;
    lm.intra_at(0, 0, 8) = 5;
    lm.d_at(0, 1, 0) = 10;
    CHECK(throughput(lm).bottleneck == LinkKind::D);
    lm.d_at(0, 1, 0) = 0;
    CHECK(throughput(lm).bottleneck == LinkKind::LR);
  }
  SUBCASE("tau scales inversely with the worst load") {
    LoadMap lm(cfg);
    lm.d_at(2, 3, 5) = ratio(1, 2);
    const ThroughputReport r = throughput(lm);
    CHECK(r.tau == 80);
    CHECK(*r.tau_d == 80);
    CHECK(r.bottleneck == LinkKind::D);
  }
  SUBCASE("self-loops never drive the maxima") {
    LoadMap lm(cfg);
    lm.intra_at(0, 2, 2) = 1000;
    lm.d_at(1, 1, 0) = 999;
    const ThroughputReport r = throughput(lm);
    CHECK(r.unloaded);
    CHECK(bottleneck_name(r) == "unloaded");
    CHECK(r.self_ll == 1000);
    CHECK(r.self_d == 999);
  }
}

TEST_CASE("closed-form predictions") {
  CHECK(predict_blocking_outflow(8, 16) == 12);
  CHECK(predict_blocking_outflow(8, 8) == 16);
  CHECK(predict_blocking_outflow(2, 2) == 64);

  CHECK(predict_perfect_coloring_tau_d(validate_config(32, 2), 8, 8) == 40);
  CHECK(predict_mod_color_direct_tau_d(validate_config(32, 4)) == 80);
  CHECK(predict_halo_sn_seq_direct_tau_d(validate_config(32, 8)) == 80);
  CHECK(predict_halo_sn_seq_indirect_tau_d(validate_config(32, 1)) == ratio(160, 3));
  CHECK(predict_halo_sn_seq_indirect_tau_d(validate_config(32, 2)) == ratio(320, 3));

  const TransposePrediction td = predict_transpose_direct(validate_config(32, 2));
  CHECK(td.tau_d == 40);
  CHECK(td.overall == 40);
  const TransposePrediction td16 = predict_transpose_direct(validate_config(32, 16));
  CHECK(td16.tau_d == 320);
  CHECK(td16.overall == 80);

  const TransposePrediction ti = predict_transpose_indirect(validate_config(32, 1));
  CHECK(ti.tau_d == ratio(320, 31));
  CHECK(ti.tau_lr_bound == 64);
  CHECK(ti.tau_ll_bound == ratio(1344, 11));
  CHECK(ti.tau_bound == 10);
}

TEST_CASE("checks and their formatting") {
  const Check eq = check_eq("x", ratio(1, 2), ratio(1, 2));
  CHECK(eq.pass);
  const Check eq_bad = check_eq("x", ratio(1, 2), ratio(1, 3));
  CHECK_FALSE(eq_bad.pass);
  const Check ge = check_ge("y", 80, ratio(640, 7));
  CHECK(ge.pass);
  const Check ge_bad = check_ge("y", 80, ratio(159, 2));
  CHECK_FALSE(ge_bad.pass);

  CHECK(format_check(eq).substr(0, 6) == "[PASS]");
  CHECK(format_check(ge_bad).substr(0, 6) == "[FAIL]");
  CHECK(format_check(eq).find("1/2") != std::string::npos);
}

TEST_CASE("applicable checks pass on an honest run and catch a doctored one") {
  const SystemConfig cfg = validate_config(32, 1);
  const SchemeSpec scheme = parse_scheme("sn-seq");
  const JobGrid grid{64, 64};
  const RoutingOptions opt{Route::Direct, false, true};
  const Mapping m = make_mapping(cfg, grid, scheme, 0);
  const LoadMap lm = apply_routing(aggregate_traffic(grid, Pattern::Halo, m), cfg, opt);
  ThroughputReport rep = throughput(lm);

  auto checks = applicable_checks(Pattern::Halo, scheme, opt, cfg, grid, rep);
  REQUIRE(!checks.empty());
  for (const auto& c : checks) CHECK(c.pass);

  // Corrupt the measurement: verification must notice.
  rep.tau_d = *rep.tau_d + 1;
  checks = applicable_checks(Pattern::Halo, scheme, opt, cfg, grid, rep);
  bool any_fail = false;
  for (const auto& c : checks) any_fail |= !c.pass;
  CHECK(any_fail);

  // No closed form covers randomized placements.
  CHECK(applicable_checks(Pattern::Halo, parse_scheme("sn-rnd"), opt, cfg, grid, rep).empty());
  // Too few blocks per torus dimension: neighbors collide, claim is off.
  CHECK(applicable_checks(Pattern::Halo, scheme, opt, validate_config(2, 16), JobGrid{8, 32},
                          rep)
            .empty());
}
