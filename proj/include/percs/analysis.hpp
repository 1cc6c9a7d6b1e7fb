#pragma once

#include <optional>
#include <string>
#include <vector>

#include "percs/patterns.hpp"
#include "percs/rational.hpp"
#include "percs/routing.hpp"
#include "percs/topology.hpp"

namespace percs {

// Exact throughput summary of a load map. Every task injects at most 4 GB/s
// (one core link's worth per task, 4 tasks per node), so with t the worst
// cycle time implied by link loads, the sustainable per-task bandwidth is
// tau = 4/t GB/s. Per-type figures are reported for loaded types only.
struct ThroughputReport {
  SystemConfig cfg;
  Rational max_ll, max_lr, max_d;  // per-type maxima, self-loops excluded
  bool unloaded = false;           // no non-self-loop link carries volume
  Rational t;                      // max over loaded types of load/capacity
  Rational tau;                    // 4/t; zero when unloaded
  LinkKind bottleneck = LinkKind::LL;  // meaningful only when loaded
  std::optional<Rational> tau_ll, tau_lr, tau_d;
  Rational self_ll, self_d;  // self-loop diagnostic totals
};

ThroughputReport throughput(const LoadMap& lm);

// "unloaded" when the report carries no volume, else the bottleneck name.
std::string bottleneck_name(const ThroughputReport& r);

// Closed forms for specific pattern/scheme/route combinations. All of them
// assume the standard grid conventions enforced by the mapping layer.

// Halo with alpha x beta blocks: volume leaving one supernode, assuming the
// four torus neighbors of each block land in four distinct supernodes.
Rational predict_blocking_outflow(int alpha, int beta);

// Halo, blocking with a perfect block-to-supernode coloring, direct routes:
// per-task bandwidth cap from D links alone.
Rational predict_perfect_coloring_tau_d(const SystemConfig& cfg, int alpha, int beta);

// Halo, one 8x16 block per supernode placed in row-major order, direct.
Rational predict_halo_sn_seq_direct_tau_d(const SystemConfig& cfg);

// Halo, mod-color placement, direct.
Rational predict_mod_color_direct_tau_d(const SystemConfig& cfg);

// Halo, one 8x16 block per supernode, indirect: the D spread is uniform.
Rational predict_halo_sn_seq_indirect_tau_d(const SystemConfig& cfg);

struct TransposePrediction {
  Rational tau_d;        // exact
  Rational overall;      // exact overall tau (direct only; zero if not claimed)
  Rational tau_lr_bound; // lower bound on tau_lr
  Rational tau_ll_bound; // lower bound on tau_ll
  Rational tau_bound;    // lower bound on overall tau
};

// Transpose, row/column/hybrid placement.
TransposePrediction predict_transpose_direct(const SystemConfig& cfg);
TransposePrediction predict_transpose_indirect(const SystemConfig& cfg);

// One verification check: an exact equality or a lower bound on a reported
// quantity, with both sides kept as rationals.
struct Check {
  std::string name;
  bool lower_bound = false;  // false: expected == actual; true: actual >= expected
  Rational expected, actual;
  bool pass = false;
};

Check check_eq(const std::string& name, const Rational& expected, const Rational& actual);
Check check_ge(const std::string& name, const Rational& bound, const Rational& actual);

// Build the list of checks that apply to one run. Empty when no closed form
// covers the combination.
std::vector<Check> applicable_checks(Pattern pattern, const SchemeSpec& scheme,
                                     const RoutingOptions& opt, const SystemConfig& cfg,
                                     const JobGrid& grid, const ThroughputReport& report);

std::string format_check(const Check& c);

}  // namespace percs
