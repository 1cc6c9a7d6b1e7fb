#include "percs/analysis.hpp"

#include <algorithm>
#include <sstream>

namespace percs {

ThroughputReport throughput(const LoadMap& lm) {
  ThroughputReport r;
  r.cfg = lm.cfg;
  r.max_ll = lm.max_load(LinkKind::LL);
  r.max_lr = lm.max_load(LinkKind::LR);
  r.max_d = lm.max_load(LinkKind::D);
  r.self_ll = lm.self_total(LinkKind::LL);
  r.self_d = lm.self_total(LinkKind::D);
  if (r.max_ll == 0 && r.max_lr == 0 && r.max_d == 0) {
    r.unloaded = true;
    return r;
  }
  const Rational t_ll = r.max_ll / kCapLL;
  const Rational t_lr = r.max_lr / kCapLR;
  const Rational t_d = r.max_d / kCapD;
  r.t = std::max({t_ll, t_lr, t_d});
  // Ties go to the scarcer resource: D, then LR, then LL.
  if (t_d == r.t)
    r.bottleneck = LinkKind::D;
  else if (t_lr == r.t)
    r.bottleneck = LinkKind::LR;
  else
    r.bottleneck = LinkKind::LL;
  r.tau = 4 / r.t;
  if (r.max_ll != 0) r.tau_ll = Rational(4 * kCapLL) / r.max_ll;
  if (r.max_lr != 0) r.tau_lr = Rational(4 * kCapLR) / r.max_lr;
  if (r.max_d != 0) r.tau_d = Rational(4 * kCapD) / r.max_d;
  return r;
}

std::string bottleneck_name(const ThroughputReport& r) {
  return r.unloaded ? "unloaded" : to_string(r.bottleneck);
}

Rational predict_blocking_outflow(int alpha, int beta) {
  return ratio(64LL * (alpha + beta), 1LL * alpha * beta);
}

Rational predict_perfect_coloring_tau_d(const SystemConfig& cfg, int alpha, int beta) {
  return ratio(160LL * cfg.nd, std::max(alpha, beta));
}

Rational predict_halo_sn_seq_direct_tau_d(const SystemConfig& cfg) {
  return Rational(10 * cfg.nd);
}

Rational predict_mod_color_direct_tau_d(const SystemConfig& cfg) {
  return predict_perfect_coloring_tau_d(cfg, 8, 8);
}

Rational predict_halo_sn_seq_indirect_tau_d(const SystemConfig& cfg) {
  return ratio(5LL * cfg.ns * cfg.nd, 3);
}

TransposePrediction predict_transpose_direct(const SystemConfig& cfg) {
  TransposePrediction p;
  p.tau_d = Rational(20 * cfg.h);
  p.overall = std::min(p.tau_d, Rational(80));
  p.tau_lr_bound = 80;
  p.tau_ll_bound = 134;
  p.tau_bound = p.overall;
  return p;
}

TransposePrediction predict_transpose_indirect(const SystemConfig& cfg) {
  TransposePrediction p;
  p.tau_d = ratio(10LL * cfg.h * cfg.ns, cfg.ns - 1);
  p.overall = 0;  // no exact overall claim
  p.tau_lr_bound = ratio(320, 4 + cfg.nd);
  p.tau_ll_bound = ratio(1344, 10 + cfg.nd);
  p.tau_bound = std::min(Rational(10 * cfg.h), p.tau_lr_bound);
  return p;
}

Check check_eq(const std::string& name, const Rational& expected, const Rational& actual) {
  return {name, false, expected, actual, expected == actual};
}

Check check_ge(const std::string& name, const Rational& bound, const Rational& actual) {
  return {name, true, bound, actual, actual >= bound};
}

namespace {

Rational opt_val(const std::optional<Rational>& v) { return v ? *v : Rational(0); }

bool is_sn_block_seq(const SchemeSpec& s) {
  return s.kind == SchemeKind::Blocking && !s.random && s.alpha == 8 && s.beta == 16;
}

bool is_linear_family(const SchemeSpec& s) {
  return s.kind == SchemeKind::Row || s.kind == SchemeKind::Column ||
         s.kind == SchemeKind::Hybrid;
}

}  // namespace

std::vector<Check> applicable_checks(Pattern pattern, const SchemeSpec& scheme,
                                     const RoutingOptions& opt, const SystemConfig& cfg,
                                     const JobGrid& grid, const ThroughputReport& report) {
  std::vector<Check> checks;
  const bool direct = opt.route == Route::Direct;

  if (pattern == Pattern::Halo && is_sn_block_seq(scheme)) {
    if (direct) {
      // Needs every block's four torus neighbors pairwise distinct, i.e. at
      // least a 3x3 arrangement of blocks.
      if (grid.p / 8 >= 3 && grid.q / 16 >= 3)
        checks.push_back(check_eq("halo block-seq direct tau_D",
                                  predict_halo_sn_seq_direct_tau_d(cfg),
                                  opt_val(report.tau_d)));
    } else if (!opt.strict) {
      // Uniform spread only needs neighbors off the own supernode.
      if (grid.p / 8 >= 2 && grid.q / 16 >= 2)
        checks.push_back(check_eq("halo block-seq indirect tau_D",
                                  predict_halo_sn_seq_indirect_tau_d(cfg),
                                  opt_val(report.tau_d)));
    }
  }

  if (pattern == Pattern::Halo && scheme.kind == SchemeKind::ModColor && direct)
    checks.push_back(check_eq("halo mod-color direct tau_D",
                              predict_mod_color_direct_tau_d(cfg), opt_val(report.tau_d)));

  if (pattern == Pattern::Transpose && is_linear_family(scheme)) {
    if (direct) {
      const TransposePrediction p = predict_transpose_direct(cfg);
      checks.push_back(check_eq("transpose direct tau_D", p.tau_d, opt_val(report.tau_d)));
      checks.push_back(check_eq("transpose direct tau", p.overall, report.tau));
      if (report.tau_lr)
        checks.push_back(check_ge("transpose direct tau_LR bound", p.tau_lr_bound,
                                  *report.tau_lr));
      if (report.tau_ll)
        checks.push_back(check_ge("transpose direct tau_LL bound", p.tau_ll_bound,
                                  *report.tau_ll));
    } else if (!opt.strict) {
      const TransposePrediction p = predict_transpose_indirect(cfg);
      checks.push_back(check_eq("transpose indirect tau_D", p.tau_d, opt_val(report.tau_d)));
      checks.push_back(check_ge("transpose indirect tau bound", p.tau_bound, report.tau));
      if (report.tau_lr)
        checks.push_back(check_ge("transpose indirect tau_LR bound", p.tau_lr_bound,
                                  *report.tau_lr));
      if (report.tau_ll)
        checks.push_back(check_ge("transpose indirect tau_LL bound", p.tau_ll_bound,
                                  *report.tau_ll));
    }
  }

  return checks;
}

std::string format_check(const Check& c) {
  std::ostringstream out;
  out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": "
      << (c.lower_bound ? "bound >= " : "expected ") << rational_str(c.expected) << " ("
      << to_double(c.expected) << "), got " << rational_str(c.actual) << " ("
      << to_double(c.actual) << ")";
  return out.str();
}

}  // namespace percs
