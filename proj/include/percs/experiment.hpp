#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "percs/analysis.hpp"
#include "percs/mappings.hpp"
#include "percs/patterns.hpp"
#include "percs/routing.hpp"

namespace percs {

enum class Format { Tsv, Markdown, Json };

Format parse_format(const std::string& name);

// A sweep: every (ns, nd, scheme) combination becomes one table cell. Random
// schemes are evaluated once per seed; deterministic schemes ignore the seed
// list. Infeasible combinations stay in the table with their reason.
struct ExperimentSpec {
  std::vector<int> ns_list;
  std::vector<int> nd_list;
  Pattern pattern = Pattern::Halo;
  std::vector<SchemeSpec> schemes;
  RoutingOptions routing;
  std::optional<JobGrid> grid;  // overrides the automatic choice
  std::vector<uint64_t> seeds = {1};
  int jobs = 1;
};

struct SeedOutcome {
  uint64_t seed = 0;
  ThroughputReport report;
};

struct CellResult {
  int ns = 0, nd = 0;
  SchemeSpec scheme;
  JobGrid grid;
  bool ok = false;
  std::string error;
  std::vector<SeedOutcome> outcomes;

  Rational tau_mean() const;
  Rational tau_min() const;
  Rational tau_max() const;
  // The outcome with the highest congestion (ties: first). Drives the
  // bottleneck tag shown for random cells.
  const ThroughputReport& worst() const;
};

struct RunResult {
  ExperimentSpec spec;
  std::vector<CellResult> cells;  // ns-major, then nd, then scheme
  const CellResult* find(int ns, int nd, const std::string& label) const;
};

RunResult run_experiment(const ExperimentSpec& spec);

std::string emit_table(const RunResult& rr, Format fmt);

// Prints one line per applicable closed-form check; returns 0 when all pass
// (or none apply), 2 otherwise.
int verify_run(const RunResult& rr, std::ostream& out);

}  // namespace percs
