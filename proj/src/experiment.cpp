#include "percs/experiment.hpp"

#include <atomic>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace percs {

Format parse_format(const std::string& name) {
  if (name == "tsv") return Format::Tsv;
  if (name == "markdown") return Format::Markdown;
  if (name == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + name + "' (want tsv|markdown|json)");
}

Rational CellResult::tau_mean() const {
  Rational sum;
  for (const auto& o : outcomes) sum += o.report.tau;
  return sum / static_cast<int>(outcomes.size());
}

Rational CellResult::tau_min() const {
  Rational best = outcomes.front().report.tau;
  for (const auto& o : outcomes) best = std::min(best, o.report.tau);
  return best;
}

Rational CellResult::tau_max() const {
  Rational best = outcomes.front().report.tau;
  for (const auto& o : outcomes) best = std::max(best, o.report.tau);
  return best;
}

const ThroughputReport& CellResult::worst() const {
  const ThroughputReport* w = &outcomes.front().report;
  for (const auto& o : outcomes)
    if (o.report.t > w->t) w = &o.report;
  return *w;
}

const CellResult* RunResult::find(int ns, int nd, const std::string& label) const {
  for (const auto& c : cells)
    if (c.ns == ns && c.nd == nd && c.scheme.label == label) return &c;
  return nullptr;
}

namespace {

// All cells sharing (ns, scheme) reuse one mapping and traffic matrix per
// seed; only the routing step depends on nd.
struct WorkItem {
  int ns = 0;
  SchemeSpec scheme;
  std::vector<size_t> cell_index;  // parallel to spec.nd_list
};

void run_item(const ExperimentSpec& spec, const WorkItem& item, std::vector<CellResult>& cells) {
  const auto fail_all = [&](const std::string& why) {
    for (size_t i = 0; i < item.cell_index.size(); i++) {
      CellResult& cell = cells[item.cell_index[i]];
      if (cell.error.empty()) cell.error = why;
    }
  };

  // Validate each nd up front; infeasible ones keep their own message.
  std::vector<std::optional<SystemConfig>> cfgs(spec.nd_list.size());
  std::optional<SystemConfig> first;
  for (size_t i = 0; i < spec.nd_list.size(); i++) {
    try {
      cfgs[i] = validate_config(item.ns, spec.nd_list[i]);
      if (!first) first = cfgs[i];
    } catch (const std::exception& e) {
      cells[item.cell_index[i]].error = e.what();
    }
  }
  if (!first) return;

  JobGrid grid;
  try {
    if (spec.grid) {
      grid = *spec.grid;
      std::string reason;
      if (!grid_eligible(*first, spec.pattern, item.scheme, grid, &reason))
        throw std::invalid_argument("grid rejected: " + reason);
    } else {
      grid = choose_grid(*first, spec.pattern, item.scheme);
    }
  } catch (const std::exception& e) {
    fail_all(e.what());
    return;
  }
  for (size_t i = 0; i < item.cell_index.size(); i++)
    if (cfgs[i]) cells[item.cell_index[i]].grid = grid;

  const std::vector<uint64_t> seeds =
      item.scheme.random ? spec.seeds : std::vector<uint64_t>{0};
  for (uint64_t seed : seeds) {
    TrafficMatrix traffic;
    try {
      const Mapping mapping = make_mapping(*first, grid, item.scheme, seed);
      traffic = aggregate_traffic(grid, spec.pattern, mapping);
    } catch (const std::exception& e) {
      fail_all(e.what());
      return;
    }
    for (size_t i = 0; i < item.cell_index.size(); i++) {
      if (!cfgs[i]) continue;
      CellResult& cell = cells[item.cell_index[i]];
      try {
        const LoadMap lm = apply_routing(traffic, *cfgs[i], spec.routing);
        cell.outcomes.push_back({seed, throughput(lm)});
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  }
  for (size_t i = 0; i < item.cell_index.size(); i++) {
    CellResult& cell = cells[item.cell_index[i]];
    if (cell.error.empty() && !cell.outcomes.empty()) cell.ok = true;
  }
}

long long display(const Rational& tau) { return round_half_even(tau); }

std::string cell_text(const CellResult& c) {
  if (!c.ok) return "-";
  if (!c.scheme.random) {
    const ThroughputReport& r = c.outcomes.front().report;
    return std::to_string(display(r.tau)) + " " + bottleneck_name(r);
  }
  std::ostringstream out;
  out << display(c.tau_mean()) << " [" << display(c.tau_min()) << "," << display(c.tau_max())
      << "] " << bottleneck_name(c.worst());
  return out.str();
}

std::string grid_text(const CellResult& c) {
  if (c.grid.p == 0) return "-";
  return std::to_string(c.grid.p) + "x" + std::to_string(c.grid.q);
}

std::string spec_header(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "pattern=" << to_string(spec.pattern) << " routing=" << to_string(spec.routing.route);
  if (spec.routing.route == Route::Indirect) {
    if (spec.routing.strict) out << " strict";
    if (!spec.routing.middle_hop) out << " no-middle-hop";
  }
  bool any_random = false;
  for (const auto& s : spec.schemes) any_random |= s.random;
  if (any_random) {
    out << " seeds=";
    for (size_t i = 0; i < spec.seeds.size(); i++) out << (i ? "," : "") << spec.seeds[i];
  }
  return out.str();
}

nlohmann::ordered_json rational_json(const Rational& x) {
  return {{"num", numerator(x).str()},
          {"den", denominator(x).str()},
          {"value", to_double(x)},
          {"display", round_half_even(x)}};
}

std::string emit_json(const RunResult& rr) {
  nlohmann::ordered_json root;
  root["pattern"] = to_string(rr.spec.pattern);
  root["routing"] = to_string(rr.spec.routing.route);
  root["strict"] = rr.spec.routing.strict;
  root["middle_hop"] = rr.spec.routing.middle_hop;
  root["seeds"] = rr.spec.seeds;
  root["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : rr.cells) {
    nlohmann::ordered_json cell;
    cell["ns"] = c.ns;
    cell["nd"] = c.nd;
    cell["scheme"] = c.scheme.label;
    if (c.grid.p != 0)
      cell["grid"] = {{"p", c.grid.p}, {"q", c.grid.q}};
    else
      cell["grid"] = nullptr;
    cell["ok"] = c.ok;
    if (!c.ok) {
      cell["error"] = c.error;
    } else {
      cell["outcomes"] = nlohmann::ordered_json::array();
      for (const auto& o : c.outcomes) {
        nlohmann::ordered_json res;
        if (c.scheme.random) res["seed"] = o.seed;
        res["tau"] = rational_json(o.report.tau);
        res["bottleneck"] = bottleneck_name(o.report);
        res["max_load"] = {{"LL", rational_json(o.report.max_ll)},
                           {"LR", rational_json(o.report.max_lr)},
                           {"D", rational_json(o.report.max_d)}};
        if (o.report.tau_ll) res["tau_LL"] = rational_json(*o.report.tau_ll);
        if (o.report.tau_lr) res["tau_LR"] = rational_json(*o.report.tau_lr);
        if (o.report.tau_d) res["tau_D"] = rational_json(*o.report.tau_d);
        res["self_loop_total"] = {{"LL", rational_json(o.report.self_ll)},
                                  {"D", rational_json(o.report.self_d)}};
        cell["outcomes"].push_back(std::move(res));
      }
      if (c.scheme.random) {
        cell["tau_mean"] = rational_json(c.tau_mean());
        cell["tau_min"] = rational_json(c.tau_min());
        cell["tau_max"] = rational_json(c.tau_max());
      }
    }
    root["cells"].push_back(std::move(cell));
  }
  return root.dump(2) + "\n";
}

}  // namespace

RunResult run_experiment(const ExperimentSpec& spec) {
  if (spec.ns_list.empty() || spec.nd_list.empty())
    throw std::invalid_argument("need at least one ns and one nd");
  if (spec.schemes.empty()) throw std::invalid_argument("need at least one scheme");
  if (spec.seeds.empty()) throw std::invalid_argument("need at least one seed");
  if (spec.jobs < 1) throw std::invalid_argument("jobs must be >= 1");

  RunResult rr;
  rr.spec = spec;
  rr.cells.assign(static_cast<size_t>(spec.ns_list.size()) * spec.nd_list.size() *
                      spec.schemes.size(),
                  {});
  std::vector<WorkItem> items;
  for (size_t a = 0; a < spec.ns_list.size(); a++)
    for (size_t s = 0; s < spec.schemes.size(); s++) {
      WorkItem item{spec.ns_list[a], spec.schemes[s], {}};
      for (size_t d = 0; d < spec.nd_list.size(); d++) {
        const size_t idx = (a * spec.nd_list.size() + d) * spec.schemes.size() + s;
        item.cell_index.push_back(idx);
        CellResult& cell = rr.cells[idx];
        cell.ns = spec.ns_list[a];
        cell.nd = spec.nd_list[d];
        cell.scheme = spec.schemes[s];
      }
      items.push_back(std::move(item));
    }

  if (spec.jobs == 1 || items.size() == 1) {
    for (const auto& item : items) run_item(spec, item, rr.cells);
    return rr;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<size_t>(spec.jobs, items.size()));
  for (int t = 0; t < workers; t++)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1))
        run_item(spec, items[i], rr.cells);
    });
  for (auto& th : pool) th.join();
  return rr;
}

std::string emit_table(const RunResult& rr, Format fmt) {
  if (fmt == Format::Json) return emit_json(rr);
  const ExperimentSpec& spec = rr.spec;
  std::ostringstream out;
  const bool md = fmt == Format::Markdown;

  std::vector<std::string> notes;
  for (const auto& c : rr.cells)
    if (!c.ok)
      notes.push_back("ns=" + std::to_string(c.ns) + " nd=" + std::to_string(c.nd) + " " +
                      c.scheme.label + ": " + c.error);

  if (md) {
    out << spec_header(spec) << "\n\n";
    out << "| ns | nd | grid |";
    for (const auto& s : spec.schemes) out << ' ' << s.label << " |";
    out << "\n|---|---|---|";
    for (size_t i = 0; i < spec.schemes.size(); i++) out << "---|";
    out << '\n';
  } else {
    out << "# " << spec_header(spec) << '\n';
    out << "ns\tnd\tgrid";
    for (const auto& s : spec.schemes) out << '\t' << s.label;
    out << '\n';
  }

  for (size_t a = 0; a < spec.ns_list.size(); a++)
    for (size_t d = 0; d < spec.nd_list.size(); d++) {
      const size_t row = (a * spec.nd_list.size() + d) * spec.schemes.size();
      // A row's grid can differ per scheme; show the first available.
      std::string grid = "-";
      for (size_t s = 0; s < spec.schemes.size(); s++)
        if (rr.cells[row + s].grid.p != 0) {
          grid = grid_text(rr.cells[row + s]);
          break;
        }
      if (md) {
        out << "| " << spec.ns_list[a] << " | " << spec.nd_list[d] << " | " << grid << " |";
        for (size_t s = 0; s < spec.schemes.size(); s++)
          out << ' ' << cell_text(rr.cells[row + s]) << " |";
        out << '\n';
      } else {
        out << spec.ns_list[a] << '\t' << spec.nd_list[d] << '\t' << grid;
        for (size_t s = 0; s < spec.schemes.size(); s++)
          out << '\t' << cell_text(rr.cells[row + s]);
        out << '\n';
      }
    }

  if (!notes.empty()) {
    out << (md ? "\n" : "");
    for (const auto& n : notes) out << (md ? "- skipped " : "# skipped ") << n << '\n';
  }
  return out.str();
}

int verify_run(const RunResult& rr, std::ostream& out) {
  int applicable = 0, failed = 0;
  for (const auto& c : rr.cells) {
    if (!c.ok) continue;
    SystemConfig cfg;
    try {
      cfg = validate_config(c.ns, c.nd);
    } catch (const std::exception&) {
      continue;
    }
    for (const auto& o : c.outcomes) {
      const auto checks =
          applicable_checks(rr.spec.pattern, c.scheme, rr.spec.routing, cfg, c.grid, o.report);
      for (const auto& chk : checks) {
        applicable++;
        if (!chk.pass) failed++;
        out << "ns=" << c.ns << " nd=" << c.nd << " " << c.scheme.label << ": "
            << format_check(chk) << '\n';
      }
    }
  }
  if (applicable == 0) {
    out << "no applicable closed-form checks\n";
    return 0;
  }
  out << (failed ? "verification FAILED (" : "verification passed (") << applicable - failed
      << "/" << applicable << " checks)\n";
  return failed ? 2 : 0;
}

}  // namespace percs
