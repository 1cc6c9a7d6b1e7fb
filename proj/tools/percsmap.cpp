// percsmap: sweep task-mapping schemes over two-level direct networks and
// report exact per-task throughput, with optional closed-form verification
// and per-link load dumps.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "percs/experiment.hpp"

namespace {

percs::JobGrid parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos || x == 0 || x + 1 == text.size())
    throw std::invalid_argument("bad grid '" + text + "' (want PxQ, e.g. 64x64)");
  return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact flow-level throughput of task mappings on two-level direct networks"};

  std::vector<int> ns_list{32};
  std::vector<int> nd_list{1};
  std::string pattern_name = "halo";
  std::vector<std::string> scheme_names{"default"};
  std::string routing_name = "direct";
  bool indirect_strict = false;
  bool no_middle_hop = false;
  std::string grid_text;
  std::vector<uint64_t> seeds{1};
  int jobs = 1;
  std::string format_name = "tsv";
  std::string dump_loads, dump_mapping;
  bool verify = false;

  app.add_option("--ns", ns_list, "Supernode counts to sweep")->delimiter(',');
  app.add_option("--nd", nd_list, "D links per supernode pair to sweep")->delimiter(',');
  app.add_option("--pattern", pattern_name, "halo | transpose");
  app.add_option("--scheme", scheme_names,
                 "Mapping schemes: default, node-seq|rnd, drawer-seq|rnd, sn-seq|rnd, "
                 "block-AxB-seq|rnd, mod-color, row, column, hybrid")
      ->delimiter(',');
  app.add_option("--routing", routing_name, "direct | indirect");
  app.add_flag("--indirect-strict", indirect_strict,
               "Indirect routes never bounce off the source or target supernode");
  app.add_flag("--no-middle-hop", no_middle_hop,
               "Do not charge the hop across the intermediate supernode");
  app.add_option("--grid", grid_text, "Explicit task grid PxQ (default: auto)");
  app.add_option("--seed", seeds, "Seeds for randomized schemes")->delimiter(',');
  app.add_option("--jobs", jobs, "Worker threads");
  app.add_option("--format", format_name, "tsv | markdown | json");
  app.add_option("--dump-loads", dump_loads,
                 "Write per-link loads to this file (single-cell runs only)");
  app.add_option("--dump-mapping", dump_mapping,
                 "Write the task placement to this file (single-cell runs only)");
  app.add_flag("--verify", verify, "Check results against closed forms; exit 2 on mismatch");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    percs::ExperimentSpec spec;
    spec.ns_list = ns_list;
    spec.nd_list = nd_list;
    spec.pattern = percs::parse_pattern(pattern_name);
    for (const auto& name : scheme_names) spec.schemes.push_back(percs::parse_scheme(name));
    spec.routing.route = percs::parse_route(routing_name);
    spec.routing.strict = indirect_strict;
    spec.routing.middle_hop = !no_middle_hop;
    if (!grid_text.empty()) spec.grid = parse_grid(grid_text);
    spec.seeds = seeds;
    spec.jobs = jobs;

    const percs::RunResult rr = percs::run_experiment(spec);
    std::cout << percs::emit_table(rr, percs::parse_format(format_name));

    if (!dump_loads.empty() || !dump_mapping.empty()) {
      const bool single = ns_list.size() == 1 && nd_list.size() == 1 &&
                          spec.schemes.size() == 1 &&
                          (!spec.schemes.front().random || seeds.size() == 1);
      if (!single)
        throw std::invalid_argument(
            "--dump-loads/--dump-mapping need a single ns, nd, scheme (and seed)");
      const percs::SystemConfig cfg = percs::validate_config(ns_list.front(), nd_list.front());
      const percs::JobGrid grid =
          spec.grid ? *spec.grid : percs::choose_grid(cfg, spec.pattern, spec.schemes.front());
      const uint64_t seed = spec.schemes.front().random ? seeds.front() : 0;
      const percs::Mapping mapping =
          percs::make_mapping(cfg, grid, spec.schemes.front(), seed);
      if (!dump_mapping.empty()) write_file(dump_mapping, percs::export_mapping(mapping));
      if (!dump_loads.empty()) {
        const percs::TrafficMatrix tm =
            percs::aggregate_traffic(grid, spec.pattern, mapping);
        const percs::LoadMap lm = percs::apply_routing(tm, cfg, spec.routing);
        write_file(dump_loads, lm.export_text());
      }
    }

    if (verify) return percs::verify_run(rr, std::cout);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
