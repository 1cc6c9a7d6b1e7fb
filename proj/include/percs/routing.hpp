#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "percs/mappings.hpp"
#include "percs/patterns.hpp"
#include "percs/rational.hpp"
#include "percs/topology.hpp"

namespace percs {

// Traffic aggregated to node granularity. Tasks sharing a node exchange data
// through memory, so that volume never reaches a link; it is tracked in
// `local` only for conservation checks. Node ids are global: sn*32 + node.
struct TrafficMatrix {
  int ns = 0;
  std::unordered_map<uint32_t, Rational> vol;  // key: src_gid << 14 | dst_gid
  Rational total;        // all pattern volume
  Rational local;        // src node == dst node
  Rational intra_cross;  // same supernode, different node
  Rational inter;        // different supernodes

  static uint32_t key(int src_gid, int dst_gid) {
    return static_cast<uint32_t>(src_gid) << 14 | static_cast<uint32_t>(dst_gid);
  }
  void add(int src_gid, int dst_gid, const Rational& v);
};

TrafficMatrix aggregate_traffic(const JobGrid& grid, Pattern pattern, const Mapping& mapping);

enum class Route { Direct, Indirect };

Route parse_route(const std::string& name);
std::string to_string(Route r);

struct RoutingOptions {
  Route route = Route::Direct;
  // Indirect only: exclude the degenerate intermediates c == src supernode and
  // c == dst supernode, renormalizing path weights to 1/((ns-2)*nd).
  bool strict = false;
  // Indirect only: when false, the hop across the intermediate supernode is
  // not charged to any link (models port-to-port forwarding at the hub).
  bool middle_hop = true;
};

// One routed path: a weight (fraction of the pair's volume) and its hops in
// order. Hops with equal endpoints are self-loops; they are recorded as
// diagnostics and never contribute to link maxima.
struct RoutePath {
  Rational weight;
  std::vector<LinkRef> hops;
};

// Path enumeration, used by tests and small-scale inspection. u and v must be
// distinct nodes; intra_paths additionally requires a shared supernode, the
// other two distinct supernodes.
std::vector<RoutePath> intra_paths(const SystemConfig& cfg, int sn, int u, int v);
std::vector<RoutePath> direct_paths(const SystemConfig& cfg, NodeRef u, NodeRef v);
std::vector<RoutePath> indirect_paths(const SystemConfig& cfg, NodeRef u, NodeRef v, bool strict,
                                      bool middle_hop);

// Exact per-link load, stored as rationals. Self-loop entries (intra diagonal
// and same-supernode D links) sit in the same arrays; accessors that compute
// maxima and totals skip them unless asked otherwise.
struct LoadMap {
  SystemConfig cfg;
  std::vector<Rational> intra;  // [sn][src][dst] -> ns*32*32
  std::vector<Rational> dlink;  // [a][b][j]      -> ns*ns*nd

  explicit LoadMap(const SystemConfig& c);

  Rational& intra_at(int sn, int src, int dst) {
    return intra[(static_cast<size_t>(sn) * kNodesPerSupernode + src) * kNodesPerSupernode + dst];
  }
  const Rational& intra_at(int sn, int src, int dst) const {
    return intra[(static_cast<size_t>(sn) * kNodesPerSupernode + src) * kNodesPerSupernode + dst];
  }
  Rational& d_at(int a, int b, int j) {
    return dlink[(static_cast<size_t>(a) * cfg.ns + b) * cfg.nd + j];
  }
  const Rational& d_at(int a, int b, int j) const {
    return dlink[(static_cast<size_t>(a) * cfg.ns + b) * cfg.nd + j];
  }

  void add(const LinkRef& link, const Rational& v);

  // Self-loops excluded.
  Rational max_load(LinkKind kind) const;
  Rational total_load(LinkKind kind) const;
  // Self-loop diagnostics: kind must be LL or D (an LR self-loop cannot
  // exist: equal endpoints share a drawer).
  Rational self_total(LinkKind kind) const;

  // One sorted line per loaded non-self-loop link:
  //   kind src_supernode src_node dst_supernode dst_node numerator denominator
  // D-link node columns are the attachment ports, so the bucket is node/w.
  std::string export_text() const;
};

LoadMap apply_routing(const TrafficMatrix& tm, const SystemConfig& cfg,
                      const RoutingOptions& opt);

}  // namespace percs
