#include "percs/routing.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace percs {

void TrafficMatrix::add(int src_gid, int dst_gid, const Rational& v) {
  total += v;
  if (src_gid == dst_gid) {
    local += v;
    return;  // stays on the node, never touches a link
  }
  if (src_gid / kNodesPerSupernode == dst_gid / kNodesPerSupernode)
    intra_cross += v;
  else
    inter += v;
  vol[key(src_gid, dst_gid)] += v;
}

TrafficMatrix aggregate_traffic(const JobGrid& grid, Pattern pattern, const Mapping& mapping) {
  TrafficMatrix tm;
  tm.ns = mapping.cfg.ns;
  // slot = sn*128 + node*4 + core, so slot >> 2 is the global node id.
  pattern_demands(pattern, grid, [&](int src, int dst, const Rational& v) {
    tm.add(mapping.slot[src] >> 2, mapping.slot[dst] >> 2, v);
  });
  return tm;
}

Route parse_route(const std::string& name) {
  if (name == "direct") return Route::Direct;
  if (name == "indirect") return Route::Indirect;
  throw std::invalid_argument("unknown routing '" + name + "' (want direct|indirect)");
}

std::string to_string(Route r) { return r == Route::Direct ? "direct" : "indirect"; }

std::vector<RoutePath> intra_paths(const SystemConfig& cfg, int sn, int u, int v) {
  (void)cfg;
  if (u == v) throw std::invalid_argument("intra_paths: endpoints coincide");
  std::vector<RoutePath> paths;
  const Rational w = ratio(1, kNodesPerDrawer);
  const int base = u / kNodesPerDrawer * kNodesPerDrawer;
  for (int d = base; d < base + kNodesPerDrawer; d++) {
    RoutePath p;
    p.weight = w;
    p.hops.push_back({intra_kind(u, d), {sn, u}, {sn, d}});
    p.hops.push_back({intra_kind(d, v), {sn, d}, {sn, v}});
    paths.push_back(std::move(p));
  }
  return paths;
}

namespace {

LinkRef d_hop(const SystemConfig& cfg, int a, int b, int j) {
  const auto [src, dst] = d_link_endpoints(cfg, a, b, j);
  return {LinkKind::D, src, dst, j};
}

LinkRef l_hop(int sn, int u, int v) { return {intra_kind(u, v), {sn, u}, {sn, v}}; }

}  // namespace

std::vector<RoutePath> direct_paths(const SystemConfig& cfg, NodeRef u, NodeRef v) {
  if (u.supernode == v.supernode) throw std::invalid_argument("direct_paths: same supernode");
  const int a = u.supernode, b = v.supernode;
  std::vector<RoutePath> paths;
  const Rational wgt = ratio(1, cfg.nd);
  for (int j = 0; j < cfg.nd; j++) {
    const int x = j * cfg.w + b % cfg.w;  // attachment port in a
    const int y = j * cfg.w + a % cfg.w;  // attachment port in b
    RoutePath p;
    p.weight = wgt;
    p.hops.push_back(l_hop(a, u.node, x));
    p.hops.push_back(d_hop(cfg, a, b, j));
    p.hops.push_back(l_hop(b, y, v.node));
    paths.push_back(std::move(p));
  }
  return paths;
}

std::vector<RoutePath> indirect_paths(const SystemConfig& cfg, NodeRef u, NodeRef v, bool strict,
                                      bool middle_hop) {
  if (u.supernode == v.supernode) throw std::invalid_argument("indirect_paths: same supernode");
  if (strict && cfg.ns < 3)
    throw std::invalid_argument("strict indirect routing needs at least 3 supernodes");
  const int a = u.supernode, b = v.supernode;
  std::vector<RoutePath> paths;
  const Rational wgt = ratio(1, 1LL * (strict ? cfg.ns - 2 : cfg.ns) * cfg.nd);
  for (int c = 0; c < cfg.ns; c++) {
    if (strict && (c == a || c == b)) continue;
    for (int j = 0; j < cfg.nd; j++) {
      RoutePath p;
      p.weight = wgt;
      p.hops.push_back(l_hop(a, u.node, j * cfg.w + c % cfg.w));
      p.hops.push_back(d_hop(cfg, a, c, j));
      if (middle_hop) p.hops.push_back(l_hop(c, j * cfg.w + a % cfg.w, j * cfg.w + b % cfg.w));
      p.hops.push_back(d_hop(cfg, c, b, j));
      p.hops.push_back(l_hop(b, j * cfg.w + c % cfg.w, v.node));
      paths.push_back(std::move(p));
    }
  }
  return paths;
}

LoadMap::LoadMap(const SystemConfig& c) : cfg(c) {
  intra.resize(static_cast<size_t>(cfg.ns) * kNodesPerSupernode * kNodesPerSupernode);
  dlink.resize(static_cast<size_t>(cfg.ns) * cfg.ns * cfg.nd);
}

void LoadMap::add(const LinkRef& link, const Rational& v) {
  if (link.kind == LinkKind::D)
    d_at(link.src.supernode, link.dst.supernode, link.bucket) += v;
  else
    intra_at(link.src.supernode, link.src.node, link.dst.node) += v;
}

Rational LoadMap::max_load(LinkKind kind) const {
  Rational best;
  if (kind == LinkKind::D) {
    for (int a = 0; a < cfg.ns; a++)
      for (int b = 0; b < cfg.ns; b++) {
        if (a == b) continue;
        for (int j = 0; j < cfg.nd; j++) best = std::max(best, d_at(a, b, j));
      }
    return best;
  }
  for (int sn = 0; sn < cfg.ns; sn++)
    for (int u = 0; u < kNodesPerSupernode; u++)
      for (int v = 0; v < kNodesPerSupernode; v++) {
        if (u == v) continue;
        if (intra_kind(u, v) != kind) continue;
        best = std::max(best, intra_at(sn, u, v));
      }
  return best;
}

Rational LoadMap::total_load(LinkKind kind) const {
  Rational sum;
  if (kind == LinkKind::D) {
    for (int a = 0; a < cfg.ns; a++)
      for (int b = 0; b < cfg.ns; b++) {
        if (a == b) continue;
        for (int j = 0; j < cfg.nd; j++) sum += d_at(a, b, j);
      }
    return sum;
  }
  for (int sn = 0; sn < cfg.ns; sn++)
    for (int u = 0; u < kNodesPerSupernode; u++)
      for (int v = 0; v < kNodesPerSupernode; v++) {
        if (u == v) continue;
        if (intra_kind(u, v) != kind) continue;
        sum += intra_at(sn, u, v);
      }
  return sum;
}

Rational LoadMap::self_total(LinkKind kind) const {
  Rational sum;
  if (kind == LinkKind::D) {
    for (int a = 0; a < cfg.ns; a++)
      for (int j = 0; j < cfg.nd; j++) sum += d_at(a, a, j);
    return sum;
  }
  if (kind == LinkKind::LR) return sum;  // equal endpoints share a drawer
  for (int sn = 0; sn < cfg.ns; sn++)
    for (int u = 0; u < kNodesPerSupernode; u++) sum += intra_at(sn, u, u);
  return sum;
}

std::string LoadMap::export_text() const {
  std::ostringstream out;
  auto emit = [&](const char* kind, int asn, int an, int bsn, int bn, const Rational& v) {
    out << kind << ' ' << asn << ' ' << an << ' ' << bsn << ' ' << bn << ' ' << numerator(v)
        << ' ' << denominator(v) << '\n';
  };
  for (int sn = 0; sn < cfg.ns; sn++)
    for (int u = 0; u < kNodesPerSupernode; u++)
      for (int v = 0; v < kNodesPerSupernode; v++) {
        if (u == v) continue;
        const Rational& load = intra_at(sn, u, v);
        if (load == 0) continue;
        emit(intra_kind(u, v) == LinkKind::LL ? "LL" : "LR", sn, u, sn, v, load);
      }
  for (int a = 0; a < cfg.ns; a++)
    for (int b = 0; b < cfg.ns; b++) {
      if (a == b) continue;
      for (int j = 0; j < cfg.nd; j++) {
        const Rational& load = d_at(a, b, j);
        if (load == 0) continue;
        const auto [src, dst] = d_link_endpoints(cfg, a, b, j);
        emit("D", src.supernode, src.node, dst.supernode, dst.node, load);
      }
    }
  return out.str();
}

namespace {

// The indirect spread is accumulated from marginals of the traffic matrix
// instead of walking every (pair, intermediate, bucket) combination; the
// regrouping is algebraically exact and the tests pin it against literal
// path enumeration.
struct IndirectMarginals {
  std::vector<Rational> node_out, node_in;    // per global node id
  std::vector<Rational> sn_pair;              // [a][b], inter pairs only
  std::vector<Rational> sn_out, sn_in;        // per supernode
  std::vector<Rational> classes;              // [r][s]: sn_pair summed by a%w, b%w
  std::vector<Rational> out_res, in_res;      // strict: [gid][peer sn % w]
  std::vector<Rational> row_res, col_res;     // strict: [sn][class], [class][sn]
};

IndirectMarginals collect_marginals(const TrafficMatrix& tm, const SystemConfig& cfg,
                                    bool strict) {
  IndirectMarginals m;
  const size_t gids = static_cast<size_t>(cfg.ns) * kNodesPerSupernode;
  m.node_out.resize(gids);
  m.node_in.resize(gids);
  m.sn_pair.resize(static_cast<size_t>(cfg.ns) * cfg.ns);
  m.sn_out.resize(cfg.ns);
  m.sn_in.resize(cfg.ns);
  m.classes.resize(static_cast<size_t>(cfg.w) * cfg.w);
  if (strict) {
    m.out_res.resize(gids * cfg.w);
    m.in_res.resize(gids * cfg.w);
    m.row_res.resize(static_cast<size_t>(cfg.ns) * cfg.w);
    m.col_res.resize(static_cast<size_t>(cfg.w) * cfg.ns);
  }
  for (const auto& [key, vol] : tm.vol) {
    const int src = static_cast<int>(key >> 14), dst = static_cast<int>(key & 0x3fff);
    const int a = src / kNodesPerSupernode, b = dst / kNodesPerSupernode;
    if (a == b) continue;
    m.node_out[src] += vol;
    m.node_in[dst] += vol;
    m.sn_pair[static_cast<size_t>(a) * cfg.ns + b] += vol;
    m.sn_out[a] += vol;
    m.sn_in[b] += vol;
    m.classes[static_cast<size_t>(a % cfg.w) * cfg.w + b % cfg.w] += vol;
    if (strict) {
      m.out_res[static_cast<size_t>(src) * cfg.w + b % cfg.w] += vol;
      m.in_res[static_cast<size_t>(dst) * cfg.w + a % cfg.w] += vol;
    }
  }
  if (strict)
    for (int a = 0; a < cfg.ns; a++)
      for (int b = 0; b < cfg.ns; b++) {
        const Rational& v = m.sn_pair[static_cast<size_t>(a) * cfg.ns + b];
        if (v == 0) continue;
        m.row_res[static_cast<size_t>(a) * cfg.w + b % cfg.w] += v;
        m.col_res[static_cast<size_t>(a % cfg.w) * cfg.ns + b] += v;
      }
  return m;
}

void route_indirect(const TrafficMatrix& tm, const SystemConfig& cfg, const RoutingOptions& opt,
                    LoadMap& lm) {
  if (opt.strict && cfg.ns < 3)
    throw std::invalid_argument("strict indirect routing needs at least 3 supernodes");
  const IndirectMarginals m = collect_marginals(tm, cfg, opt.strict);
  const long long denom = 1LL * (opt.strict ? cfg.ns - 2 : cfg.ns) * cfg.nd;
  const int w = cfg.w, nd = cfg.nd, ns = cfg.ns;
  const int h = ns / w;  // intermediates per congruence class

  if (!opt.strict) {
    // Entry hop: each class of intermediates pulls an equal share through
    // every attachment port, so a sender spreads 1/32 of its outflow onto
    // each of its 32 local links (the one to itself included).
    for (int g = 0; g < ns * kNodesPerSupernode; g++) {
      if (m.node_out[g] == 0) continue;
      const Rational share = m.node_out[g] / kNodesPerSupernode;
      const int a = g / kNodesPerSupernode, u = g % kNodesPerSupernode;
      for (int x = 0; x < kNodesPerSupernode; x++) lm.intra_at(a, u, x) += share;
    }
    for (int g = 0; g < ns * kNodesPerSupernode; g++) {
      if (m.node_in[g] == 0) continue;
      const Rational share = m.node_in[g] / kNodesPerSupernode;
      const int b = g / kNodesPerSupernode, v = g % kNodesPerSupernode;
      for (int y = 0; y < kNodesPerSupernode; y++) lm.intra_at(b, y, v) += share;
    }
    for (int a = 0; a < ns; a++) {
      if (m.sn_out[a] == 0) continue;
      const Rational share = m.sn_out[a] / denom;
      for (int c = 0; c < ns; c++)
        for (int j = 0; j < nd; j++) lm.d_at(a, c, j) += share;
    }
    for (int b = 0; b < ns; b++) {
      if (m.sn_in[b] == 0) continue;
      const Rational share = m.sn_in[b] / denom;
      for (int c = 0; c < ns; c++)
        for (int j = 0; j < nd; j++) lm.d_at(c, b, j) += share;
    }
    if (opt.middle_hop)
      for (int r = 0; r < w; r++)
        for (int s = 0; s < w; s++) {
          const Rational& cls = m.classes[static_cast<size_t>(r) * w + s];
          if (cls == 0) continue;
          const Rational share = cls / denom;
          for (int c = 0; c < ns; c++)
            for (int j = 0; j < nd; j++) lm.intra_at(c, j * w + r, j * w + s) += share;
        }
    return;
  }

  // Strict: the degenerate intermediates c == a and c == b are excluded, so
  // each marginal needs the volume that would have used them subtracted back
  // out before the uniform spread is applied.
  for (int g = 0; g < ns * kNodesPerSupernode; g++) {
    if (m.node_out[g] == 0) continue;
    const int a = g / kNodesPerSupernode, u = g % kNodesPerSupernode;
    for (int r = 0; r < w; r++) {
      const Rational numer =
          (h - (a % w == r ? 1 : 0)) * m.node_out[g] - m.out_res[static_cast<size_t>(g) * w + r];
      if (numer == 0) continue;
      const Rational share = numer / denom;
      for (int j = 0; j < nd; j++) lm.intra_at(a, u, j * w + r) += share;
    }
  }
  for (int g = 0; g < ns * kNodesPerSupernode; g++) {
    if (m.node_in[g] == 0) continue;
    const int b = g / kNodesPerSupernode, v = g % kNodesPerSupernode;
    for (int r = 0; r < w; r++) {
      const Rational numer =
          (h - (b % w == r ? 1 : 0)) * m.node_in[g] - m.in_res[static_cast<size_t>(g) * w + r];
      if (numer == 0) continue;
      const Rational share = numer / denom;
      for (int j = 0; j < nd; j++) lm.intra_at(b, j * w + r, v) += share;
    }
  }
  for (int a = 0; a < ns; a++) {
    if (m.sn_out[a] == 0) continue;
    for (int c = 0; c < ns; c++) {
      if (c == a) continue;
      const Rational numer = m.sn_out[a] - m.sn_pair[static_cast<size_t>(a) * ns + c];
      if (numer == 0) continue;
      const Rational share = numer / denom;
      for (int j = 0; j < nd; j++) lm.d_at(a, c, j) += share;
    }
  }
  for (int b = 0; b < ns; b++) {
    if (m.sn_in[b] == 0) continue;
    for (int c = 0; c < ns; c++) {
      if (c == b) continue;
      const Rational numer = m.sn_in[b] - m.sn_pair[static_cast<size_t>(c) * ns + b];
      if (numer == 0) continue;
      const Rational share = numer / denom;
      for (int j = 0; j < nd; j++) lm.d_at(c, b, j) += share;
    }
  }
  if (opt.middle_hop)
    for (int c = 0; c < ns; c++)
      for (int r = 0; r < w; r++)
        for (int s = 0; s < w; s++) {
          Rational numer = m.classes[static_cast<size_t>(r) * w + s];
          if (c % w == r) numer -= m.row_res[static_cast<size_t>(c) * w + s];
          if (c % w == s) numer -= m.col_res[static_cast<size_t>(r) * ns + c];
          if (numer == 0) continue;
          const Rational share = numer / denom;
          for (int j = 0; j < nd; j++) lm.intra_at(c, j * w + r, j * w + s) += share;
        }
}

}  // namespace

LoadMap apply_routing(const TrafficMatrix& tm, const SystemConfig& cfg,
                      const RoutingOptions& opt) {
  if (tm.ns != cfg.ns) throw std::invalid_argument("traffic matrix built for a different system");
  LoadMap lm(cfg);

  // Same-supernode volume is always striped across the sender's drawer.
  // Cross-supernode volume is handled per pair under direct routing and from
  // marginals under indirect routing.
  for (const auto& [key, vol] : tm.vol) {
    const int src = static_cast<int>(key >> 14), dst = static_cast<int>(key & 0x3fff);
    const int a = src / kNodesPerSupernode, u = src % kNodesPerSupernode;
    const int b = dst / kNodesPerSupernode, v = dst % kNodesPerSupernode;
    if (a == b) {
      const Rational share = vol / kNodesPerDrawer;
      const int base = u / kNodesPerDrawer * kNodesPerDrawer;
      for (int d = base; d < base + kNodesPerDrawer; d++) {
        lm.intra_at(a, u, d) += share;
        lm.intra_at(a, d, v) += share;
      }
    } else if (opt.route == Route::Direct) {
      const Rational share = vol / cfg.nd;
      for (int j = 0; j < cfg.nd; j++) {
        lm.intra_at(a, u, j * cfg.w + b % cfg.w) += share;
        lm.d_at(a, b, j) += share;
        lm.intra_at(b, j * cfg.w + a % cfg.w, v) += share;
      }
    }
  }
  if (opt.route == Route::Indirect) route_indirect(tm, cfg, opt, lm);
  return lm;
}

}  // namespace percs
