#include "percs/topology.hpp"

#include <stdexcept>
#include <string>

namespace percs {

const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::LL: return "LL";
    case LinkKind::LR: return "LR";
    case LinkKind::D: return "D";
  }
  return "?";
}

int capacity(LinkKind k) {
  switch (k) {
    case LinkKind::LL: return kCapLL;
    case LinkKind::LR: return kCapLR;
    case LinkKind::D: return kCapD;
  }
  return 0;
}

SystemConfig validate_config(int ns, int nd) {
  if (ns < 1) throw std::invalid_argument("ns must be >= 1, got " + std::to_string(ns));
  if (nd < 1 || kNodesPerSupernode % nd != 0)
    throw std::invalid_argument("nd must divide 32, got " + std::to_string(nd));
  const long long product = 1LL * ns * nd;
  if (product > kMaxDLinks)
    throw std::invalid_argument("ns*nd exceeds " + std::to_string(kMaxDLinks) + " (got " +
                                std::to_string(product) + ")");
  if (product % kNodesPerSupernode != 0)
    throw std::invalid_argument("ns*nd must be a multiple of 32 so every node hosts a whole "
                                "number of D links (got ns*nd = " + std::to_string(product) + ")");
  SystemConfig cfg;
  cfg.ns = ns;
  cfg.nd = nd;
  cfg.w = kNodesPerSupernode / nd;
  cfg.h = static_cast<int>(product / kNodesPerSupernode);
  return cfg;
}

std::vector<int> bucket_nodes(const SystemConfig& cfg, int j) {
  if (j < 0 || j >= cfg.nd) throw std::invalid_argument("bucket index out of range");
  std::vector<int> out(cfg.w);
  for (int i = 0; i < cfg.w; i++) out[i] = j * cfg.w + i;
  return out;
}

std::pair<NodeRef, NodeRef> d_link_endpoints(const SystemConfig& cfg, int a, int b, int j) {
  if (a < 0 || a >= cfg.ns || b < 0 || b >= cfg.ns)
    throw std::invalid_argument("supernode index out of range");
  if (j < 0 || j >= cfg.nd) throw std::invalid_argument("bucket index out of range");
  NodeRef origin{a, j * cfg.w + b % cfg.w};
  NodeRef landing{b, j * cfg.w + a % cfg.w};
  return {origin, landing};
}

std::vector<int> incident_nodes(const SystemConfig& cfg, int a, int b) {
  std::vector<int> out(cfg.nd);
  for (int j = 0; j < cfg.nd; j++) out[j] = d_link_endpoints(cfg, a, b, j).first.node;
  return out;
}

std::vector<int> congruence_class(const SystemConfig& cfg, int b) {
  if (b < 0 || b >= cfg.ns) throw std::invalid_argument("supernode index out of range");
  std::vector<int> out;
  for (int s = b % cfg.w; s < cfg.ns; s += cfg.w) out.push_back(s);
  return out;
}

std::vector<LinkRef> enumerate_links(const SystemConfig& cfg) {
  std::vector<LinkRef> out;
  out.reserve(static_cast<size_t>(cfg.ns) * kNodesPerSupernode * kNodesPerSupernode +
              static_cast<size_t>(cfg.ns) * cfg.ns * cfg.nd);
  for (int s = 0; s < cfg.ns; s++)
    for (int u = 0; u < kNodesPerSupernode; u++)
      for (int v = 0; v < kNodesPerSupernode; v++)
        out.push_back({intra_kind(u, v), {s, u}, {s, v}, -1});
  for (int a = 0; a < cfg.ns; a++)
    for (int b = 0; b < cfg.ns; b++)
      for (int j = 0; j < cfg.nd; j++) {
        auto [org, lnd] = d_link_endpoints(cfg, a, b, j);
        out.push_back({LinkKind::D, org, lnd, j});
      }
  return out;
}

}  // namespace percs
