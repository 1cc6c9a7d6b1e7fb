#pragma once

// Two-level direct network of the PERCS family.
//
// A supernode is 32 nodes in 4 drawers of 8. Nodes in a drawer form an
// LL clique (21 GB/s per direction); nodes of different drawers in the same
// supernode are joined by LR links (5 GB/s). Every ordered supernode pair is
// joined by nd D links (10 GB/s), one per "bucket" of w = 32/nd consecutive
// nodes: the j-th link between supernodes a and b runs
//   <a, j*w + (b mod w)>  ->  <b, j*w + (a mod w)>.
// Self-loop LL and D links (u -> u, a -> a) exist as degenerate path hops and
// carry no real load.

#include <utility>
#include <vector>

namespace percs {

inline constexpr int kCapLL = 21;  // GB/s per direction
inline constexpr int kCapLR = 5;
inline constexpr int kCapD = 10;
inline constexpr int kCoresPerNode = 4;
inline constexpr int kNodesPerDrawer = 8;
inline constexpr int kDrawersPerSupernode = 4;
inline constexpr int kNodesPerSupernode = 32;
inline constexpr int kTasksPerSupernode = kNodesPerSupernode * kCoresPerNode;  // 128
inline constexpr int kMaxDLinks = 512;  // ns * nd cap

enum class LinkKind { LL, LR, D };

const char* to_string(LinkKind k);
int capacity(LinkKind k);

struct SystemConfig {
  int ns = 0;  // supernodes
  int nd = 0;  // D links per supernode pair
  int w = 0;   // bucket width 32/nd
  int h = 0;   // D-link origins per node: ns*nd/32
};

// Checks ns >= 1, nd | 32, ns*nd <= 512 and ns*nd a multiple of 32 (integral h).
// Throws std::invalid_argument otherwise.
SystemConfig validate_config(int ns, int nd);

struct NodeRef {
  int supernode = 0;
  int node = 0;  // 0..31
  int drawer() const { return node / kNodesPerDrawer; }
  bool operator==(const NodeRef&) const = default;
};

struct LinkRef {
  LinkKind kind = LinkKind::LL;
  NodeRef src;
  NodeRef dst;
  int bucket = -1;  // D links only
  bool self_loop() const { return src == dst; }
  bool operator==(const LinkRef&) const = default;
};

// Kind of the intra-supernode link u -> v (node indices). Self-loops count LL.
inline LinkKind intra_kind(int u, int v) {
  return u / kNodesPerDrawer == v / kNodesPerDrawer ? LinkKind::LL : LinkKind::LR;
}

// Nodes {j*w .. j*w + w-1} of bucket j.
std::vector<int> bucket_nodes(const SystemConfig& cfg, int j);

// Endpoints of the bucket-j D link from supernode a to supernode b
// (origin first). a == b gives the assumed self-loop.
std::pair<NodeRef, NodeRef> d_link_endpoints(const SystemConfig& cfg, int a, int b, int j);

// Nodes of supernode a hosting D links to supernode b, one per bucket,
// ascending.
std::vector<int> incident_nodes(const SystemConfig& cfg, int a, int b);

// Supernodes whose D links land on the same nodes as b's: {b' : b' = b mod w},
// ascending.
std::vector<int> congruence_class(const SystemConfig& cfg, int b);

// Every directed link of the system, self-loops included.
std::vector<LinkRef> enumerate_links(const SystemConfig& cfg);

}  // namespace percs
