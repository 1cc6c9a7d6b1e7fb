#include "percs/mappings.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace percs {

namespace {

bool is_pow2(long long x) { return x > 0 && (x & (x - 1)) == 0; }

void check_grid_size(const SystemConfig& cfg, const JobGrid& grid) {
  if (grid.tasks() != 1LL * cfg.ns * kTasksPerSupernode)
    throw std::invalid_argument("grid " + std::to_string(grid.p) + "x" + std::to_string(grid.q) +
                                " does not hold exactly " +
                                std::to_string(1LL * cfg.ns * kTasksPerSupernode) + " tasks");
}

// Unbiased draw in [0, n) by rejection; std::uniform_int_distribution is
// implementation-defined and would break cross-platform reproducibility.
uint64_t bounded_draw(std::mt19937_64& rng, uint64_t n) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::vector<int> shuffled_identity(int n, uint64_t seed) {
  std::vector<int> v(n);
  for (int i = 0; i < n; i++) v[i] = i;
  std::mt19937_64 rng(seed);
  for (uint64_t i = n; i > 1; i--) std::swap(v[i - 1], v[bounded_draw(rng, i)]);
  return v;
}

// Offset of in-block cell (dr, dc) within a block's slot range. Blocks with
// both sides even are carved into 2x2 quads (row-major quad order, row-major
// cores within a quad) so each quad fills one node; degenerate blocks fall
// back to plain row-major fill.
int block_offset(int alpha, int beta, int dr, int dc) {
  if (alpha % 2 == 0 && beta % 2 == 0)
    return ((dr / 2) * (beta / 2) + dc / 2) * 4 + dr % 2 * 2 + dc % 2;
  return dr * beta + dc;
}

}  // namespace

SchemeSpec parse_scheme(const std::string& name) {
  SchemeSpec s;
  s.label = name;
  if (name == "default") {
    s.kind = SchemeKind::Default;
  } else if (name == "node-seq" || name == "node-rnd") {
    s.kind = SchemeKind::Blocking;
    s.alpha = 2;
    s.beta = 2;
    s.random = name == "node-rnd";
  } else if (name == "drawer-seq" || name == "drawer-rnd") {
    s.kind = SchemeKind::Blocking;
    s.alpha = 4;
    s.beta = 8;
    s.random = name == "drawer-rnd";
  } else if (name == "sn-seq" || name == "sn-rnd") {
    s.kind = SchemeKind::Blocking;
    s.alpha = 8;
    s.beta = 16;
    s.random = name == "sn-rnd";
  } else if (name == "mod-color") {
    s.kind = SchemeKind::ModColor;
  } else if (name == "row") {
    s.kind = SchemeKind::Row;
  } else if (name == "column") {
    s.kind = SchemeKind::Column;
  } else if (name == "hybrid") {
    s.kind = SchemeKind::Hybrid;
  } else if (name.rfind("block-", 0) == 0) {
    // block-<A>x<B>-seq / -rnd
    const std::string body = name.substr(6);
    const auto x = body.find('x');
    const auto dash = body.find('-', x == std::string::npos ? 0 : x);
    if (x == std::string::npos || dash == std::string::npos)
      throw std::invalid_argument("bad blocking scheme '" + name + "' (want block-AxB-seq|rnd)");
    const std::string tail = body.substr(dash + 1);
    if (tail != "seq" && tail != "rnd")
      throw std::invalid_argument("bad blocking scheme '" + name + "' (want block-AxB-seq|rnd)");
    s.kind = SchemeKind::Blocking;
    s.alpha = std::stoi(body.substr(0, x));
    s.beta = std::stoi(body.substr(x + 1, dash - x - 1));
    s.random = tail == "rnd";
  } else {
    throw std::invalid_argument("unknown scheme '" + name + "'");
  }
  return s;
}

Mapping default_mapping(const SystemConfig& cfg, const JobGrid& grid) {
  check_grid_size(cfg, grid);
  Mapping m{cfg, grid, "default", "", false, 0, {}};
  m.slot.resize(grid.tasks());
  for (int t = 0; t < static_cast<int>(grid.tasks()); t++) m.slot[t] = t;
  return m;
}

Mapping blocking_mapping(const SystemConfig& cfg, const JobGrid& grid, int alpha, int beta,
                         bool random, uint64_t seed) {
  check_grid_size(cfg, grid);
  if (alpha < 1 || beta < 1 || kTasksPerSupernode % (alpha * beta) != 0)
    throw std::invalid_argument("block size must divide 128");
  if (grid.p % alpha != 0 || grid.q % beta != 0)
    throw std::invalid_argument("block " + std::to_string(alpha) + "x" + std::to_string(beta) +
                                " does not tile grid " + std::to_string(grid.p) + "x" +
                                std::to_string(grid.q));
  const int size = alpha * beta;
  const int bq = grid.q / beta;
  const int blocks = static_cast<int>(grid.tasks()) / size;

  std::vector<int> assign;  // task block -> processor block
  if (random) {
    assign = shuffled_identity(blocks, seed);
  } else {
    assign.resize(blocks);
    for (int i = 0; i < blocks; i++) assign[i] = i;
  }

  Mapping m{cfg, grid,
            "block-" + std::to_string(alpha) + "x" + std::to_string(beta) +
                (random ? "-rnd" : "-seq"),
            "", random, random ? seed : 0, {}};
  m.slot.resize(grid.tasks());
  for (int r = 0; r < grid.p; r++)
    for (int c = 0; c < grid.q; c++) {
      const int tb = (r / alpha) * bq + c / beta;
      m.slot[r * grid.q + c] = assign[tb] * size + block_offset(alpha, beta, r % alpha, c % beta);
    }
  return m;
}

Mapping mod_color_mapping(const SystemConfig& cfg, const JobGrid& grid) {
  check_grid_size(cfg, grid);
  if (grid.p % 32 != 0)
    throw std::invalid_argument("mod-color needs P to be a multiple of 32");
  if (!is_pow2(grid.q) || grid.q < 64)
    throw std::invalid_argument("mod-color needs Q a power of two >= 64");
  const int p = grid.p / 8, q = grid.q / 8;
  const Coloring col = mod_coloring(p, q);
  // k = p*q/2 == PQ/128 == ns by construction.
  if (col.k != cfg.ns) throw std::logic_error("mod-color color count mismatch");

  // Row-major scan: a color's first block fills nodes 0..15, the second 16..31.
  std::vector<int> seen(col.k, 0);
  std::vector<int> half(static_cast<size_t>(p) * q);
  for (int b = 0; b < p * q; b++) half[b] = seen[col.cell[b]]++;

  Mapping m{cfg, grid, "mod-color", "", false, 0, {}};
  m.slot.resize(grid.tasks());
  for (int r = 0; r < grid.p; r++)
    for (int c = 0; c < grid.q; c++) {
      const int br = r / 8, bc = c / 8;
      const int sn = col.at(br, bc);
      const int ir = r % 8, ic = c % 8;
      const int node = half[br * q + bc] * 16 + (ir / 2) * 4 + ic / 2;
      const int core = ir % 2 * 2 + ic % 2;
      m.slot[r * grid.q + c] = sn * kTasksPerSupernode + node * kCoresPerNode + core;
    }
  return m;
}

Mapping row_mapping(const SystemConfig& cfg, const JobGrid& grid) {
  check_grid_size(cfg, grid);
  if (!is_pow2(grid.q) || grid.q > kTasksPerSupernode)
    throw std::invalid_argument("row mapping needs Q a power of two dividing 128");
  const int rows_per = kTasksPerSupernode / grid.q;
  Mapping m{cfg, grid, "row", "", false, 0, {}};
  m.slot.resize(grid.tasks());
  for (int r = 0; r < grid.p; r++)
    for (int c = 0; c < grid.q; c++)
      m.slot[r * grid.q + c] = (r / rows_per) * kTasksPerSupernode + (r % rows_per) * grid.q + c;
  return m;
}

Mapping column_mapping(const SystemConfig& cfg, const JobGrid& grid) {
  check_grid_size(cfg, grid);
  if (!is_pow2(grid.p) || grid.p > kTasksPerSupernode)
    throw std::invalid_argument("column mapping needs P a power of two dividing 128");
  const int cols_per = kTasksPerSupernode / grid.p;
  Mapping m{cfg, grid, "column", "", false, 0, {}};
  m.slot.resize(grid.tasks());
  for (int r = 0; r < grid.p; r++)
    for (int c = 0; c < grid.q; c++)
      m.slot[r * grid.q + c] = (c / cols_per) * kTasksPerSupernode + (c % cols_per) * grid.p + r;
  return m;
}

Mapping hybrid_mapping(const SystemConfig& cfg, const JobGrid& grid) {
  check_grid_size(cfg, grid);
  const bool row_ok = is_pow2(grid.q) && grid.q <= kTasksPerSupernode;
  const bool col_ok = is_pow2(grid.p) && grid.p <= kTasksPerSupernode;
  if (!row_ok && !col_ok)
    throw std::invalid_argument("hybrid mapping: neither row nor column scheme fits grid " +
                                std::to_string(grid.p) + "x" + std::to_string(grid.q));
  Mapping m;
  if (col_ok && (grid.p == 64 && grid.q != 64))
    m = column_mapping(cfg, grid);
  else if (row_ok && (grid.q == 64 && grid.p != 64))
    m = row_mapping(cfg, grid);
  else if (row_ok)
    m = row_mapping(cfg, grid);
  else
    m = column_mapping(cfg, grid);
  m.detail = m.scheme;
  m.scheme = "hybrid";
  return m;
}

Mapping make_mapping(const SystemConfig& cfg, const JobGrid& grid, const SchemeSpec& scheme,
                     uint64_t seed) {
  switch (scheme.kind) {
    case SchemeKind::Default: return default_mapping(cfg, grid);
    case SchemeKind::Blocking: {
      Mapping m = blocking_mapping(cfg, grid, scheme.alpha, scheme.beta, scheme.random, seed);
      m.scheme = scheme.label;
      return m;
    }
    case SchemeKind::ModColor: return mod_color_mapping(cfg, grid);
    case SchemeKind::Row: return row_mapping(cfg, grid);
    case SchemeKind::Column: return column_mapping(cfg, grid);
    case SchemeKind::Hybrid: return hybrid_mapping(cfg, grid);
  }
  throw std::logic_error("unreachable");
}

std::string export_mapping(const Mapping& m) {
  std::ostringstream out;
  for (size_t t = 0; t < m.slot.size(); t++) {
    const NodeRef n = m.node_of(static_cast<int>(t));
    out << t << ' ' << n.supernode << ' ' << n.node << ' ' << m.core_of(static_cast<int>(t))
        << '\n';
  }
  return out.str();
}

PermutationPair nice_pair(int q) {
  if (!is_pow2(q) || q < 8)
    throw std::invalid_argument("nice pair construction needs q a power of two >= 8");
  PermutationPair pp;
  pp.q = q;
  pp.s1.resize(q);
  pp.s2.resize(q);
  for (int i = 0; i < q; i++) {
    pp.s1[i] = i;
    pp.s2[i] = (5 * i + 2) % q;
  }
  return pp;
}

bool is_nice_pair(const PermutationPair& pair) {
  const int q = pair.q;
  if (q < 3 || static_cast<int>(pair.s1.size()) != q || static_cast<int>(pair.s2.size()) != q)
    return false;
  std::vector<int> pos1(q, -1), pos2(q, -1);
  for (int i = 0; i < q; i++) {
    if (pair.s1[i] < 0 || pair.s1[i] >= q || pos1[pair.s1[i]] >= 0) return false;
    if (pair.s2[i] < 0 || pair.s2[i] >= q || pos2[pair.s2[i]] >= 0) return false;
    pos1[pair.s1[i]] = i;
    pos2[pair.s2[i]] = i;
  }
  for (int a = 0; a < q; a++) {
    const int i1 = pos1[a], i2 = pos2[a];
    const int nb[6] = {pair.s1[(i1 + q - 1) % q], pair.s1[(i1 + 1) % q], pair.s2[i1],
                       pair.s2[(i2 + q - 1) % q], pair.s2[(i2 + 1) % q], pair.s1[i2]};
    for (int i = 0; i < 6; i++)
      for (int j = i + 1; j < 6; j++)
        if (nb[i] == nb[j]) return false;
  }
  return true;
}

Coloring mod_coloring(int p, int q) {
  if (p < 4 || p % 4 != 0)
    throw std::invalid_argument("mod coloring needs p a positive multiple of 4");
  if (!is_pow2(q) || q < 8)
    throw std::invalid_argument("mod coloring needs q a power of two >= 8");
  Coloring col;
  col.p = p;
  col.q = q;
  col.k = p * q / 2;
  col.cell.resize(static_cast<size_t>(p) * q);
  for (int g = 0; g < p / 2; g++)
    for (int i = 0; i < q; i++) {
      col.cell[(2 * g) * q + i] = g * q + i;
      col.cell[(2 * g + 1) * q + i] = g * q + (5 * i + 2) % q;
    }
  return col;
}

bool is_perfect_coloring(const Coloring& col) {
  if (col.p < 3 || col.q < 3 || col.k < 1) return false;
  std::vector<std::vector<int>> nb(col.k);
  for (int r = 0; r < col.p; r++)
    for (int c = 0; c < col.q; c++) {
      const int me = col.at(r, c);
      if (me < 0 || me >= col.k) return false;
      nb[me].push_back(col.at((r + col.p - 1) % col.p, c));
      nb[me].push_back(col.at((r + 1) % col.p, c));
      nb[me].push_back(col.at(r, (c + col.q - 1) % col.q));
      nb[me].push_back(col.at(r, (c + 1) % col.q));
    }
  for (int k = 0; k < col.k; k++) {
    auto& v = nb[k];
    std::sort(v.begin(), v.end());
    for (size_t i = 0; i < v.size(); i++) {
      if (v[i] == k) return false;
      if (i && v[i] == v[i - 1]) return false;
    }
  }
  return true;
}

bool grid_eligible(const SystemConfig& cfg, Pattern pat, const SchemeSpec& scheme,
                   const JobGrid& grid, std::string* reason) {
  auto fail = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  if (grid.tasks() != 1LL * cfg.ns * kTasksPerSupernode) return fail("P*Q != 128*ns");
  if (pat == Pattern::Halo && (grid.p < 2 || grid.q < 2)) return fail("halo needs P,Q >= 2");
  switch (scheme.kind) {
    case SchemeKind::Default: return true;
    case SchemeKind::Blocking:
      if (scheme.alpha < 1 || scheme.beta < 1 ||
          kTasksPerSupernode % (scheme.alpha * scheme.beta) != 0)
        return fail("block size must divide 128");
      if (grid.p % scheme.alpha != 0 || grid.q % scheme.beta != 0)
        return fail("block does not tile grid");
      return true;
    case SchemeKind::ModColor:
      if (grid.p % 32 != 0) return fail("mod-color needs P a multiple of 32");
      if (!is_pow2(grid.q) || grid.q < 64) return fail("mod-color needs Q a power of two >= 64");
      return true;
    case SchemeKind::Row:
      if (!is_pow2(grid.q) || grid.q > kTasksPerSupernode)
        return fail("row needs Q a power of two <= 128");
      return true;
    case SchemeKind::Column:
      if (!is_pow2(grid.p) || grid.p > kTasksPerSupernode)
        return fail("column needs P a power of two <= 128");
      return true;
    case SchemeKind::Hybrid:
      if ((is_pow2(grid.q) && grid.q <= kTasksPerSupernode) ||
          (is_pow2(grid.p) && grid.p <= kTasksPerSupernode))
        return true;
      return fail("hybrid needs a row- or column-eligible grid");
  }
  return fail("unknown scheme");
}

JobGrid choose_grid(const SystemConfig& cfg, Pattern pat, const SchemeSpec& scheme) {
  const long long total = 1LL * cfg.ns * kTasksPerSupernode;
  if (!is_pow2(total))
    throw std::invalid_argument("no default grid: 128*ns is not a power of two; pass an "
                                "explicit grid");
  int log2 = 0;
  while ((1LL << (log2 + 1)) <= total) log2++;
  // Most-square candidate first, then progressively flatter ones.
  for (int i = log2 / 2; i >= 0; i--) {
    const JobGrid g{1 << i, static_cast<int>(total >> i)};
    if (grid_eligible(cfg, pat, scheme, g)) return g;
  }
  throw std::invalid_argument("no power-of-two grid of " + std::to_string(total) +
                              " tasks fits scheme '" + scheme.label + "'; pass an explicit grid");
}

}  // namespace percs
