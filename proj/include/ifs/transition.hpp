#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ifs/grid.hpp"
#include "ifs/maps.hpp"
#include "ifs/metric.hpp"
#include "ifs/parallel.hpp"
#include "ifs/system.hpp"

namespace ifs {

namespace detail {

// Offsets of lattice cells whose center lies within radius r (in domain
// units) of a center, for an nx-pitch grid with widths wx, wy.
struct DiscOffsets {
  std::vector<std::pair<int, int>> off;  // (dx, dy)

  DiscOffsets(double r, double wx, double wy, int dim) {
    const double r2 = r * r * (1.0 + 1e-9) + 1e-300;
    const int mx = static_cast<int>(r / wx * (1 + 1e-9));
    const int my = dim == 2 ? static_cast<int>(r / wy * (1 + 1e-9)) : 0;
    for (int dy = -my; dy <= my; ++dy)
      for (int dx = -mx; dx <= mx; ++dx)
        if (dx * wx * dx * wx + dy * wy * dy * wy <= r2)
          off.emplace_back(dx, dy);
  }
};

// 3x3 (1D: 3) sample lattice spanning the closed cell. Samples falling
// outside a triangle mask are dropped: boundary cells overhang the mask,
// and the maps are only contracted for in-mask points. The cell center is
// always masked in, and the Lipschitz pad of one half cell diameter covers
// the whole cell from the center alone, so the covering stays sound.
inline int cell_samples(const GridSpec& g, CellId c, Point out[9]) {
  const std::uint32_t ix = c % g.nx, iy = c / g.nx;
  const double x0 = g.domain.lo.x + ix * g.wx();
  if (g.dim() == 1) {
    out[0] = {x0, 0.0};
    out[1] = {x0 + 0.5 * g.wx(), 0.0};
    out[2] = {x0 + g.wx(), 0.0};
    return 3;
  }
  const double y0 = g.domain.lo.y + iy * g.wy();
  int n = 0;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      const Point p{x0 + 0.5 * i * g.wx(), y0 + 0.5 * j * g.wy()};
      if (g.mask == MaskKind::triangle && !g.tri.contains(p, 1e-12)) continue;
      out[n++] = p;
    }
  if (n == 0) out[n++] = g.cell_center(c);
  return n;
}

// Cells carrying a positive-measure slice of a box, clamped to the grid.
// Zero-measure boundary touches are excluded (half-open on the high edge)
// with a one-part-per-billion index slop, so aligned boxes map to exactly
// their own cells while fp noise stays covered.
template <typename F>
inline void cells_in_box(const GridSpec& g, const Box& b, F&& f) {
  auto lo_idx = [](double t, double l, double w) {
    return static_cast<std::int64_t>(std::floor((t - l) / w + 1e-9));
  };
  auto hi_idx = [](double t, double l, double w) {
    return static_cast<std::int64_t>(std::floor((t - l) / w - 1e-9));
  };
  std::int64_t x0 = lo_idx(b.lo.x, g.domain.lo.x, g.wx());
  std::int64_t x1 = hi_idx(b.hi.x, g.domain.lo.x, g.wx());
  if (x1 < x0) x1 = x0;  // point-like extent: keep the floor cell
  if (x1 < 0 || x0 >= g.nx) return;
  x0 = std::max<std::int64_t>(x0, 0);
  x1 = std::min<std::int64_t>(x1, g.nx - 1);
  if (g.dim() == 1) {
    for (std::int64_t x = x0; x <= x1; ++x) f(static_cast<CellId>(x));
    return;
  }
  std::int64_t y0 = lo_idx(b.lo.y, g.domain.lo.y, g.wy());
  std::int64_t y1 = hi_idx(b.hi.y, g.domain.lo.y, g.wy());
  if (y1 < y0) y1 = y0;
  if (y1 < 0 || y0 >= g.ny) return;
  y0 = std::max<std::int64_t>(y0, 0);
  y1 = std::min<std::int64_t>(y1, g.ny - 1);
  for (std::int64_t y = y0; y <= y1; ++y)
    for (std::int64_t x = x0; x <= x1; ++x)
      f(static_cast<CellId>(y * g.nx + x));
}

inline Box cell_box(const GridSpec& g, CellId c) {
  const std::uint32_t ix = c % g.nx, iy = c / g.nx;
  const double x0 = g.domain.lo.x + ix * g.wx();
  if (g.dim() == 1) return box1d(x0, x0 + g.wx());
  const double y0 = g.domain.lo.y + iy * g.wy();
  return box2d(x0, y0, x0 + g.wx(), y0 + g.wy());
}

}  // namespace detail

// Outer-approximated image of one cell under one map: the cells hit by the
// true image (exact interval image where available, otherwise a sample
// lattice dilated by the local Lipschitz radius), further dilated by slack.
// The result is sorted and unique.
inline std::vector<CellId> image_cells(const IfsSystem& sys, int map_index,
                                       const GridSpec& g, CellId cell,
                                       double slack) {
  if (slack < 0.0) throw std::invalid_argument("image_cells: negative slack");
  const MapSpec& m = sys.map(map_index);
  const Box cb = detail::cell_box(g, cell);
  std::vector<CellId> hit;
  double pad = slack;
  if (auto ib = exact_image_box(m, cb)) {
    detail::cells_in_box(g, *ib, [&](CellId c) { hit.push_back(c); });
  } else {
    Point s[9];
    const int n = detail::cell_samples(g, cell, s);
    for (int i = 0; i < n; ++i) {
      const CellId c = g.cell_of_point(eval_map(m, s[i]));
      if (c != kNoCell) hit.push_back(c);
    }
    pad += expansion_estimate(m, cb) * g.cell_diameter() / 2.0;
  }
  std::sort(hit.begin(), hit.end());
  hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
  if (pad == 0.0) return hit;
  const detail::DiscOffsets disc(pad, g.wx(), g.wy(), g.dim());
  std::vector<CellId> out;
  out.reserve(hit.size() * disc.off.size());
  const std::int64_t nx = g.nx, ny = g.ny;
  for (CellId c : hit) {
    const std::int64_t ix = c % g.nx, iy = c / g.nx;
    for (auto [dx, dy] : disc.off) {
      const std::int64_t x = ix + dx, y = iy + dy;
      if (x < 0 || x >= nx || y < 0 || y >= ny) continue;
      out.push_back(static_cast<CellId>(y * nx + x));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Per-map directed cell transitions. Core adjacency (image plus slack) is
// stored explicitly; the eta enlargement is kept implicit and applied by
// the queries, which keeps large-eta graphs tractable.
class TransitionGraph {
 public:
  const GridSpec& grid() const { return *grid_; }
  const IfsSystem& system() const { return *sys_; }
  const GridSet& support() const { return support_; }
  double slack() const { return slack_; }
  double eta() const { return eta_; }
  std::size_t map_count() const { return heads_.size(); }
  std::uint64_t dropped_edges() const { return dropped_; }

  // Core out-neighbors (before eta) of cell c under map i (0-based layer).
  std::pair<const CellId*, const CellId*> core_targets(int layer,
                                                       CellId c) const {
    const auto& h = heads_[layer];
    return {edges_[layer].data() + h[c], edges_[layer].data() + h[c + 1]};
  }

  // Union-over-maps one-step image of a set: eta dilation first, support
  // intersection last, matching the edge definition.
  GridSet step(const GridSet& from) const {
    GridSet acc(*grid_);
    for (std::size_t l = 0; l < heads_.size(); ++l)
      from.for_each([&](CellId c) {
        auto [b, e] = core_targets(static_cast<int>(l), c);
        for (const CellId* t = b; t != e; ++t) acc.set(*t);
      });
    if (eta_ > 0.0 && !acc.empty()) acc = dilate(acc, eta_);
    acc &= support_;
    return acc;
  }

  // Cells of the support with at least one out-edge into `into`.
  GridSet pre_step(const GridSet& into) const {
    GridSet target = into;
    if (eta_ > 0.0 && !target.empty()) target = dilate(target, eta_);
    GridSet out(*grid_);
    support_.for_each([&](CellId c) {
      for (std::size_t l = 0; l < heads_.size(); ++l) {
        auto [b, e] = core_targets(static_cast<int>(l), c);
        for (const CellId* t = b; t != e; ++t)
          if (target.test(*t)) {
            out.set(c);
            return;
          }
      }
    });
    return out;
  }

  // Explicit out-neighbor enumeration including eta, deduplicated.
  void out_neighbors(CellId c, std::vector<CellId>& out) const {
    out.clear();
    for (std::size_t l = 0; l < heads_.size(); ++l) {
      auto [b, e] = core_targets(static_cast<int>(l), c);
      out.insert(out.end(), b, e);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (eta_ <= 0.0) {
      std::erase_if(out, [&](CellId t) { return !support_.test(t); });
      return;
    }
    const detail::DiscOffsets disc(eta_, grid_->wx(), grid_->wy(),
                                   grid_->dim());
    std::vector<CellId> fat;
    fat.reserve(out.size() * disc.off.size());
    const std::int64_t nx = grid_->nx, ny = grid_->ny;
    for (CellId t : out) {
      const std::int64_t ix = t % nx, iy = t / nx;
      for (auto [dx, dy] : disc.off) {
        const std::int64_t x = ix + dx, y = iy + dy;
        if (x < 0 || x >= nx || y < 0 || y >= ny) continue;
        const CellId u = static_cast<CellId>(y * nx + x);
        if (support_.test(u)) fat.push_back(u);
      }
    }
    std::sort(fat.begin(), fat.end());
    fat.erase(std::unique(fat.begin(), fat.end()), fat.end());
    out = std::move(fat);
  }

  // Total directed edge count of the union view (eta included); used to
  // decide between explicit and set-level algorithms.
  double edge_budget_estimate() const {
    double core = 0;
    for (const auto& e : edges_) core += static_cast<double>(e.size());
    if (eta_ <= 0.0) return core;
    const detail::DiscOffsets disc(eta_, grid_->wx(), grid_->wy(),
                                   grid_->dim());
    return core * static_cast<double>(disc.off.size());
  }

  // True image point of a cell-center stays within the stored targets
  // (sampling soundness); exposed for tests.
  bool covers_center_image(int layer, CellId c) const {
    const Point q = eval_map(sys_->maps[layer], grid_->cell_center(c));
    const CellId t = grid_->cell_of_point(q);
    if (t == kNoCell) return true;
    auto [b, e] = core_targets(layer, c);
    return std::binary_search(b, e, t);
  }

  friend TransitionGraph build_graph(const IfsSystem&, const GridSpec&,
                                     const GridSet&, double, double);
  friend TransitionGraph make_graph_from_edges(
      const IfsSystem&, const GridSpec&, const GridSet&,
      const std::vector<std::vector<std::pair<CellId, CellId>>>&, double,
      double);

 private:
  const GridSpec* grid_ = nullptr;
  const IfsSystem* sys_ = nullptr;
  GridSet support_;
  double slack_ = 0.0;
  double eta_ = 0.0;
  std::uint64_t dropped_ = 0;
  // CSR per map layer over all grid cells (empty rows off support).
  std::vector<std::vector<std::uint32_t>> heads_;
  std::vector<std::vector<CellId>> edges_;
};

// Builds the per-map transition graph over the given support. Slack
// defaults to one cell diameter, the discrete stand-in for "arbitrarily
// small epsilon"; eta adds the extra chain enlargement.
inline TransitionGraph build_graph(const IfsSystem& sys, const GridSpec& grid,
                                   const GridSet& support, double eta,
                                   double slack = -1.0) {
  if (!support.grid().same_as(grid))
    throw std::invalid_argument("build_graph: support grid mismatch");
  if (support.empty()) throw std::invalid_argument("build_graph: empty support");
  if (eta < 0.0) throw std::invalid_argument("build_graph: negative eta");
  if (slack < 0.0) slack = grid.cell_diameter();

  TransitionGraph g;
  g.grid_ = &grid;
  g.sys_ = &sys;
  g.support_ = support;
  g.slack_ = slack;
  g.eta_ = eta;

  const std::uint32_t n = grid.size();
  const int m = static_cast<int>(sys.size());
  g.heads_.assign(m, {});
  g.edges_.assign(m, {});

  for (int layer = 0; layer < m; ++layer) {
    std::vector<std::uint32_t> deg(n + 1, 0);
    const int workers = std::max(1, worker_count());
    std::vector<std::vector<CellId>> chunk_edges(workers);
    std::vector<std::uint64_t> chunk_drop(workers, 0);
    parallel_blocks(n, [&](std::uint32_t b, std::uint32_t e, int w) {
      auto& out = chunk_edges[w];
      for (CellId c = b; c < e; ++c) {
        if (!support.test(c)) continue;
        auto targets = image_cells(sys, layer + 1, grid, c, slack);
        for (CellId t : targets) {
          out.push_back(t);
          if (!support.test(t)) ++chunk_drop[w];
        }
        deg[c + 1] = static_cast<std::uint32_t>(targets.size());
      }
    });
    for (std::uint32_t i = 0; i < n; ++i) deg[i + 1] += deg[i];
    auto& edges = g.edges_[layer];
    edges.resize(deg[n]);
    std::size_t pos = 0;
    for (auto& ce : chunk_edges) {
      std::copy(ce.begin(), ce.end(), edges.begin() + pos);
      pos += ce.size();
    }
    for (auto d : chunk_drop) g.dropped_ += d;
    g.heads_[layer] = std::move(deg);
  }
  return g;
}

// Assembles a graph from explicit per-map edge lists (tests, file reload).
inline TransitionGraph make_graph_from_edges(
    const IfsSystem& sys, const GridSpec& grid, const GridSet& support,
    const std::vector<std::vector<std::pair<CellId, CellId>>>& per_map,
    double slack = 0.0, double eta = 0.0) {
  TransitionGraph g;
  g.grid_ = &grid;
  g.sys_ = &sys;
  g.support_ = support;
  g.slack_ = slack;
  g.eta_ = eta;
  const std::uint32_t n = grid.size();
  for (const auto& edges : per_map) {
    std::vector<std::uint32_t> deg(n + 1, 0);
    auto sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (auto [u, v] : sorted) deg[u + 1]++;
    for (std::uint32_t i = 0; i < n; ++i) deg[i + 1] += deg[i];
    std::vector<CellId> flat(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) flat[i] = sorted[i].second;
    g.heads_.push_back(std::move(deg));
    g.edges_.push_back(std::move(flat));
  }
  return g;
}

// Forward closure of `from` under the union graph. steps < 0 iterates to a
// fixed point; `converged` reports whether the closure stabilized.
inline GridSet reachable_set(const TransitionGraph& g, const GridSet& from,
                             long steps, bool* converged = nullptr) {
  GridSet acc = from;
  acc &= g.support();
  bool fixed = false;
  GridSet frontier = acc;
  for (long k = 0; steps < 0 || k < steps; ++k) {
    GridSet next = g.step(frontier);
    next -= acc;
    if (next.empty()) {
      fixed = true;
      break;
    }
    acc |= next;
    frontier = std::move(next);
  }
  if (converged) {
    if (!fixed) {
      GridSet one = g.step(acc);
      one -= acc;
      fixed = one.empty();
    }
    *converged = fixed;
  }
  return acc;
}

}  // namespace ifs
