#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifs/metric.hpp"
#include "ifs/transition.hpp"

namespace ifs {

enum class NodeClass { transient, weak_node, strong_node };
enum class SccMethod { auto_, tarjan, setlevel };

inline const char* node_class_name(NodeClass c) {
  switch (c) {
    case NodeClass::transient: return "transient";
    case NodeClass::weak_node: return "weak";
    case NodeClass::strong_node: return "strong";
  }
  return "?";
}

// Condensation of the union transition graph: components partition the
// support, component ids are ordered by smallest contained cell.
class ChainGraph {
 public:
  static constexpr std::uint32_t kNoComp = static_cast<std::uint32_t>(-1);

  const TransitionGraph& graph() const { return *graph_; }
  const GridSpec& grid() const { return graph_->grid(); }
  double eta() const { return graph_->eta(); }

  std::uint32_t component_count() const { return count_; }
  std::uint32_t component_of(CellId c) const { return comp_of_[c]; }
  std::uint32_t component_size(std::uint32_t k) const { return sizes_[k]; }
  CellId representative(std::uint32_t k) const { return reps_[k]; }

  bool classified() const { return classified_; }
  NodeClass node_class(std::uint32_t k) const { return classes_[k]; }

  GridSet component_cells(std::uint32_t k) const {
    GridSet s(grid());
    graph_->support().for_each([&](CellId c) {
      if (comp_of_[c] == k) s.set(c);
    });
    return s;
  }

  // Components of a class, in id order.
  std::vector<std::uint32_t> nodes_of_class(NodeClass min_class) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t k = 0; k < count_; ++k) {
      if (min_class == NodeClass::weak_node &&
          classes_[k] == NodeClass::transient)
        continue;
      if (min_class == NodeClass::strong_node &&
          classes_[k] != NodeClass::strong_node)
        continue;
      out.push_back(k);
    }
    return out;
  }

  friend ChainGraph condense(const TransitionGraph& g, SccMethod method);
  friend ChainGraph& classify(ChainGraph& cg, const TransitionGraph& g);

 private:
  const TransitionGraph* graph_ = nullptr;
  std::vector<std::uint32_t> comp_of_;
  std::vector<std::uint32_t> sizes_;
  std::vector<CellId> reps_;
  std::uint32_t count_ = 0;
  bool classified_ = false;
  std::vector<NodeClass> classes_;

  void relabel_by_smallest_cell() {
    // comp_of_ holds provisional labels; renumber in order of first cell.
    std::vector<std::uint32_t> remap(count_, kNoComp);
    std::uint32_t next = 0;
    const std::uint32_t n = static_cast<std::uint32_t>(comp_of_.size());
    for (CellId c = 0; c < n; ++c) {
      const std::uint32_t k = comp_of_[c];
      if (k == kNoComp) continue;
      if (remap[k] == kNoComp) remap[k] = next++;
      comp_of_[c] = remap[k];
    }
    count_ = next;
    sizes_.assign(count_, 0);
    reps_.assign(count_, kNoCell);
    for (CellId c = 0; c < n; ++c) {
      const std::uint32_t k = comp_of_[c];
      if (k == kNoComp) continue;
      if (reps_[k] == kNoCell) reps_[k] = c;
      ++sizes_[k];
    }
  }
};

namespace detail {

// Iterative Tarjan over the union graph with lazily enumerated neighbors.
inline void tarjan_scc(const TransitionGraph& g,
                       std::vector<std::uint32_t>& comp_of,
                       std::uint32_t& count) {
  const std::uint32_t n = g.grid().size();
  constexpr std::uint32_t kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> index(n, kUnset), lowlink(n, 0);
  std::vector<bool> onstack(n, false);
  std::vector<CellId> stack;
  std::uint32_t next_index = 0;
  count = 0;

  struct Frame {
    CellId v;
    std::uint32_t ni;
    std::vector<CellId> nbrs;
  };
  std::vector<Frame> dfs;

  g.support().for_each([&](CellId root) {
    if (index[root] != kUnset) return;
    dfs.push_back({root, 0, {}});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    onstack[root] = true;
    g.out_neighbors(root, dfs.back().nbrs);

    while (!dfs.empty()) {
      Frame& f = dfs.back();
      bool descended = false;
      while (f.ni < f.nbrs.size()) {
        const CellId w = f.nbrs[f.ni++];
        if (index[w] == kUnset) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          onstack[w] = true;
          dfs.push_back({w, 0, {}});
          g.out_neighbors(w, dfs.back().nbrs);
          descended = true;
          break;
        }
        if (onstack[w]) lowlink[f.v] = std::min(lowlink[f.v], index[w]);
      }
      if (descended) continue;
      // finished v
      const CellId v = f.v;
      if (lowlink[v] == index[v]) {
        for (;;) {
          const CellId w = stack.back();
          stack.pop_back();
          onstack[w] = false;
          comp_of[w] = count;
          if (w == v) break;
        }
        ++count;
      }
      dfs.pop_back();
      if (!dfs.empty()) {
        Frame& parent = dfs.back();
        lowlink[parent.v] = std::min(lowlink[parent.v], lowlink[v]);
      }
    }
  });
}

// Set-level forward-backward SCC decomposition with trimming; used when
// the eta enlargement makes explicit edge enumeration too large. Trimmed
// cells become singleton components.
inline void fb_scc(const TransitionGraph& g,
                   std::vector<std::uint32_t>& comp_of, std::uint32_t& count) {
  count = 0;
  auto singleton = [&](CellId c) { comp_of[c] = count++; };

  auto reach_in = [&](const GridSet& seed, const GridSet& universe) {
    GridSet acc = seed;
    GridSet frontier = seed;
    for (;;) {
      GridSet next = g.step(frontier);
      next &= universe;
      next -= acc;
      if (next.empty()) break;
      acc |= next;
      frontier = std::move(next);
    }
    return acc;
  };
  auto coreach_in = [&](const GridSet& seed, const GridSet& universe) {
    GridSet acc = seed;
    GridSet frontier = seed;
    for (;;) {
      GridSet next = g.pre_step(frontier);
      next &= universe;
      next -= acc;
      if (next.empty()) break;
      acc |= next;
      frontier = std::move(next);
    }
    return acc;
  };

  std::deque<GridSet> work;
  work.push_back(g.support());

  while (!work.empty()) {
    GridSet u = std::move(work.front());
    work.pop_front();
    // trim: peel cells with no out-edge into u, then no in-edge from u
    for (;;) {
      if (u.empty()) break;
      GridSet keep_out = g.pre_step(u);  // cells with an out-edge into u
      keep_out &= u;
      GridSet keep = g.step(u);          // cells with an in-edge from u
      keep &= keep_out;
      if (keep == u) break;
      GridSet trimmed = u;
      trimmed -= keep;
      trimmed.for_each(singleton);
      u = std::move(keep);
    }
    if (u.empty()) continue;

    GridSet pivot(g.grid().same_as(u.grid()) ? u.grid() : u.grid());
    pivot.set(u.first());
    GridSet fwd = reach_in(pivot, u);
    GridSet bwd = coreach_in(pivot, u);
    GridSet scc = fwd & bwd;
    const std::uint32_t comp = count++;
    scc.for_each([&](CellId c) { comp_of[c] = comp; });

    GridSet rest_f = fwd - scc;
    GridSet rest_b = bwd - scc;
    GridSet rest_o = u - fwd;
    rest_o -= bwd;
    if (!rest_f.empty()) work.push_back(std::move(rest_f));
    if (!rest_b.empty()) work.push_back(std::move(rest_b));
    if (!rest_o.empty()) work.push_back(std::move(rest_o));
  }
}

}  // namespace detail

// SCC decomposition of the union graph restricted to the support.
// Classification is pending until classify() runs.
inline ChainGraph condense(const TransitionGraph& g,
                           SccMethod method = SccMethod::auto_) {
  ChainGraph cg;
  cg.graph_ = &g;
  cg.comp_of_.assign(g.grid().size(), ChainGraph::kNoComp);

  // Explicit Tarjan when the eta-expanded edge enumeration stays small;
  // otherwise the set-level decomposition.
  if (method == SccMethod::auto_)
    method = g.edge_budget_estimate() <= 2.5e8 ? SccMethod::tarjan
                                               : SccMethod::setlevel;
  if (method == SccMethod::tarjan)
    detail::tarjan_scc(g, cg.comp_of_, cg.count_);
  else
    detail::fb_scc(g, cg.comp_of_, cg.count_);
  cg.relabel_by_smallest_cell();
  cg.classes_.assign(cg.count_, NodeClass::transient);
  return cg;
}

// Classifies components.
//
// weak node: the component contains a sample-accurate internal edge (some
// cell's sampled image point lands in a cell of the same component). This
// is the union-graph internal-edge test with the slack padding removed, so
// padding-only self-loops along transient passages stay transient.
//
// strong node: a weak node whose sampled one-step image stays within a
// scale-aware radius of the component. This is the discrete surrogate for
// H-invariance of chain nodes. The radius budgets the outer-approximation
// halo around a true node: one cell of quantization plus the slack and
// eta enlargements, amplified once by the local expansion (the halo cells
// of an expanding node overshoot by up to L times their own offset).
inline ChainGraph& classify(ChainGraph& cg, const TransitionGraph& g) {
  const GridSpec& grid = g.grid();
  const IfsSystem& sys = g.system();
  const double cd = grid.cell_diameter();

  std::vector<char> tight_internal(cg.component_count(), 0);
  g.support().for_each([&](CellId c) {
    const std::uint32_t k = cg.component_of(c);
    if (tight_internal[k]) return;
    Point s[9];
    const int n = detail::cell_samples(grid, c, s);
    for (std::size_t mi = 0; mi < sys.size() && !tight_internal[k]; ++mi)
      for (int i = 0; i < n; ++i) {
        const CellId t = grid.cell_of_point(eval_map(sys.maps[mi], s[i]));
        if (t != kNoCell && g.support().test(t) && cg.component_of(t) == k) {
          tight_internal[k] = 1;
          break;
        }
      }
  });

  for (std::uint32_t k = 0; k < cg.component_count(); ++k)
    cg.classes_[k] =
        tight_internal[k] ? NodeClass::weak_node : NodeClass::transient;

  // strong test per weak component
  for (std::uint32_t k = 0; k < cg.component_count(); ++k) {
    if (cg.classes_[k] != NodeClass::weak_node) continue;
    GridSet K = cg.component_cells(k);
    double lip = 0.0;
    K.for_each([&](CellId c) {
      const Box cb = detail::cell_box(grid, c);
      for (const auto& m : sys.maps)
        lip = std::max(lip, expansion_estimate(m, cb));
    });
    const double rho = (1.0 + lip) * (g.slack() + g.eta() + lip * cd);
    const auto dk = distance_sq_transform(K);
    const double rho2 = rho * rho * (1.0 + 1e-9);
    bool contained = true;
    K.for_each([&](CellId c) {
      if (!contained) return;
      Point s[9];
      const int n = detail::cell_samples(grid, c, s);
      for (const auto& m : sys.maps) {
        for (int i = 0; i < n; ++i) {
          const CellId t = grid.cell_of_point(eval_map(m, s[i]));
          if (t == kNoCell || dk[t] > rho2) {
            contained = false;
            return;
          }
        }
      }
    });
    if (contained) cg.classes_[k] = NodeClass::strong_node;
  }
  cg.classified_ = true;
  return cg;
}

enum class RecurrenceClass { strong, weak };

// Union of cells over components of the requested class.
inline GridSet recurrent_set(const ChainGraph& cg, RecurrenceClass which) {
  if (!cg.classified())
    throw std::logic_error("recurrent_set: chain graph not classified");
  const NodeClass need = which == RecurrenceClass::strong
                             ? NodeClass::strong_node
                             : NodeClass::weak_node;
  GridSet out(cg.grid());
  cg.graph().support().for_each([&](CellId c) {
    const NodeClass cls = cg.node_class(cg.component_of(c));
    if (cls == NodeClass::strong_node ||
        (need == NodeClass::weak_node && cls == NodeClass::weak_node))
      out.set(c);
  });
  return out;
}

// Directed edges (M, N) between distinct nodes of the requested class,
// where a condensation path from M to N exists (through any components).
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> node_edges(
    const ChainGraph& cg, RecurrenceClass which) {
  if (!cg.classified())
    throw std::logic_error("node_edges: chain graph not classified");
  const auto nodes = cg.nodes_of_class(which == RecurrenceClass::strong
                                           ? NodeClass::strong_node
                                           : NodeClass::weak_node);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t m : nodes) {
    GridSet from = cg.component_cells(m);
    GridSet closure = reachable_set(cg.graph(), from, -1);
    for (std::uint32_t n : nodes) {
      if (n == m) continue;
      bool hit = false;
      closure.for_each([&](CellId c) {
        if (!hit && cg.component_of(c) == n) hit = true;
      });
      if (hit) out.emplace_back(m, n);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Transitive reduction view of a node edge list (edges implied by a
// two-hop path in the closure are removed).
inline std::vector<std::pair<std::uint32_t, std::uint32_t>>
transitive_reduction(
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
  auto has = [&](std::uint32_t a, std::uint32_t b) {
    return std::binary_search(edges.begin(), edges.end(), std::pair{a, b});
  };
  std::sort(edges.begin(), edges.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (auto [a, b] : edges) {
    bool implied = false;
    for (auto [c, d] : edges) {
      if (c == a && d != b && has(d, b)) {
        implied = true;
        break;
      }
    }
    if (!implied) out.emplace_back(a, b);
  }
  return out;
}

struct ConnectivityReport {
  bool connected = false;
  // Witness partition when disconnected: node ids per side.
  std::vector<std::uint32_t> side_a, side_b;
};

// Undirected connectivity of the node-edge graph of the requested class.
inline ConnectivityReport connectivity(const ChainGraph& cg,
                                       RecurrenceClass which) {
  const auto nodes = cg.nodes_of_class(which == RecurrenceClass::strong
                                           ? NodeClass::strong_node
                                           : NodeClass::weak_node);
  if (nodes.empty())
    throw std::invalid_argument("connectivity: graph has no nodes");
  const auto edges = node_edges(cg, which);
  std::vector<std::uint32_t> parent(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    parent[i] = static_cast<std::uint32_t>(i);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto idx_of = [&](std::uint32_t comp) {
    return static_cast<std::uint32_t>(
        std::lower_bound(nodes.begin(), nodes.end(), comp) - nodes.begin());
  };
  for (auto [a, b] : edges) {
    const auto ra = find(idx_of(a)), rb = find(idx_of(b));
    if (ra != rb) parent[ra] = rb;
  }
  ConnectivityReport rep;
  const std::uint32_t root0 = find(0);
  rep.connected = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (find(static_cast<std::uint32_t>(i)) == root0)
      rep.side_a.push_back(nodes[i]);
    else {
      rep.side_b.push_back(nodes[i]);
      rep.connected = false;
    }
  }
  if (rep.connected) rep.side_b.clear();
  return rep;
}

}  // namespace ifs
