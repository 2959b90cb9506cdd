// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with its runtime. Grid resolutions and tolerances are fixed here.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>

#include "ifs/attractor.hpp"
#include "ifs/chaingraph.hpp"
#include "ifs/chaosgame.hpp"
#include "ifs/jacobian.hpp"
#include "ifs/rng.hpp"
#include "ifs/system.hpp"

using namespace ifs;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool ok = true;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      std::cout << "  [criterion " << id << "] check failed: " << what
                << std::endl;
    }
  }
  ~Criterion() {
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", s);
    std::cout << "[criterion " << id << "] " << (ok ? "PASS" : "FAIL") << " "
              << title << " (" << buf << " s)" << std::endl;
  }
};

GridSet disc_trap(const GridSpec& g, double radius = 0.7) {
  const Point bary{0.5, kSqrt3 / 6.0};
  GridSet s(g);
  for (CellId c = 0; c < g.size(); ++c)
    if (g.masked_in(c) && dist(g.cell_center(c), bary) <= radius) s.set(c);
  return s;
}

GridSet qeps_region(const GridSpec& g, double eps) {
  const Point vs[3] = {vertex_a(), vertex_b(), vertex_c()};
  GridSet s(g);
  for (CellId c = 0; c < g.size(); ++c) {
    if (!g.masked_in(c)) continue;
    const Point p = g.cell_center(c);
    bool ok = true;
    for (const Point& v : vs)
      if (dist(p, v) < eps) ok = false;
    if (ok) s.set(c);
  }
  return s;
}

double span_lo(const GridSpec& g, const GridSet& s) {
  double lo = 1e300;
  s.for_each([&](CellId c) { lo = std::min(lo, g.cell_center(c).x); });
  return lo;
}
double span_hi(const GridSpec& g, const GridSet& s) {
  double hi = -1e300;
  s.for_each([&](CellId c) { hi = std::max(hi, g.cell_center(c).x); });
  return hi;
}

CellId nearest_masked(const GridSpec& g, Point p) {
  CellId pick = kNoCell;
  double best = 1e300;
  for (CellId c = 0; c < g.size(); ++c) {
    if (!g.masked_in(c)) continue;
    const double d = dist(g.cell_center(c), p);
    if (d < best) {
      best = d;
      pick = c;
    }
  }
  return pick;
}

}  // namespace

TEST_CASE("criterion 1: sierpinski eta-recurrence matches N_2eta of the attractor") {
  Criterion cr{1, "sierpinski eta=0.06 recurrent set = N_0.12(attractor), single weak node"};
  const auto sys = sierpinski_system();
  GridSpec g(box2d(-0.2, -0.2, 1.2, 1.2), 1024, 1024);
  const auto attractor = global_attractor(sys, disc_trap(g), g.cell_diameter() / 2, 300);
  cr.expect(attractor.converged, "attractor iteration converged");

  const GridSet target = dilate(attractor.set, 0.12);
  const auto graph = build_graph(sys, g, full_set(g), 0.06);
  auto cg = condense(graph);
  classify(cg, graph);
  const auto weak_nodes = cg.nodes_of_class(NodeClass::weak_node);
  cr.expect(weak_nodes.size() == 1,
            "single weak node (got " + std::to_string(weak_nodes.size()) + ")");
  const GridSet weak = recurrent_set(cg, RecurrenceClass::weak);
  const double dh = hausdorff_distance(weak, target);
  cr.expect(dh <= 3 * g.cell_diameter(),
            "d_H(recurrent, N_0.12) = " + std::to_string(dh) + " <= 3 cd");
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 2: sierpinski single chain node at eta = 0") {
  Criterion cr{2, "sierpinski eta=0 on dilated attractor support: one strong node"};
  const auto sys = sierpinski_system();
  GridSpec g(box2d(-0.2, -0.2, 1.2, 1.2), 1024, 1024);
  const auto attractor = global_attractor(sys, disc_trap(g), g.cell_diameter() / 2, 300);
  const GridSet support = dilate(attractor.set, 2 * g.wx());

  const auto graph = build_graph(sys, g, support, 0.0);
  auto cg = condense(graph);
  classify(cg, graph);
  const auto strong = cg.nodes_of_class(NodeClass::strong_node);
  cr.expect(strong.size() == 1,
            "exactly one strong node (got " + std::to_string(strong.size()) + ")");
  if (strong.size() == 1) {
    const GridSet cells = cg.component_cells(strong[0]);
    const double dh = hausdorff_distance(cells, attractor.set);
    cr.expect(dh <= 2 * g.cell_diameter(),
              "node covers attractor within 2 cd (d_H = " + std::to_string(dh) + ")");
  }
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 3: tent IFS node structure") {
  Criterion cr{3, "tent2(1.9, 1.5): two strong nodes, spans, one edge 0 -> A"};
  const double s = 1.9, s2 = 1.5;
  GridSpec g(box1d(0, 1), 200000);
  const auto sys = tent2_system(s, s2);
  const auto graph = build_graph(sys, g, full_set(g), 0.0);
  auto cg = condense(graph);
  classify(cg, graph);

  const auto strong = cg.nodes_of_class(NodeClass::strong_node);
  cr.expect(strong.size() == 2,
            "exactly two strong nodes (got " + std::to_string(strong.size()) + ")");
  const std::uint32_t zero_node = cg.component_of(g.cell_of_point({0, 0}));
  cr.expect(cg.node_class(zero_node) == NodeClass::strong_node,
            "node containing cell(0) is strong");
  std::uint32_t a_node = ChainGraph::kNoComp;
  for (auto k : strong)
    if (k != zero_node) a_node = k;
  cr.expect(a_node != ChainGraph::kNoComp, "second strong node exists");
  if (a_node != ChainGraph::kNoComp) {
    const GridSet cells = cg.component_cells(a_node);
    const double ell = s2 * (1 - s / 2), c1 = s / 2;
    cr.expect(std::abs(span_lo(g, cells) - ell) <= 3 * g.wx(),
              "A-node lower end matches ell within 3 cells");
    cr.expect(std::abs(span_hi(g, cells) - c1) <= 3 * g.wx(),
              "A-node upper end matches c1 within 3 cells");
  }
  const auto edges = node_edges(cg, RecurrenceClass::strong);
  cr.expect(edges.size() == 1 && !edges.empty() &&
                edges[0].first == zero_node && edges[0].second == a_node,
            "exactly one strong edge, directed 0 -> A");
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 4: tent IFS global attractor") {
  Criterion cr{4, "tent2(1.9, 1.5) attractor spans [0, 0.95]"};
  GridSpec g(box1d(0, 1), 200000);
  const auto sys = tent2_system(1.9, 1.5);
  const auto res = global_attractor(sys, full_set(g), 0.0, 500);
  cr.expect(res.converged, "attractor iteration reached a fixed point");
  cr.expect(span_lo(g, res.set) <= 3 * g.wx(), "covers down to 0 within 3 cells");
  cr.expect(std::abs(span_hi(g, res.set) - 0.95) <= 3 * g.wx(),
            "upper end at c1 = 0.95 within 3 cells");
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 5: hutchinson fixed points and hyperchains") {
  Criterion cr{5, "tent2 fixed-set defects <= 2 cd; chains verify at eps 0.05 and 0.02"};
  GridSpec g(box1d(0, 1), 200000);
  const auto sys = tent2_system(1.9, 1.5);
  const double ell = 0.075, c1 = 0.95, cd = g.cell_diameter();
  GridSet zero(g);
  zero.set(g.cell_of_point({0, 0}));
  const GridSet a = interval_cells(g, ell, c1);
  const std::pair<const char*, GridSet> panel[] = {
      {"{0}", zero},
      {"A", a},
      {"{0} u A", zero | a},
      {"[0, c1]", interval_cells(g, 0.0, c1)},
  };
  for (const auto& [name, set] : panel) {
    const double defect = h_invariance_defect(sys, set);
    cr.expect(defect <= 2 * cd,
              std::string(name) + " defect " + std::to_string(defect) + " <= 2 cd");
  }
  for (double eps : {0.05, 0.02})
    for (auto kind : {TentChainKind::zero_to_zeroA, TentChainKind::zeroA_to_A}) {
      auto chain = tent_hyperchain(1.9, 1.5, kind, eps, g);
      chain = verify_hyperchain(sys, chain);
      cr.expect(chain.verified,
                "chain verifies at eps " + std::to_string(eps));
    }
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 6: levitt-yoccoz contraction and single node") {
  Criterion cr{6, "levitt-yoccoz: jacobian bound, monotone contraction, one strong node"};
  const auto sys = levitt_yoccoz_system();
  GridSpec g(box2d(0, 0, 1.0, kSqrt3 / 2.0), 512, 512, MaskKind::triangle,
             unit_triangle());
  const Point vs[3] = {vertex_a(), vertex_b(), vertex_c()};

  for (int i = 0; i < 3; ++i) {
    const auto scan = jacobian_norm_scan(sys.maps[i], g, g.wx() / 16);
    cr.expect(scan.max_norm <= 1.0 + 1e-9,
              sys.maps[i].name + " max norm <= 1 + 1e-9 (got " +
                  std::to_string(scan.max_norm) + ")");
    for (CellId c : scan.near_unit_cells) {
      double dmin = 1e300;
      for (const Point& v : vs) dmin = std::min(dmin, dist(g.cell_center(c), v));
      cr.expect(dmin <= 3 * g.cell_diameter(),
                "near-unit cell adjacent to a vertex");
    }
  }

  const auto diag = contraction_diagnostic(sys, g, 5, 30, 2024);
  cr.expect(diag.monotone, "hyperspace distances non-increasing over 30 steps");

  const auto attractor = global_attractor(sys, full_set(g), g.cell_diameter(), 400);
  const auto graph = build_graph(sys, g, attractor.set, 0.0);
  auto cg = condense(graph);
  classify(cg, graph);
  const auto strong = cg.nodes_of_class(NodeClass::strong_node);
  cr.expect(strong.size() == 1,
            "exactly one strong node (got " + std::to_string(strong.size()) + ")");
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 7: logistic triangle trapping region and vertex node") {
  Criterion cr{7, "logistic_triangle(3): Q_0.1 traps; V node with outgoing edge only"};
  const auto sys = logistic_triangle_system(3.0);
  GridSpec g(box2d(0, 0, 1.0, kSqrt3 / 2.0), 512, 512, MaskKind::triangle,
             unit_triangle());
  const double cd = g.cell_diameter();

  const GridSet q = qeps_region(g, 0.1);
  const auto rep = verify_trapping(sys, q, {}, 0);
  cr.expect(rep.forward_invariant, "Q_0.1 is forward-invariant");

  const auto graph = build_graph(sys, g, full_set(g), 0.0);
  auto cg = condense(graph);
  classify(cg, graph);

  const Point vs[3] = {vertex_a(), vertex_b(), vertex_c()};
  const std::uint32_t va = cg.component_of(nearest_masked(g, vs[0]));
  const std::uint32_t vb = cg.component_of(nearest_masked(g, vs[1]));
  const std::uint32_t vc = cg.component_of(nearest_masked(g, vs[2]));
  cr.expect(va == vb && vb == vc, "the three vertex cells share one component");
  cr.expect(cg.node_class(va) == NodeClass::strong_node, "V is a strong node");

  // literal reading: the node equals the three vertex cells dilated by
  // one cell
  GridSet vertex_cells(g);
  vertex_cells.set(nearest_masked(g, vs[0]));
  vertex_cells.set(nearest_masked(g, vs[1]));
  vertex_cells.set(nearest_masked(g, vs[2]));
  const GridSet vcells = cg.component_cells(va);
  const GridSet allowed = dilate(vertex_cells, cd);
  double worst = 0.0;
  vcells.for_each([&](CellId c) {
    if (!allowed.test(c)) {
      double dmin = 1e300;
      for (const Point& v : vs)
        dmin = std::min(dmin, dist(g.cell_center(c), v));
      worst = std::max(worst, dmin / cd);
    }
  });
  cr.expect(worst == 0.0,
            "V node cells stay within one cell of the vertex cells "
            "(worst offender at " + std::to_string(worst) + " cd)");

  const auto strong = cg.nodes_of_class(NodeClass::strong_node);
  cr.expect(strong.size() >= 2, "at least one other strong node");
  const auto edges = node_edges(cg, RecurrenceClass::strong);
  bool v_out = false, v_in = false;
  for (auto [m, n] : edges) {
    if (m == va) v_out = true;
    if (n == va) v_in = true;
  }
  cr.expect(v_out, "an edge V -> other exists");
  cr.expect(!v_in, "no edge into V");
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 8: contractive recurrence equals the chaos game") {
  Criterion cr{8, "sierpinski: chaos-game tail within 2 cd of the attractor, 3 seeds"};
  const auto sys = sierpinski_system();
  GridSpec g(box2d(-0.2, -0.2, 1.2, 1.2), 512, 512);
  const auto attractor = global_attractor(sys, disc_trap(g), g.cell_diameter() / 2, 300);
  for (std::uint64_t seed : {11ull, 222ull, 3333ull}) {
    OrbitConfig cfg;
    cfg.start = {0.3, 0.2};
    cfg.total = 4000000;
    cfg.burn_in = 1000;
    cfg.seed = seed;
    const auto orbit = orbit_tail_set(sys, cfg, g);
    cr.expect(!orbit.exited, "orbit stays in the domain");
    const double dh = hausdorff_distance(orbit.cells, attractor.set);
    cr.expect(dh <= 2 * g.cell_diameter(),
              "seed " + std::to_string(seed) + ": d_H = " + std::to_string(dh) +
                  " <= 2 cd");
  }
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 9: oracle equivalence suites") {
  Criterion cr{9, "SCC, hausdorff, union-additivity, eta-monotonicity oracles"};

  // (a) SCC condensation vs transitive-closure equivalence, both engines
  {
    SplitMix64 rng(404);
    IfsSystem dummy;
    dummy.maps = {make_affine1d(1, 0, "id")};
    dummy.domain = box1d(0, 1);
    for (int round = 0; round < 100; ++round) {
      const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.next() % 199);
      GridSpec g(box1d(0, 1), n);
      const double p = 1.0 / n + rng.next_double() * 2.5 / n;
      std::vector<std::pair<CellId, CellId>> edges;
      for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = 0; v < n; ++v)
          if (rng.next_double() < p) edges.emplace_back(u, v);
      const auto graph = make_graph_from_edges(dummy, g, full_set(g), {edges});
      std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
      for (auto [u, v] : edges) reach[u][v] = 1;
      for (std::uint32_t k = 0; k < n; ++k)
        for (std::uint32_t i = 0; i < n; ++i) {
          if (!reach[i][k]) continue;
          for (std::uint32_t j = 0; j < n; ++j)
            if (reach[k][j]) reach[i][j] = 1;
        }
      const auto cg = condense(graph, SccMethod::tarjan);
      const auto cg2 = condense(graph, SccMethod::setlevel);
      bool match = cg.component_count() == cg2.component_count();
      for (std::uint32_t i = 0; i < n && match; ++i)
        for (std::uint32_t j = i + 1; j < n && match; ++j) {
          const bool equiv = reach[i][j] && reach[j][i];
          if ((cg.component_of(i) == cg.component_of(j)) != equiv) match = false;
          if ((cg2.component_of(i) == cg2.component_of(j)) != equiv) match = false;
        }
      if (!match) {
        cr.expect(false, "SCC mismatch on digraph " + std::to_string(round));
        break;
      }
    }
  }

  // (b) hausdorff vs all-pairs oracle
  {
    SplitMix64 rng(505);
    GridSpec g(box2d(0, 0, 1, 1), 64, 64);
    bool all_ok = true;
    for (int round = 0; round < 100; ++round) {
      GridSet a(g), b(g);
      const int na = 1 + static_cast<int>(rng.next() % 400);
      const int nb = 1 + static_cast<int>(rng.next() % 400);
      for (int i = 0; i < na; ++i) a.set(static_cast<CellId>(rng.next() % g.size()));
      for (int i = 0; i < nb; ++i) b.set(static_cast<CellId>(rng.next() % g.size()));
      const double got = hausdorff_distance(a, b);
      double want = 0.0;
      auto side = [&](const GridSet& xs, const GridSet& ys) {
        xs.for_each([&](CellId u) {
          double best = 1e300;
          ys.for_each([&](CellId v) {
            best = std::min(best, dist(g.cell_center(u), g.cell_center(v)));
          });
          want = std::max(want, best);
        });
      };
      side(a, b);
      side(b, a);
      if (std::abs(got - want) > 1e-12) all_ok = false;
    }
    cr.expect(all_ok, "hausdorff matches the all-pairs oracle within 1e-12");
  }

  // (c) H(A u B) == H(A) | H(B), bit-exact
  {
    SplitMix64 rng(606);
    const auto s2d = sierpinski_system();
    GridSpec g2(box2d(-0.2, -0.2, 1.2, 1.2), 96, 96);
    const auto t1d = tent2_system(1.9, 1.5);
    GridSpec g1(box1d(0, 1), 4096);
    bool all_ok = true;
    for (int round = 0; round < 50; ++round) {
      GridSet a(g2), b(g2);
      for (int i = 0; i < 20; ++i) {
        a.set(static_cast<CellId>(rng.next() % g2.size()));
        b.set(static_cast<CellId>(rng.next() % g2.size()));
      }
      if (!(hutchinson_step(s2d, a | b) ==
            (hutchinson_step(s2d, a) | hutchinson_step(s2d, b))))
        all_ok = false;
      GridSet c(g1), d(g1);
      for (int i = 0; i < 15; ++i) {
        c.set(static_cast<CellId>(rng.next() % g1.size()));
        d.set(static_cast<CellId>(rng.next() % g1.size()));
      }
      if (!(hutchinson_step(t1d, c | d) ==
            (hutchinson_step(t1d, c) | hutchinson_step(t1d, d))))
        all_ok = false;
    }
    cr.expect(all_ok, "hutchinson step distributes over unions bit-exactly");
  }

  // (d) eta-monotonicity of edges and recurrent sets
  {
    const double etas[] = {0.0, 0.02, 0.05};
    for (const char* name : {"tent2", "sierpinski"}) {
      const auto sys = make_system(name, {{"s", 1.9}, {"s2", 1.5}});
      GridSpec g = sys.domain.dim == 1 ? GridSpec(sys.domain, 800)
                                       : GridSpec(sys.domain, 96, 96);
      const GridSet support = full_set(g);
      std::vector<TransitionGraph> graphs;
      for (double eta : etas) graphs.push_back(build_graph(sys, g, support, eta));
      bool edges_ok = true;
      std::vector<CellId> n0, n1;
      for (CellId c = 0; c < g.size(); c += 3) {
        for (int k = 0; k + 1 < 3; ++k) {
          graphs[k].out_neighbors(c, n0);
          graphs[k + 1].out_neighbors(c, n1);
          if (!std::includes(n1.begin(), n1.end(), n0.begin(), n0.end()))
            edges_ok = false;
        }
      }
      cr.expect(edges_ok, std::string(name) + ": edge sets grow with eta");
      GridSet prev(g);
      bool first = true, sets_ok = true;
      for (auto& graph : graphs) {
        auto cg = condense(graph);
        classify(cg, graph);
        const GridSet weak = recurrent_set(cg, RecurrenceClass::weak);
        if (!first && !prev.subset_of(weak)) sets_ok = false;
        prev = weak;
        first = false;
      }
      cr.expect(sets_ok, std::string(name) + ": recurrent sets grow with eta");
    }
  }
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 10: disconnected two-map system on [0, 3]") {
  Criterion cr{10, "bistable2: strong graph disconnected, weak graph three nodes"};
  GridSpec g(box1d(0, 3), 6000);
  const auto sys = bistable2_system();
  const auto graph = build_graph(sys, g, full_set(g), 0.0);
  auto cg = condense(graph);
  classify(cg, graph);

  const auto strong = cg.nodes_of_class(NodeClass::strong_node);
  cr.expect(strong.size() == 2,
            "two strong nodes (got " + std::to_string(strong.size()) + ")");
  const std::uint32_t n0 = cg.component_of(g.cell_of_point({0, 0}));
  const std::uint32_t n3 = cg.component_of(g.cell_of_point({3, 0}));
  cr.expect(cg.node_class(n0) == NodeClass::strong_node, "node at 0 is strong");
  cr.expect(cg.node_class(n3) == NodeClass::strong_node, "node at 3 is strong");
  cr.expect(node_edges(cg, RecurrenceClass::strong).empty(), "zero strong edges");
  cr.expect(!connectivity(cg, RecurrenceClass::strong).connected,
            "strong graph disconnected");

  const auto weak = cg.nodes_of_class(NodeClass::weak_node);
  cr.expect(weak.size() == 3,
            "three weak nodes (got " + std::to_string(weak.size()) + ")");
  std::uint32_t buffer = ChainGraph::kNoComp;
  for (auto k : weak)
    if (k != n0 && k != n3) buffer = k;
  cr.expect(buffer != ChainGraph::kNoComp, "buffer node exists");
  if (buffer != ChainGraph::kNoComp) {
    const GridSet bc = cg.component_cells(buffer);
    cr.expect(std::abs(span_lo(g, bc) - 1.0) <= 0.05, "buffer spans down to 1");
    cr.expect(std::abs(span_hi(g, bc) - 2.0) <= 0.05, "buffer spans up to 2");
    const auto wedges = node_edges(cg, RecurrenceClass::weak);
    bool to0 = false, to3 = false;
    bool only_from_buffer = true;
    for (auto [m, n] : wedges) {
      if (m == buffer && n == n0) to0 = true;
      else if (m == buffer && n == n3) to3 = true;
      else only_from_buffer = false;
    }
    cr.expect(to0 && to3 && only_from_buffer,
              "weak edges are exactly [1,2] -> 0 and [1,2] -> 3");
    cr.expect(connectivity(cg, RecurrenceClass::weak).connected,
              "weak graph connected");
  }
  REQUIRE(cr.ok);
}

TEST_CASE("criterion 11: bifurcation sweeps and the cantor gap") {
  Criterion cr{11, "tent/logistic sweeps deterministic; logistic2(3,2) has a cantor gap"};
  GridSpec bins(box1d(0, 1), 1024);
  OrbitConfig per;
  per.start = {0.37, 0};
  per.total = 20000;
  per.burn_in = 2000;
  per.seed = 9;

  auto run_tent = [&]() {
    return bifurcation_sweep(SweepFamily::tent2_fixed_second, std::sqrt(2.0),
                             0.0, 2.0, 512, per, bins);
  };
  auto run_logistic = [&]() {
    return bifurcation_sweep(SweepFamily::logistic2_fixed_second, 3.0, 0.0,
                             4.0, 512, per, bins);
  };
  const auto t1 = run_tent(), t2 = run_tent();
  const auto l1 = run_logistic(), l2 = run_logistic();
  auto same = [](const SweepResult& a, const SweepResult& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
      if (a.rows[i].param != b.rows[i].param ||
          a.rows[i].bin_lo != b.rows[i].bin_lo ||
          a.rows[i].bin_hi != b.rows[i].bin_hi ||
          a.rows[i].count != b.rows[i].count)
        return false;
    return true;
  };
  cr.expect(!t1.rows.empty() && same(t1, t2), "tent sweep deterministic");
  cr.expect(!l1.rows.empty() && same(l1, l2), "logistic sweep deterministic");

  // tail set of logistic2(3, 2): the occupied hull must contain an empty
  // gap wider than 10 bins
  {
    const auto sys = logistic2_system(3.0, 2.0);
    OrbitConfig cfg = per;
    cfg.total = 400000;
    cfg.burn_in = 4000;
    std::vector<std::uint32_t> hits(bins.size(), 0);
    SplitMix64 rng(cfg.seed);
    Point p = cfg.start;
    for (long k = 0; k < cfg.total; ++k) {
      const int mi = 1 + static_cast<int>(rng.next_below(2));
      p = eval_map(sys.map(mi), p);
      if (k >= cfg.burn_in) {
        const CellId c = bins.cell_of_point(p);
        if (c != kNoCell) ++hits[c];
      }
    }
    std::int64_t first = -1, last = -1;
    for (std::uint32_t i = 0; i < bins.size(); ++i)
      if (hits[i] >= 2) {
        if (first < 0) first = i;
        last = i;
      }
    cr.expect(first >= 0 && last > first, "occupied hull exists");
    std::int64_t best_gap = 0, run = 0;
    for (std::int64_t i = first; i <= last; ++i) {
      if (hits[i] < 2) ++run;
      else {
        best_gap = std::max(best_gap, run);
        run = 0;
      }
    }
    cr.expect(best_gap > 10,
              "largest interior gap " + std::to_string(best_gap) + " > 10 bins");
  }
  REQUIRE(cr.ok);
}
