#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifs/chaingraph.hpp"
#include "ifs/metric.hpp"
#include "ifs/rng.hpp"
#include "ifs/transition.hpp"

namespace ifs {

namespace detail {

// Maps whose exact image of an axis-aligned box is an axis-aligned box
// that tiles over sub-boxes (1D exact kinds and diagonal 2D affines).
inline bool separable_exact(const IfsSystem& sys) {
  for (const auto& m : sys.maps) {
    switch (m.kind) {
      case MapKind::affine1d:
      case MapKind::tent1d:
      case MapKind::logistic1d:
        break;
      case MapKind::affine2d:
        if (m.p[1] != 0.0 || m.p[2] != 0.0) return false;
        break;
      default:
        return false;
    }
  }
  return true;
}

// Per-row halfwidths of the offset disc of radius r (same predicate as
// DiscOffsets, so box stamping matches per-cell stamping bit for bit).
inline std::vector<int> disc_halfwidths(double r, double wx, double wy,
                                        int dim) {
  const double r2 = r * r * (1.0 + 1e-9) + 1e-300;
  const int my = dim == 2 && r > 0 ? static_cast<int>(r / wy * (1 + 1e-9)) : 0;
  std::vector<int> hw(my + 1, -1);
  for (int dy = 0; dy <= my; ++dy) {
    const double rem = r2 - double(dy) * wy * double(dy) * wy;
    if (rem < 0) continue;
    int dx = static_cast<int>(std::sqrt(rem) / wx * (1 + 1e-9)) + 1;
    while (dx >= 0 &&
           double(dx) * wx * double(dx) * wx + double(dy) * wy * double(dy) * wy >
               r2)
      --dx;
    hw[dy] = dx;
  }
  return hw;
}

// Stamps the dilation of the cell-index box [x0..x1]x[y0..y1] into out.
inline void stamp_box(GridSet& out, const GridSpec& g, std::int64_t x0,
                      std::int64_t x1, std::int64_t y0, std::int64_t y1,
                      const std::vector<int>& hw) {
  const std::int64_t nx = g.nx, ny = g.ny;
  const int my = static_cast<int>(hw.size()) - 1;
  for (int dy = -my; dy <= my; ++dy) {
    const int h = hw[std::abs(dy)];
    if (h < 0) continue;
    const std::int64_t yy0 = std::max<std::int64_t>(y0 + dy, 0);
    const std::int64_t yy1 = std::min<std::int64_t>(y1 + dy, ny - 1);
    const std::int64_t xx0 = std::max<std::int64_t>(x0 - h, 0);
    const std::int64_t xx1 = std::min<std::int64_t>(x1 + h, nx - 1);
    for (std::int64_t y = yy0; y <= yy1; ++y)
      for (std::int64_t x = xx0; x <= xx1; ++x)
        out.set(static_cast<CellId>(y * nx + x));
  }
}

// Enumerates maximal runs of set cells within rows: f(x0, x1, y).
template <typename F>
inline void for_each_run(const GridSet& s, F&& f) {
  const GridSpec& g = s.grid();
  const std::uint32_t nx = g.nx;
  for (std::uint32_t y = 0; y < g.ny; ++y) {
    std::uint32_t x = 0;
    while (x < nx) {
      if (!s.test(y * nx + x)) {
        ++x;
        continue;
      }
      std::uint32_t e = x;
      while (e + 1 < nx && s.test(y * nx + e + 1)) ++e;
      f(x, e, y);
      x = e + 1;
    }
  }
}

}  // namespace detail

// Union over maps of outer-approximated images of A's cells, slack one
// cell diameter by default (the same kernel the transition graph uses).
// Image stamping distributes over cells, so H(A u B) == H(A) | H(B)
// bit-exactly; separable systems batch whole cell runs for speed.
inline GridSet hutchinson_step(const IfsSystem& sys, const GridSet& A,
                               double slack = -1.0) {
  if (A.empty()) throw std::invalid_argument("hutchinson_step: empty set");
  const GridSpec& g = A.grid();
  if (slack < 0.0) slack = g.cell_diameter();
  GridSet out(g);
  if (detail::separable_exact(sys)) {
    const auto hw = detail::disc_halfwidths(slack, g.wx(),
                                            g.dim() == 2 ? g.wy() : 1.0,
                                            g.dim());
    detail::for_each_run(A, [&](std::uint32_t x0, std::uint32_t x1,
                                std::uint32_t y) {
      Box run = detail::cell_box(g, y * g.nx + x0);
      const Box last = detail::cell_box(g, y * g.nx + x1);
      run.hi.x = last.hi.x;
      for (const auto& m : sys.maps) {
        const Box ib = *exact_image_box(m, run);
        std::int64_t cx0 = 0, cx1 = -1, cy0 = 0, cy1 = -1;
        detail::cells_in_box(g, ib, [&](CellId c) {
          const std::int64_t ix = c % g.nx, iy = c / g.nx;
          if (cx1 < cx0) {
            cx0 = cx1 = ix;
            cy0 = cy1 = iy;
          } else {
            cx0 = std::min(cx0, ix);
            cx1 = std::max(cx1, ix);
            cy0 = std::min(cy0, iy);
            cy1 = std::max(cy1, iy);
          }
        });
        if (cx1 < cx0) continue;
        detail::stamp_box(out, g, cx0, cx1, cy0, cy1, hw);
      }
    });
  } else {
    A.for_each([&](CellId c) {
      for (int i = 1; i <= static_cast<int>(sys.size()); ++i)
        for (CellId t : image_cells(sys, i, g, c, slack)) out.set(t);
    });
  }
  if (g.mask != MaskKind::none) {
    GridSet masked(g);
    out.for_each([&](CellId c) {
      if (g.masked_in(c)) masked.set(c);
    });
    return masked;
  }
  return out;
}

// d_H between a set and its Hutchinson image.
inline double h_invariance_defect(const IfsSystem& sys, const GridSet& A) {
  return hausdorff_distance(hutchinson_step(sys, A), A);
}

struct AbsorptionSample {
  CellId start = kNoCell;
  bool absorbed = false;
  long steps = -1;
};

struct TrapReport {
  bool forward_invariant = false;
  std::vector<CellId> escape_cells;
  std::vector<AbsorptionSample> absorption;
};

// Forward invariance is hutchinson_step(Q) subset of Q on the outer
// approximation; absorption iterates each sample compact under H until it
// enters Q (it then stays, since H is monotone and H(Q) is inside Q).
inline TrapReport verify_trapping(const IfsSystem& sys, const GridSet& Q,
                                  const std::vector<GridSet>& sample_compacts,
                                  long budget = 200) {
  if (Q.empty()) throw std::invalid_argument("verify_trapping: empty region");
  TrapReport rep;
  GridSet img = hutchinson_step(sys, Q);
  GridSet escaped = img - Q;
  rep.forward_invariant = escaped.empty();
  escaped.for_each([&](CellId c) { rep.escape_cells.push_back(c); });

  for (const GridSet& s0 : sample_compacts) {
    AbsorptionSample a;
    a.start = s0.first();
    GridSet s = s0;
    for (long k = 0; k <= budget; ++k) {
      if (s.subset_of(Q)) {
        a.absorbed = true;
        a.steps = k;
        break;
      }
      s = hutchinson_step(sys, s);
    }
    rep.absorption.push_back(a);
  }
  return rep;
}

// Default absorption panel: singletons at the (mask-clamped) domain
// corners and center.
inline std::vector<GridSet> default_sample_compacts(const IfsSystem& sys,
                                                    const GridSpec& g) {
  std::vector<Point> probes;
  const Box& d = g.domain;
  if (g.dim() == 1) {
    probes = {{d.lo.x, 0}, {d.hi.x, 0}, {(d.lo.x + d.hi.x) / 2, 0}};
  } else {
    probes = {d.lo,
              {d.hi.x, d.lo.y},
              {d.lo.x, d.hi.y},
              d.hi,
              {(d.lo.x + d.hi.x) / 2, (d.lo.y + d.hi.y) / 2}};
  }
  std::vector<GridSet> out;
  for (Point p : probes) {
    CellId pick = kNoCell;
    double best = 1e300;
    for (CellId c = 0; c < g.size(); ++c) {
      if (!g.masked_in(c)) continue;
      const double dd = dist(g.cell_center(c), p);
      if (dd < best) {
        best = dd;
        pick = c;
      }
    }
    if (pick == kNoCell) continue;
    GridSet s(g);
    s.set(pick);
    out.push_back(std::move(s));
  }
  return out;
}

struct AttractorResult {
  GridSet set;
  long iterations = 0;
  bool converged = false;
  std::vector<double> dh_trace;
};

// Decreasing Hutchinson iteration from a forward-invariant region. The
// iteration runs the slack-free outer kernel (pure image covering), which
// keeps the fixed point within two cell diameters of the true attractor;
// the one-cell slack stays with the chain-step kernel. The iterates are
// nested, so a cell-set fixed point always exists; the d_H stop fires
// after three consecutive steps under tol to ride out covering flicker.
inline AttractorResult global_attractor(const IfsSystem& sys, const GridSet& Q,
                                        double tol, long max_iters) {
  GridSet img = hutchinson_step(sys, Q, 0.0);
  if (!img.subset_of(Q))
    throw std::invalid_argument(
        "global_attractor: region is not forward-invariant");
  AttractorResult res;
  GridSet cur = std::move(img);
  long stable = 0;
  for (long k = 1; k <= max_iters; ++k) {
    GridSet next = hutchinson_step(sys, cur, 0.0);
    res.iterations = k;
    if (next == cur) {
      res.converged = true;
      res.dh_trace.push_back(0.0);
      break;
    }
    const double dh = hausdorff_distance(next, cur);
    res.dh_trace.push_back(dh);
    cur = std::move(next);
    stable = dh < tol ? stable + 1 : 0;
    if (tol > 0.0 && stable >= 3) {
      res.converged = true;
      break;
    }
  }
  res.set = std::move(cur);
  return res;
}

// Union of Hutchinson iterates past burn-in; warns when the burn-in has
// not stabilized to one cell diameter.
struct LimitSetResult {
  GridSet set;
  bool stabilized = true;
};

inline LimitSetResult limit_set(const IfsSystem& sys, const GridSet& A,
                                long burn, long window) {
  if (burn < 1 || window < 1)
    throw std::invalid_argument("limit_set: burn and window must be >= 1");
  GridSet prev = A;
  GridSet cur = A;
  for (long k = 0; k < burn; ++k) {
    prev = cur;
    cur = hutchinson_step(sys, cur, 0.0);
  }
  LimitSetResult res;
  res.stabilized = cur.subset_of(dilate(prev, A.grid().cell_diameter()));
  GridSet acc = cur;
  for (long k = 0; k < window; ++k) {
    cur = hutchinson_step(sys, cur, 0.0);
    acc |= cur;
  }
  res.set = std::move(acc);
  return res;
}

// ---- hyperspace chains ----

struct HyperChain {
  std::vector<GridSet> sets;
  double epsilon = 0.0;
  std::vector<double> gaps;  // d_H(H(sets[j]), sets[j+1])
  bool verified = false;
};

inline HyperChain verify_hyperchain(const IfsSystem& sys, HyperChain chain) {
  if (chain.sets.size() < 2)
    throw std::invalid_argument("verify_hyperchain: need at least two sets");
  for (std::size_t i = 1; i < chain.sets.size(); ++i)
    if (!chain.sets[i].grid().same_as(chain.sets[0].grid()))
      throw std::invalid_argument("verify_hyperchain: grid mismatch");
  chain.gaps.clear();
  chain.verified = true;
  for (std::size_t i = 0; i + 1 < chain.sets.size(); ++i) {
    const double gap =
        hausdorff_distance(hutchinson_step(sys, chain.sets[i]),
                           chain.sets[i + 1]);
    chain.gaps.push_back(gap);
    if (!(gap < chain.epsilon)) chain.verified = false;
  }
  return chain;
}

namespace detail {

// Sorted disjoint closed intervals; the exact 1D set calculus behind the
// tent chain construction.
struct IntervalSet {
  std::vector<std::pair<double, double>> iv;

  void add(double a, double b) {
    if (b < a) std::swap(a, b);
    iv.emplace_back(a, b);
  }

  void normalize(double glue = 1e-12) {
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> out;
    for (auto [a, b] : iv) {
      if (!out.empty() && a <= out.back().second + glue)
        out.back().second = std::max(out.back().second, b);
      else
        out.emplace_back(a, b);
    }
    iv = std::move(out);
  }

  bool approx_equal(const IntervalSet& o, double tol) const {
    if (iv.size() != o.iv.size()) return false;
    for (std::size_t i = 0; i < iv.size(); ++i)
      if (std::abs(iv[i].first - o.iv[i].first) > tol ||
          std::abs(iv[i].second - o.iv[i].second) > tol)
        return false;
    return true;
  }
};

// Exact image of [a,b] under the tent map t_s.
inline std::pair<double, double> tent_image(double s, double a, double b) {
  auto t = [&](double x) { return s * std::min(x, 1.0 - x); };
  if (b <= 0.5 || a >= 0.5) {
    const double u = t(a), v = t(b);
    return {std::min(u, v), std::max(u, v)};
  }
  return {std::min(t(a), t(b)), s * 0.5};
}

inline IntervalSet tent_pair_image(double s, double s2, const IntervalSet& A) {
  IntervalSet out;
  for (auto [a, b] : A.iv) {
    auto [u1, v1] = tent_image(s, a, b);
    out.add(u1, v1);
    auto [u2, v2] = tent_image(s2, a, b);
    out.add(u2, v2);
  }
  out.normalize();
  return out;
}

inline GridSet rasterize(const IntervalSet& S, const GridSpec& g) {
  GridSet out(g);
  for (auto [a, b] : S.iv) out |= interval_cells(g, a, b);
  return out;
}

}  // namespace detail

enum class TentChainKind { zero_to_zeroA, zeroA_to_A, interval_to_zeroA };

// The explicit hyperspace chains of the two-tent IFS: a seed set within
// epsilon of the start, then exact Hutchinson images until the target
// fixed set is reached. The sets are computed by exact interval calculus
// and rasterized, so every verified gap is padding-sized except the seeded
// first jump.
inline HyperChain tent_hyperchain(double s, double s2, TentChainKind kind,
                                  double epsilon, const GridSpec& g) {
  if (!(s >= s2 && s2 > std::sqrt(2.0)))
    throw std::invalid_argument("tent_hyperchain: need s >= s2 > sqrt(2)");
  if (!(epsilon > 4.0 * g.cell_diameter()))
    throw std::invalid_argument(
        "tent_hyperchain: epsilon below grid resolution");
  const double c1 = s / 2.0;
  const double ell = s2 * (1.0 - s / 2.0);

  // scaled copies s^-n [ell, 1/2] sit within epsilon of {0}
  int n = 1;
  while (std::pow(s, -n) > 1.5 * epsilon && n < 64) ++n;
  const double scale = std::pow(s, -n);

  detail::IntervalSet target;
  detail::IntervalSet start;
  detail::IntervalSet second;
  switch (kind) {
    case TentChainKind::zero_to_zeroA:
      start.add(0.0, 0.0);
      second.add(0.0, 0.0);
      second.add(scale * ell, scale * 0.5);
      target.add(0.0, 0.0);
      target.add(ell, c1);
      break;
    case TentChainKind::zeroA_to_A:
      start.add(0.0, 0.0);
      start.add(ell, c1);
      second.add(scale * ell, scale * 0.5);
      second.add(ell, c1);
      target.add(ell, c1);
      break;
    case TentChainKind::interval_to_zeroA: {
      start.add(0.0, c1);
      const double eps2 = epsilon / 4.0;
      second.add(0.0, 0.0);
      second.add(eps2, c1);
      target.add(0.0, 0.0);
      target.add(ell, c1);
      break;
    }
  }
  start.normalize();
  second.normalize();

  std::vector<detail::IntervalSet> sets{start, second};
  detail::IntervalSet cur = second;
  for (int k = 0; k < 500; ++k) {
    if (cur.approx_equal(target, 1e-9)) break;
    cur = detail::tent_pair_image(s, s2, cur);
    sets.push_back(cur);
  }
  if (!cur.approx_equal(target, 1e-9))
    throw std::runtime_error("tent_hyperchain: construction did not close");

  HyperChain chain;
  chain.epsilon = epsilon;
  for (const auto& S : sets) chain.sets.push_back(detail::rasterize(S, g));
  return chain;
}

struct ContractionDiagnostic {
  std::vector<double> max_ratio_per_iter;
  bool monotone = true;
};

// Tracks d_H(H^n(A), H^n(B)) for seeded random cell-set pairs. Ratios are
// recorded while the distance stays above the grid floor (10 cells);
// monotone means non-increasing within one cell-diameter tolerance.
inline ContractionDiagnostic contraction_diagnostic(const IfsSystem& sys,
                                                    const GridSpec& g,
                                                    int pairs, int iters,
                                                    std::uint64_t seed) {
  if (pairs < 1 || iters < 2)
    throw std::invalid_argument("contraction_diagnostic: bad budget");
  ContractionDiagnostic out;
  out.max_ratio_per_iter.assign(iters, 0.0);
  SplitMix64 rng(seed);
  const double floor = 10.0 * g.cell_diameter();
  const double tol = g.cell_diameter();

  auto random_set = [&](int cells) {
    GridSet s(g);
    int placed = 0;
    while (placed < cells) {
      const CellId c = static_cast<CellId>(rng.next() % g.size());
      if (!g.masked_in(c)) continue;
      s.set(c);
      ++placed;
    }
    return s;
  };

  for (int p = 0; p < pairs; ++p) {
    GridSet A = random_set(12), B = random_set(12);
    double prev = hausdorff_distance(A, B);
    for (int k = 0; k < iters; ++k) {
      A = hutchinson_step(sys, A);
      B = hutchinson_step(sys, B);
      const double d = hausdorff_distance(A, B);
      if (d > prev + tol) out.monotone = false;
      if (prev > floor && d > floor)
        out.max_ratio_per_iter[k] =
            std::max(out.max_ratio_per_iter[k], d / prev);
      prev = d;
    }
  }
  return out;
}

}  // namespace ifs
