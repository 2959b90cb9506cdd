#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifs/grid.hpp"
#include "ifs/rng.hpp"
#include "ifs/system.hpp"

namespace ifs {

struct OrbitConfig {
  Point start;
  long total = 100000;
  long burn_in = 1000;
  std::uint64_t seed = 1;
  std::vector<double> weights;  // empty = uniform; normalized on use

  void check(std::size_t maps) const {
    if (burn_in >= total)
      throw std::invalid_argument("orbit: burn-in must be < total");
    if (!weights.empty()) {
      if (weights.size() != maps)
        throw std::invalid_argument("orbit: weight count mismatch");
      double sum = 0.0;
      for (double w : weights) {
        if (w <= 0.0) throw std::invalid_argument("orbit: weights must be > 0");
        sum += w;
      }
      if (sum <= 0.0) throw std::invalid_argument("orbit: zero weight sum");
    }
  }
};

struct OrbitResult {
  GridSet cells;
  bool exited = false;   // orbit left the domain (custom systems)
  long steps_done = 0;
};

// Chaos game: random map sequence from the SplitMix64 stream, cells
// accumulated after burn-in. Deterministic for a fixed seed.
inline OrbitResult random_orbit(const IfsSystem& sys, const OrbitConfig& cfg,
                                const GridSpec& g) {
  cfg.check(sys.size());
  if (!sys.in_domain(cfg.start))
    throw std::invalid_argument("orbit: start outside domain");
  OrbitResult res;
  res.cells = GridSet(g);
  SplitMix64 rng(cfg.seed);

  std::vector<double> cdf;
  if (!cfg.weights.empty()) {
    double sum = 0.0;
    for (double w : cfg.weights) sum += w;
    double acc = 0.0;
    for (double w : cfg.weights) {
      acc += w / sum;
      cdf.push_back(acc);
    }
  }
  auto pick = [&]() -> int {
    if (cdf.empty()) return 1 + static_cast<int>(rng.next_below(
                                static_cast<std::uint32_t>(sys.size())));
    const double u = rng.next_double();
    for (std::size_t i = 0; i < cdf.size(); ++i)
      if (u < cdf[i]) return static_cast<int>(i) + 1;
    return static_cast<int>(cdf.size());
  };

  Point p = cfg.start;
  for (long k = 0; k < cfg.total; ++k) {
    p = eval_map(sys.map(pick()), p);
    if (!sys.in_domain(p, 1e-9)) {
      res.exited = true;
      res.steps_done = k;
      return res;
    }
    if (k >= cfg.burn_in) {
      const CellId c = g.cell_of_point(p);
      if (c != kNoCell) res.cells.set(c);
    }
  }
  res.steps_done = cfg.total;
  return res;
}

// Same sampling, reported as an estimate of the orbit's limit set.
inline OrbitResult orbit_tail_set(const IfsSystem& sys, const OrbitConfig& cfg,
                                  const GridSpec& g) {
  return random_orbit(sys, cfg, g);
}

enum class SweepFamily {
  tent2_fixed_second,
  logistic2_fixed_second,
  tent1,
  logistic1,
};

struct SweepRow {
  double param = 0.0;
  std::uint32_t bin_lo = 0, bin_hi = 0;  // [bin_lo, bin_hi) cell range
  std::uint64_t count = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::vector<std::uint32_t>> hits;  // per param, per bin
  std::vector<double> params;
};

// One orbit tail per parameter value; a bin is occupied when hit at least
// twice after burn-in, which suppresses transient speckle.
inline SweepResult bifurcation_sweep(SweepFamily family, double second_param,
                                     double lo, double hi, int steps,
                                     const OrbitConfig& per_param,
                                     const GridSpec& grid1d) {
  if (steps < 1) throw std::invalid_argument("sweep: steps must be >= 1");
  if (grid1d.dim() != 1) throw std::invalid_argument("sweep: need a 1D grid");
  if (hi < lo) throw std::invalid_argument("sweep: empty parameter range");
  SweepResult out;
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    const double param = lo + t * (hi - lo);
    IfsSystem sys;
    switch (family) {
      case SweepFamily::tent2_fixed_second:
        sys = tent2_system(param, second_param);
        break;
      case SweepFamily::logistic2_fixed_second:
        sys = logistic2_system(param, second_param);
        break;
      case SweepFamily::tent1: sys = tent1_system(param); break;
      case SweepFamily::logistic1: sys = logistic1_system(param); break;
    }
    OrbitConfig cfg = per_param;
    cfg.seed = per_param.seed + static_cast<std::uint64_t>(i);
    cfg.check(sys.size());

    std::vector<std::uint32_t> hits(grid1d.size(), 0);
    SplitMix64 rng(cfg.seed);
    Point p = cfg.start;
    for (long k = 0; k < cfg.total; ++k) {
      const int mi = 1 + static_cast<int>(rng.next_below(
                             static_cast<std::uint32_t>(sys.size())));
      p = eval_map(sys.map(mi), p);
      if (!sys.in_domain(p, 1e-9)) break;
      if (k >= cfg.burn_in) {
        const CellId c = grid1d.cell_of_point(p);
        if (c != kNoCell) ++hits[c];
      }
    }
    out.params.push_back(param);
    out.hits.push_back(hits);
    // contiguous occupied-bin runs become rows
    std::uint32_t b = 0;
    const std::uint32_t n = grid1d.size();
    while (b < n) {
      if (hits[b] < 2) {
        ++b;
        continue;
      }
      std::uint32_t e = b;
      std::uint64_t cnt = 0;
      while (e < n && hits[e] >= 2) cnt += hits[e++];
      out.rows.push_back({param, b, e, cnt});
      b = e;
    }
  }
  return out;
}

}  // namespace ifs
