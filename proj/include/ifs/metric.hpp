#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ifs/grid.hpp"

namespace ifs {

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared-distance transform (Felzenszwalb-Huttenlocher lower envelope).
// f holds squared distances sampled at positions i*w; writes the result to d.
inline void dt1d(const std::vector<double>& f, double w, std::vector<double>& d,
                 std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (f[v[0]] == kInf) {  // no finite parabola yet
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + q * (double)q * w * w) - (f[p] + p * (double)p * w * w)) /
          (2.0 * w * w * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    if (f[v[0]] == kInf) {
      d[q] = kInf;
      continue;
    }
    while (z[k + 1] < q) ++k;
    const double dq = (q - v[k]) * w;
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace detail

// Exact squared Euclidean distance (between cell centers) from every grid
// cell to the set A. Cells of A get 0; unreachable only if A is empty.
inline std::vector<double> distance_sq_transform(const GridSet& A) {
  const GridSpec& g = A.grid();
  const std::uint32_t nx = g.nx, ny = g.ny;
  std::vector<double> d(g.size(), detail::kInf);
  A.for_each([&](CellId c) { d[c] = 0.0; });
  if (g.dim() == 1) {
    std::vector<double> f = d, out(nx);
    std::vector<int> v(nx + 1);
    std::vector<double> z(nx + 2);
    detail::dt1d(f, g.wx(), out, v, z);
    return out;
  }
  // pass along x per row
  {
    std::vector<double> f(nx), out(nx);
    std::vector<int> v(nx + 1);
    std::vector<double> z(nx + 2);
    for (std::uint32_t iy = 0; iy < ny; ++iy) {
      for (std::uint32_t ix = 0; ix < nx; ++ix) f[ix] = d[iy * nx + ix];
      detail::dt1d(f, g.wx(), out, v, z);
      for (std::uint32_t ix = 0; ix < nx; ++ix) d[iy * nx + ix] = out[ix];
    }
  }
  // pass along y per column
  {
    std::vector<double> f(ny), out(ny);
    std::vector<int> v(ny + 1);
    std::vector<double> z(ny + 2);
    for (std::uint32_t ix = 0; ix < nx; ++ix) {
      for (std::uint32_t iy = 0; iy < ny; ++iy) f[iy] = d[iy * nx + ix];
      detail::dt1d(f, g.wy(), out, v, z);
      for (std::uint32_t iy = 0; iy < ny; ++iy) d[iy * nx + ix] = out[iy];
    }
  }
  return d;
}

// Masked cells whose center lies within r of some cell center of A.
// The radius test carries a one-part-per-billion slack so exact lattice
// ties (e.g. r equal to one cell width) land inside.
inline GridSet dilate(const GridSet& A, double r) {
  if (r < 0.0) throw std::invalid_argument("dilate: negative radius");
  const GridSpec& g = A.grid();
  if (A.empty()) return A;
  GridSet out(g);
  const auto d = distance_sq_transform(A);
  const double r2 = r * r * (1.0 + 1e-9) + 1e-300;
  for (CellId c = 0; c < g.size(); ++c)
    if (d[c] <= r2 && g.masked_in(c)) out.set(c);
  return out;
}

// Exact Hausdorff distance between the cell-center clouds of A and B.
inline double hausdorff_distance(const GridSet& A, const GridSet& B) {
  if (!A.grid().same_as(B.grid()))
    throw std::invalid_argument("hausdorff: mismatched grids");
  if (A.empty() || B.empty())
    throw std::invalid_argument("hausdorff: empty operand");
  const auto dB = distance_sq_transform(B);
  const auto dA = distance_sq_transform(A);
  double m = 0.0;
  A.for_each([&](CellId c) { m = std::max(m, dB[c]); });
  B.for_each([&](CellId c) { m = std::max(m, dA[c]); });
  return std::sqrt(m);
}

// One-sided sup distance from cells of A to the set B.
inline double sup_distance(const GridSet& A, const GridSet& B) {
  if (A.empty()) return 0.0;
  if (B.empty()) throw std::invalid_argument("sup_distance: empty target");
  const auto dB = distance_sq_transform(B);
  double m = 0.0;
  A.for_each([&](CellId c) { m = std::max(m, dB[c]); });
  return std::sqrt(m);
}

}  // namespace ifs
