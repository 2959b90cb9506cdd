#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ifs/geometry.hpp"

namespace ifs {

using CellId = std::uint32_t;
inline constexpr CellId kNoCell = static_cast<CellId>(-1);

enum class MaskKind { none, triangle };

// Uniform discretization of a box domain. Flat cell indices run x-fastest.
struct GridSpec {
  Box domain;
  std::uint32_t nx = 0;
  std::uint32_t ny = 1;  // 1 for 1D grids
  MaskKind mask = MaskKind::none;
  Triangle tri;  // only meaningful when mask == triangle

  static constexpr std::uint64_t kMaxCells = std::uint64_t(1) << 24;

  GridSpec() = default;
  GridSpec(Box d, std::uint32_t nx_, std::uint32_t ny_ = 1,
           MaskKind m = MaskKind::none, Triangle t = {})
      : domain(d), nx(nx_), ny(d.dim == 1 ? 1 : ny_), mask(m), tri(t) {
    if (nx == 0 || ny == 0) throw std::invalid_argument("grid: zero resolution");
    if (std::uint64_t(nx) * ny > kMaxCells)
      throw std::invalid_argument("grid: cell count exceeds cap 2^24");
    if (wx() <= 0.0 || (d.dim == 2 && wy() <= 0.0))
      throw std::invalid_argument("grid: nonpositive cell width");
  }

  int dim() const { return domain.dim; }
  std::uint32_t size() const { return nx * ny; }
  double wx() const { return (domain.hi.x - domain.lo.x) / nx; }
  double wy() const { return dim() == 2 ? (domain.hi.y - domain.lo.y) / ny : 0.0; }
  double cell_diameter() const {
    return dim() == 1 ? wx() : std::sqrt(wx() * wx() + wy() * wy());
  }

  Point cell_center(CellId c) const {
    const std::uint32_t ix = c % nx, iy = c / nx;
    Point p{domain.lo.x + (ix + 0.5) * wx(), 0.0};
    if (dim() == 2) p.y = domain.lo.y + (iy + 0.5) * wy();
    return p;
  }

  // Cell of a point, or kNoCell if the point lies outside the domain box.
  // Points within a millionth of a cell outside clamp in, so sample
  // lattices touching the boundary survive fp noise.
  CellId cell_of_point(Point p) const {
    if (!domain.contains(p, 1e-6 * wx())) return kNoCell;
    auto clamp_idx = [](double t, std::uint32_t n) {
      std::int64_t i = static_cast<std::int64_t>(t);
      if (i < 0) i = 0;
      if (i >= static_cast<std::int64_t>(n)) i = n - 1;
      return static_cast<std::uint32_t>(i);
    };
    const std::uint32_t ix = clamp_idx((p.x - domain.lo.x) / wx(), nx);
    const std::uint32_t iy =
        dim() == 2 ? clamp_idx((p.y - domain.lo.y) / wy(), ny) : 0;
    return iy * nx + ix;
  }

  bool masked_in(CellId c) const {
    if (mask == MaskKind::none) return true;
    return tri.contains(cell_center(c));
  }

  bool same_as(const GridSpec& o) const {
    return nx == o.nx && ny == o.ny && domain.dim == o.domain.dim &&
           domain.lo.x == o.domain.lo.x && domain.lo.y == o.domain.lo.y &&
           domain.hi.x == o.domain.hi.x && domain.hi.y == o.domain.hi.y &&
           mask == o.mask;
  }
};

// A finite union of grid cells, the computational stand-in for a compact set.
class GridSet {
 public:
  GridSet() = default;
  explicit GridSet(const GridSpec& g)
      : grid_(&g), bits_((g.size() + 63) / 64, 0) {}

  const GridSpec& grid() const { return *grid_; }
  bool valid() const { return grid_ != nullptr; }

  bool test(CellId c) const { return (bits_[c >> 6] >> (c & 63)) & 1; }
  void set(CellId c) { bits_[c >> 6] |= std::uint64_t(1) << (c & 63); }
  void reset(CellId c) { bits_[c >> 6] &= ~(std::uint64_t(1) << (c & 63)); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : bits_) n += std::popcount(w);
    return n;
  }
  bool empty() const {
    for (auto w : bits_) if (w) return false;
    return true;
  }

  bool operator==(const GridSet& o) const { return bits_ == o.bits_; }

  GridSet& operator|=(const GridSet& o) {
    check(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
  }
  GridSet& operator&=(const GridSet& o) {
    check(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
    return *this;
  }
  GridSet& operator-=(const GridSet& o) {
    check(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
    return *this;
  }

  bool subset_of(const GridSet& o) const {
    check(o);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] & ~o.bits_[i]) return false;
    return true;
  }

  bool intersects(const GridSet& o) const {
    check(o);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] & o.bits_[i]) return true;
    return false;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      std::uint64_t w = bits_[i];
      while (w) {
        const int b = std::countr_zero(w);
        f(static_cast<CellId>(i * 64 + b));
        w &= w - 1;
      }
    }
  }

  std::vector<CellId> cells() const {
    std::vector<CellId> out;
    out.reserve(count());
    for_each([&](CellId c) { out.push_back(c); });
    return out;
  }

  // Smallest set cell id; kNoCell when empty.
  CellId first() const {
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) return static_cast<CellId>(i * 64 + std::countr_zero(bits_[i]));
    return kNoCell;
  }

  const std::vector<std::uint64_t>& words() const { return bits_; }
  std::vector<std::uint64_t>& words() { return bits_; }

 private:
  void check(const GridSet& o) const {
    if (!grid_ || !o.grid_ || !grid_->same_as(*o.grid_))
      throw std::invalid_argument("grid set: mismatched grids");
  }
  const GridSpec* grid_ = nullptr;
  std::vector<std::uint64_t> bits_;
};

inline GridSet operator|(GridSet a, const GridSet& b) { return a |= b; }
inline GridSet operator&(GridSet a, const GridSet& b) { return a &= b; }
inline GridSet operator-(GridSet a, const GridSet& b) { return a -= b; }

enum class SetOp { union_, intersect, diff };

inline GridSet set_algebra(const GridSet& a, const GridSet& b, SetOp op) {
  switch (op) {
    case SetOp::union_: return a | b;
    case SetOp::intersect: return a & b;
    default: return a - b;
  }
}

// All masked-in cells of a grid.
inline GridSet full_set(const GridSpec& g) {
  GridSet s(g);
  for (CellId c = 0; c < g.size(); ++c)
    if (g.masked_in(c)) s.set(c);
  return s;
}

// Cells whose closed extent intersects [a, b] on a 1D grid.
inline GridSet interval_cells(const GridSpec& g, double a, double b) {
  GridSet s(g);
  if (g.dim() != 1 || b < a) return s;
  const double w = g.wx();
  auto idx = [&](double t) {
    double u = (t - g.domain.lo.x) / w;
    std::int64_t i = static_cast<std::int64_t>(std::floor(u));
    return std::clamp<std::int64_t>(i, 0, g.nx - 1);
  };
  for (std::int64_t c = idx(a); c <= idx(b); ++c) s.set(static_cast<CellId>(c));
  return s;
}

}  // namespace ifs
