#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifs/geometry.hpp"

namespace ifs {

enum class MapKind {
  affine1d,       // x -> a*x + b
  affine2d,       // p -> A p + t
  projective2d,   // 3x3 matrix acting on (x, y, 1), dehomogenized
  radial_tent,    // polar about P: (r, th) -> (s*min(1-r, r), th)
  radial_logistic,// polar about P: (r, th) -> (mu*r*(1-r), th)
  tent1d,         // x -> s*min(x, 1-x)
  logistic1d,     // x -> mu*x*(1-x)
  cubic_flow1d,   // time-1 map of x' = c3 x^3 + c2 x^2 + c1 x + c0 (RK4)
};

inline const char* kind_name(MapKind k) {
  switch (k) {
    case MapKind::affine1d: return "affine1d";
    case MapKind::affine2d: return "affine2d";
    case MapKind::projective2d: return "projective2d";
    case MapKind::radial_tent: return "radial_tent";
    case MapKind::radial_logistic: return "radial_logistic";
    case MapKind::tent1d: return "tent1d";
    case MapKind::logistic1d: return "logistic1d";
    case MapKind::cubic_flow1d: return "cubic_flow1d";
  }
  return "?";
}

// One continuous self-map of the domain. Parameter layout per kind:
//   affine1d:        p[0]=a, p[1]=b
//   affine2d:        p[0..3]=row-major linear part, p[4..5]=translation
//   projective2d:    p[0..8]=row-major 3x3 matrix
//   radial_tent:     p[0]=s,  p[1..2]=center
//   radial_logistic: p[0]=mu, p[1..2]=center
//   tent1d:          p[0]=s
//   logistic1d:      p[0]=mu
//   cubic_flow1d:    p[0..3]=c3,c2,c1,c0 (fixed-step RK4, 64 substeps)
struct MapSpec {
  MapKind kind = MapKind::affine2d;
  std::array<double, 9> p{};
  std::string name;

  int dim() const {
    switch (kind) {
      case MapKind::affine1d:
      case MapKind::tent1d:
      case MapKind::logistic1d:
      case MapKind::cubic_flow1d:
        return 1;
      default:
        return 2;
    }
  }
};

inline constexpr int kFlowSubsteps = 64;

namespace detail {

inline double cubic_rhs(const MapSpec& m, double x) {
  return ((m.p[0] * x + m.p[1]) * x + m.p[2]) * x + m.p[3];
}

inline double flow_time1(const MapSpec& m, double x) {
  const double h = 1.0 / kFlowSubsteps;
  for (int i = 0; i < kFlowSubsteps; ++i) {
    const double k1 = cubic_rhs(m, x);
    const double k2 = cubic_rhs(m, x + 0.5 * h * k1);
    const double k3 = cubic_rhs(m, x + 0.5 * h * k2);
    const double k4 = cubic_rhs(m, x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace detail

inline Point eval_map(const MapSpec& m, Point q) {
  switch (m.kind) {
    case MapKind::affine1d:
      return {m.p[0] * q.x + m.p[1], 0.0};
    case MapKind::affine2d:
      return {m.p[0] * q.x + m.p[1] * q.y + m.p[4],
              m.p[2] * q.x + m.p[3] * q.y + m.p[5]};
    case MapKind::projective2d: {
      const double u = m.p[0] * q.x + m.p[1] * q.y + m.p[2];
      const double v = m.p[3] * q.x + m.p[4] * q.y + m.p[5];
      const double w = m.p[6] * q.x + m.p[7] * q.y + m.p[8];
      if (w == 0.0)
        throw std::runtime_error("projective map: singular at (" +
                                 std::to_string(q.x) + ", " +
                                 std::to_string(q.y) + ")");
      return {u / w, v / w};
    }
    case MapKind::radial_tent: {
      // Evaluated in polar form about the center; the center is fixed.
      const Point c{m.p[1], m.p[2]};
      const Point d = q - c;
      const double r = norm(d);
      if (r == 0.0) return c;
      const double s = m.p[0];
      // s*min(1-r, r)/r without dividing when r <= 1/2.
      const double factor = r <= 0.5 ? s : s * (1.0 - r) / r;
      return c + factor * d;
    }
    case MapKind::radial_logistic: {
      const Point c{m.p[1], m.p[2]};
      const Point d = q - c;
      const double r = norm(d);
      // mu*r*(1-r) radially == scaling the offset by mu*(1-r).
      return c + (m.p[0] * (1.0 - r)) * d;
    }
    case MapKind::tent1d:
      return {m.p[0] * std::min(q.x, 1.0 - q.x), 0.0};
    case MapKind::logistic1d:
      return {m.p[0] * q.x * (1.0 - q.x), 0.0};
    case MapKind::cubic_flow1d:
      return {detail::flow_time1(m, q.x), 0.0};
  }
  return q;
}

namespace detail {

// Range of r = |q - c| over a box (min/max point-box distance).
inline std::pair<double, double> radius_range(const Box& b, Point c) {
  const double dx = std::max({b.lo.x - c.x, 0.0, c.x - b.hi.x});
  const double dy = b.dim == 2 ? std::max({b.lo.y - c.y, 0.0, c.y - b.hi.y}) : 0.0;
  const double rmin = std::sqrt(dx * dx + dy * dy);
  double rmax = 0.0;
  for (int i = 0; i < 4; ++i) {
    Point q{(i & 1) ? b.hi.x : b.lo.x, (i & 2) ? b.hi.y : b.lo.y};
    if (b.dim == 1) q.y = c.y;
    rmax = std::max(rmax, dist(q, c));
  }
  return {rmin, rmax};
}

}  // namespace detail

// Upper estimate of the local Lipschitz constant of the map over a box.
// Affine and projective kinds use closed-form bounds; the piecewise and
// radial kinds have exact slope formulas; the flow kind samples finite
// differences and inflates by a safety factor of 1.25.
inline double expansion_estimate(const MapSpec& m, const Box& box,
                                 int samples = 8) {
  if (samples < 4) throw std::invalid_argument("expansion_estimate: samples < 4");
  const bool degenerate =
      box.width() <= 0.0 || (box.dim == 2 && box.height() <= 0.0);
  if (degenerate)
    throw std::invalid_argument("expansion_estimate: degenerate box");
  switch (m.kind) {
    case MapKind::affine1d:
      return std::abs(m.p[0]);
    case MapKind::affine2d:
      return spectral_norm_2x2(m.p[0], m.p[1], m.p[2], m.p[3]);
    case MapKind::projective2d: {
      // Jacobian rows: ((m0 - f1 m6), (m1 - f1 m7)) / w and
      //                ((m3 - f2 m6), (m4 - f2 m7)) / w.
      // f1, f2, w are linear-fractional resp. linear, so their extremes over
      // the box sit at corners; entrywise max magnitudes give a sound bound
      // since |J| dominates J in spectral norm.
      double f1mn = 1e300, f1mx = -1e300, f2mn = 1e300, f2mx = -1e300;
      double wmn = 1e300, wmx = -1e300;
      for (int i = 0; i < 4; ++i) {
        const Point q{(i & 1) ? box.hi.x : box.lo.x,
                      (i & 2) ? box.hi.y : box.lo.y};
        const double w = m.p[6] * q.x + m.p[7] * q.y + m.p[8];
        const Point f = eval_map(m, q);
        f1mn = std::min(f1mn, f.x); f1mx = std::max(f1mx, f.x);
        f2mn = std::min(f2mn, f.y); f2mx = std::max(f2mx, f.y);
        wmn = std::min(wmn, w); wmx = std::max(wmx, w);
      }
      if (wmn <= 0.0 && wmx >= 0.0)
        throw std::runtime_error("projective map: box crosses singular line");
      const double wabs = std::min(std::abs(wmn), std::abs(wmx));
      auto entry = [&](double a, double b, double fmn, double fmx) {
        return std::max(std::abs(a - fmn * b), std::abs(a - fmx * b)) / wabs;
      };
      const double a11 = entry(m.p[0], m.p[6], f1mn, f1mx);
      const double a12 = entry(m.p[1], m.p[7], f1mn, f1mx);
      const double a21 = entry(m.p[3], m.p[6], f2mn, f2mx);
      const double a22 = entry(m.p[4], m.p[7], f2mn, f2mx);
      return spectral_norm_2x2(a11, a12, a21, a22);
    }
    case MapKind::radial_tent:
      // Polar Jacobian is diag(rho'(r), rho(r)/r); both bounded by s.
      return std::abs(m.p[0]);
    case MapKind::radial_logistic: {
      const auto [r0, r1] = detail::radius_range(box, {m.p[1], m.p[2]});
      const double mu = std::abs(m.p[0]);
      const double radial =
          std::max(std::abs(1.0 - 2.0 * r0), std::abs(1.0 - 2.0 * r1));
      const double tangential = std::abs(1.0 - r0);
      return mu * std::max(radial, tangential);
    }
    case MapKind::tent1d:
      return std::abs(m.p[0]);
    case MapKind::logistic1d: {
      const double mu = std::abs(m.p[0]);
      return mu * std::max(std::abs(1.0 - 2.0 * box.lo.x),
                           std::abs(1.0 - 2.0 * box.hi.x));
    }
    case MapKind::cubic_flow1d: {
      double best = 0.0;
      const double w = box.width();
      for (int i = 0; i < samples; ++i) {
        const double a = box.lo.x + w * i / samples;
        const double b = box.lo.x + w * (i + 1) / samples;
        const double fa = detail::flow_time1(m, a);
        const double fb = detail::flow_time1(m, b);
        best = std::max(best, std::abs(fb - fa) / (b - a));
      }
      return best * 1.25;
    }
  }
  return 0.0;
}

// True when the map is differentiable on the whole box (used to skip cells
// crossing non-smooth loci in Jacobian scans).
inline bool smooth_on(const MapSpec& m, const Box& box) {
  switch (m.kind) {
    case MapKind::radial_tent: {
      const auto [r0, r1] = detail::radius_range(box, {m.p[1], m.p[2]});
      return r1 < 0.5 || r0 > 0.5;
    }
    case MapKind::tent1d:
      return box.hi.x < 0.5 || box.lo.x > 0.5;
    default:
      return true;
  }
}

// Central finite-difference Jacobian at a point (2D kinds).
inline std::array<double, 4> fd_jacobian(const MapSpec& m, Point q, double h) {
  const Point fx1 = eval_map(m, {q.x + h, q.y});
  const Point fx0 = eval_map(m, {q.x - h, q.y});
  const Point fy1 = eval_map(m, {q.x, q.y + h});
  const Point fy0 = eval_map(m, {q.x, q.y - h});
  return {(fx1.x - fx0.x) / (2 * h), (fy1.x - fy0.x) / (2 * h),
          (fx1.y - fx0.y) / (2 * h), (fy1.y - fy0.y) / (2 * h)};
}

// Exact interval image over a box where cheap (affine and 1D piecewise
// kinds); nullopt for kinds that are outer-approximated by sampling.
inline std::optional<Box> exact_image_box(const MapSpec& m, const Box& b) {
  switch (m.kind) {
    case MapKind::affine1d: {
      const double u = m.p[0] * b.lo.x + m.p[1];
      const double v = m.p[0] * b.hi.x + m.p[1];
      return box1d(std::min(u, v), std::max(u, v));
    }
    case MapKind::affine2d: {
      double mnx = 1e300, mxx = -1e300, mny = 1e300, mxy = -1e300;
      for (int i = 0; i < 4; ++i) {
        const Point q{(i & 1) ? b.hi.x : b.lo.x, (i & 2) ? b.hi.y : b.lo.y};
        const Point f = eval_map(m, q);
        mnx = std::min(mnx, f.x); mxx = std::max(mxx, f.x);
        mny = std::min(mny, f.y); mxy = std::max(mxy, f.y);
      }
      return box2d(mnx, mny, mxx, mxy);
    }
    case MapKind::tent1d: {
      const double s = m.p[0];
      double lo = std::min(eval_map(m, b.lo).x, eval_map(m, b.hi).x);
      double hi = std::max(eval_map(m, b.lo).x, eval_map(m, b.hi).x);
      if (b.lo.x <= 0.5 && 0.5 <= b.hi.x) hi = std::max(hi, s * 0.5);
      return box1d(lo, hi);
    }
    case MapKind::logistic1d: {
      const double mu = m.p[0];
      double lo = std::min(eval_map(m, b.lo).x, eval_map(m, b.hi).x);
      double hi = std::max(eval_map(m, b.lo).x, eval_map(m, b.hi).x);
      if (b.lo.x <= 0.5 && 0.5 <= b.hi.x) hi = std::max(hi, mu * 0.25);
      return box1d(lo, hi);
    }
    default:
      return std::nullopt;
  }
}

// ---- constructors for the builtin map families ----

inline MapSpec make_affine1d(double a, double b, std::string name = {}) {
  MapSpec m;
  m.kind = MapKind::affine1d;
  m.p[0] = a;
  m.p[1] = b;
  m.name = std::move(name);
  return m;
}

inline MapSpec make_affine2d(double a11, double a12, double a21, double a22,
                             double tx, double ty, std::string name = {}) {
  MapSpec m;
  m.kind = MapKind::affine2d;
  m.p = {a11, a12, a21, a22, tx, ty, 0, 0, 0};
  m.name = std::move(name);
  return m;
}

// Homothety of ratio 1/2 toward a fixed vertex.
inline MapSpec make_halving(Point v, std::string name) {
  return make_affine2d(0.5, 0.0, 0.0, 0.5, v.x / 2.0, v.y / 2.0,
                       std::move(name));
}

inline MapSpec make_projective(const std::array<double, 9>& rows,
                               std::string name) {
  MapSpec m;
  m.kind = MapKind::projective2d;
  m.p = rows;
  m.name = std::move(name);
  return m;
}

inline MapSpec make_radial_tent(double s, Point c, std::string name) {
  MapSpec m;
  m.kind = MapKind::radial_tent;
  m.p[0] = s;
  m.p[1] = c.x;
  m.p[2] = c.y;
  m.name = std::move(name);
  return m;
}

inline MapSpec make_radial_logistic(double mu, Point c, std::string name) {
  MapSpec m;
  m.kind = MapKind::radial_logistic;
  m.p[0] = mu;
  m.p[1] = c.x;
  m.p[2] = c.y;
  m.name = std::move(name);
  return m;
}

inline MapSpec make_tent1d(double s, std::string name = {}) {
  MapSpec m;
  m.kind = MapKind::tent1d;
  m.p[0] = s;
  m.name = name.empty() ? "tent(" + std::to_string(s) + ")" : std::move(name);
  return m;
}

inline MapSpec make_logistic1d(double mu, std::string name = {}) {
  MapSpec m;
  m.kind = MapKind::logistic1d;
  m.p[0] = mu;
  m.name = name.empty() ? "logistic(" + std::to_string(mu) + ")" : std::move(name);
  return m;
}

inline MapSpec make_cubic_flow(double c3, double c2, double c1, double c0,
                               std::string name) {
  MapSpec m;
  m.kind = MapKind::cubic_flow1d;
  m.p = {c3, c2, c1, c0, 0, 0, 0, 0, 0};
  m.name = std::move(name);
  return m;
}

}  // namespace ifs
