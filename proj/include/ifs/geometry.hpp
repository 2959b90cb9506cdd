#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace ifs {

// A point in R^1 or R^2. 1D points keep y == 0.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::sqrt(dot(p, p)); }
inline double dist(Point a, Point b) { return norm(a - b); }

// Axis-aligned box; 1D boxes keep lo.y == hi.y == 0.
struct Box {
  Point lo;
  Point hi;
  int dim = 2;

  double width() const { return hi.x - lo.x; }
  double height() const { return dim == 2 ? hi.y - lo.y : 0.0; }

  bool contains(Point p, double eps = 0.0) const {
    if (p.x < lo.x - eps || p.x > hi.x + eps) return false;
    if (dim == 2 && (p.y < lo.y - eps || p.y > hi.y + eps)) return false;
    return true;
  }
};

inline Box box1d(double lo, double hi) { return Box{{lo, 0.0}, {hi, 0.0}, 1}; }
inline Box box2d(double x0, double y0, double x1, double y1) {
  return Box{{x0, y0}, {x1, y1}, 2};
}

// Spectral norm of a 2x2 matrix [[a,b],[c,d]] via the singular value
// closed form.
inline double spectral_norm_2x2(double a, double b, double c, double d) {
  const double e = a * a + b * b + c * c + d * d;
  const double f = a * d - b * c;
  const double t = std::sqrt(std::max(0.0, e * e / 4.0 - f * f));
  return std::sqrt(std::max(0.0, e / 2.0 + t));
}

// Closed triangle mask used by the 2D gasket systems.
struct Triangle {
  Point a, b, c;

  // Sign-based test with a small slop so cells centered on an edge count in.
  bool contains(Point p, double eps = 1e-9) const {
    auto side = [](Point u, Point v, Point q) {
      return (v.x - u.x) * (q.y - u.y) - (v.y - u.y) * (q.x - u.x);
    };
    const double d1 = side(a, b, p);
    const double d2 = side(b, c, p);
    const double d3 = side(c, a, p);
    const bool has_neg = d1 < -eps || d2 < -eps || d3 < -eps;
    const bool has_pos = d1 > eps || d2 > eps || d3 > eps;
    return !(has_neg && has_pos);
  }
};

// The equilateral triangle with vertices (0,0), (1,0), (1/2, sqrt(3)/2).
inline Triangle unit_triangle() {
  return Triangle{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
}

}  // namespace ifs
