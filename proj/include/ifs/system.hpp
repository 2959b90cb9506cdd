#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifs/maps.hpp"
#include "ifs/rng.hpp"

namespace ifs {

// Finite word over map indices 1..m; the empty word acts as the identity.
struct IndexWord {
  std::vector<int> letters;

  std::size_t length() const { return letters.size(); }

  IndexWord concat(const IndexWord& o) const {
    IndexWord w = *this;
    w.letters.insert(w.letters.end(), o.letters.begin(), o.letters.end());
    return w;
  }
};

// An IFS: ordered maps plus the box domain (optionally triangle-masked).
struct IfsSystem {
  std::vector<MapSpec> maps;
  Box domain;
  bool masked = false;
  Triangle tri;
  std::string name = "custom";

  std::size_t size() const { return maps.size(); }

  const MapSpec& map(int index1) const {
    if (index1 < 1 || index1 > static_cast<int>(maps.size()))
      throw std::invalid_argument("invalid map index " + std::to_string(index1));
    return maps[index1 - 1];
  }

  bool in_domain(Point p, double eps = 1e-9) const {
    if (!domain.contains(p, eps)) return false;
    if (masked && !tri.contains(p, eps)) return false;
    return true;
  }
};

inline Point eval_map_checked(const IfsSystem& sys, int index1, Point p) {
  const MapSpec& m = sys.map(index1);
  if (!sys.in_domain(p))
    throw std::invalid_argument("point (" + std::to_string(p.x) + ", " +
                                std::to_string(p.y) + ") outside domain of " +
                                m.name);
  return eval_map(m, p);
}

// Applies the word's letters in order: the first letter acts first, so
// eval_word(I.concat(J), p) == eval_word(J, eval_word(I, p)).
inline Point eval_word(const IfsSystem& sys, const IndexWord& w, Point p) {
  for (int i : w.letters) p = eval_map(sys.map(i), p);
  return p;
}

// ---- builtin catalog ----

inline constexpr double kSqrt3 = 1.7320508075688772;

inline Point vertex_a() { return {0.0, 0.0}; }
inline Point vertex_b() { return {1.0, 0.0}; }
inline Point vertex_c() { return {0.5, kSqrt3 / 2.0}; }

// Three halvings toward the vertices of the equilateral triangle.
// Domain: the box [-0.2, 1.2]^2, forward-invariant since it is convex and
// contains the three fixed vertices.
inline IfsSystem sierpinski_system() {
  IfsSystem s;
  s.maps = {make_halving(vertex_a(), "s_A"), make_halving(vertex_b(), "s_B"),
            make_halving(vertex_c(), "s_C")};
  s.domain = box2d(-0.2, -0.2, 1.2, 1.2);
  s.name = "sierpinski";
  return s;
}

inline IfsSystem tent2_system(double s, double s2) {
  if (s < 0 || s > 2 || s2 < 0 || s2 > 2)
    throw std::invalid_argument("tent2: parameters must lie in [0, 2]");
  IfsSystem sys;
  sys.maps = {make_tent1d(s), make_tent1d(s2)};
  sys.domain = box1d(0.0, 1.0);
  sys.name = "tent2";
  return sys;
}

inline IfsSystem logistic2_system(double mu, double mu2) {
  if (mu < 0 || mu > 4 || mu2 < 0 || mu2 > 4)
    throw std::invalid_argument("logistic2: parameters must lie in [0, 4]");
  IfsSystem sys;
  sys.maps = {make_logistic1d(mu), make_logistic1d(mu2)};
  sys.domain = box1d(0.0, 1.0);
  sys.name = "logistic2";
  return sys;
}

inline IfsSystem tent1_system(double s) {
  IfsSystem sys = tent2_system(s, s);
  sys.maps.pop_back();
  sys.name = "tent1";
  return sys;
}

inline IfsSystem logistic1_system(double mu) {
  IfsSystem sys = logistic2_system(mu, mu);
  sys.maps.pop_back();
  sys.name = "logistic1";
  return sys;
}

namespace detail {

inline IfsSystem triangle_domain_system(std::string name) {
  IfsSystem s;
  s.domain = box2d(0.0, 0.0, 1.0, kSqrt3 / 2.0);
  s.masked = true;
  s.tri = unit_triangle();
  s.name = std::move(name);
  return s;
}

}  // namespace detail

// Projective automorphisms fixing one vertex each:
//   c_A(x,y) = (x, y) / (x + y/sqrt(3) + 1)
//   c_B(x,y) = (y/sqrt(3) + 1, y) / (-x + y/sqrt(3) + 2)
//   c_C(x,y) = (2y/sqrt(3) - 2x - 1, -sqrt(3)) / (4 (y/sqrt(3) - 1))
inline IfsSystem levitt_yoccoz_system() {
  const double r3 = 1.0 / kSqrt3;
  IfsSystem s = detail::triangle_domain_system("levitt_yoccoz");
  s.maps = {
      make_projective({1, 0, 0, 0, 1, 0, 1, r3, 1}, "c_A"),
      make_projective({0, r3, 1, 0, 1, 0, -1, r3, 2}, "c_B"),
      make_projective({-2, 2 * r3, -1, 0, 0, -kSqrt3, 0, 4 * r3, -4}, "c_C"),
  };
  return s;
}

// {s_A, s_B, t_{s,C}}: two halvings plus a radial tent about the apex.
// An IFS on the triangle for s in [0, sqrt(3)].
inline IfsSystem tent_sierpinski_system(double s) {
  if (s < 0 || s > kSqrt3)
    throw std::invalid_argument("tent_sierpinski: s must lie in [0, sqrt(3)]");
  IfsSystem sys = detail::triangle_domain_system("tent_sierpinski");
  sys.maps = {make_halving(vertex_a(), "s_A"), make_halving(vertex_b(), "s_B"),
              make_radial_tent(s, vertex_c(), "t_C")};
  return sys;
}

// {s_A, s_B, l_{mu,C}}: IFS on the triangle for mu in [0, 2 sqrt(3)].
inline IfsSystem logistic_sierpinski_system(double mu) {
  if (mu < 0 || mu > 2 * kSqrt3)
    throw std::invalid_argument(
        "logistic_sierpinski: mu must lie in [0, 2 sqrt(3)]");
  IfsSystem sys = detail::triangle_domain_system("logistic_sierpinski");
  sys.maps = {make_halving(vertex_a(), "s_A"), make_halving(vertex_b(), "s_B"),
              make_radial_logistic(mu, vertex_c(), "l_C")};
  return sys;
}

// Radial logistic maps about all three vertices.
inline IfsSystem logistic_triangle_system(double mu) {
  if (mu < 0 || mu > 2 * kSqrt3)
    throw std::invalid_argument(
        "logistic_triangle: mu must lie in [0, 2 sqrt(3)]");
  IfsSystem sys = detail::triangle_domain_system("logistic_triangle");
  sys.maps = {make_radial_logistic(mu, vertex_a(), "l_A"),
              make_radial_logistic(mu, vertex_b(), "l_B"),
              make_radial_logistic(mu, vertex_c(), "l_C")};
  return sys;
}

// Two time-1 flow maps of 1D cubics on [0, 3] with attracting fixed points
// at 0 and 3. The time-1 maps are approximated by fixed-step RK4, which is
// the documented surrogate for the exact flows.
inline IfsSystem bistable2_system() {
  IfsSystem sys;
  // x' = -x(x-1)(x-3) = -x^3 + 4x^2 - 3x
  // x' = -x(x-2)(x-3) = -x^3 + 5x^2 - 6x
  sys.maps = {make_cubic_flow(-1, 4, -3, 0, "flow1"),
              make_cubic_flow(-1, 5, -6, 0, "flow2")};
  sys.domain = box1d(0.0, 3.0);
  sys.name = "bistable2";
  return sys;
}

// Samples domain points and checks that every generator keeps them inside
// the (mask-aware) domain. Throws on the first violation.
inline void validate_system(const IfsSystem& sys, int points = 10000,
                            std::uint64_t seed = 7) {
  SplitMix64 rng(seed);
  const Box& d = sys.domain;
  int tried = 0;
  while (tried < points) {
    Point p{d.lo.x + rng.next_double() * (d.hi.x - d.lo.x), 0.0};
    if (d.dim == 2) p.y = d.lo.y + rng.next_double() * (d.hi.y - d.lo.y);
    if (sys.masked && !sys.tri.contains(p)) continue;
    ++tried;
    for (std::size_t i = 0; i < sys.maps.size(); ++i) {
      const Point q = eval_map(sys.maps[i], p);
      if (!sys.in_domain(q, 1e-9))
        throw std::runtime_error(
            "system " + sys.name + ": map " + sys.maps[i].name + " sends (" +
            std::to_string(p.x) + ", " + std::to_string(p.y) +
            ") outside the domain");
    }
  }
}

// Catalog lookup by name; parameters as needed per family.
inline IfsSystem make_system(const std::string& name,
                             const std::map<std::string, double>& params) {
  auto get = [&](const std::string& k, double dflt) {
    auto it = params.find(k);
    return it == params.end() ? dflt : it->second;
  };
  if (name == "sierpinski") return sierpinski_system();
  if (name == "tent2") return tent2_system(get("s", 1.9), get("s2", 1.5));
  if (name == "logistic2") return logistic2_system(get("mu", 3.0), get("mu2", 2.0));
  if (name == "tent1") return tent1_system(get("s", 1.9));
  if (name == "logistic1") return logistic1_system(get("mu", 3.0));
  if (name == "levitt_yoccoz") return levitt_yoccoz_system();
  if (name == "tent_sierpinski") return tent_sierpinski_system(get("s", 1.0));
  if (name == "logistic_sierpinski")
    return logistic_sierpinski_system(get("mu", 2.0));
  if (name == "logistic_triangle")
    return logistic_triangle_system(get("mu", 3.0));
  if (name == "bistable2") return bistable2_system();
  throw std::invalid_argument("unknown system: " + name);
}

}  // namespace ifs
