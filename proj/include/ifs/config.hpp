#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifs/grid.hpp"
#include "ifs/io.hpp"
#include "ifs/metric.hpp"
#include "ifs/system.hpp"

namespace ifs {

// One run of the CLI: the [run] section of the config file, overridable by
// flags. parse_config(dump_config(c)) reproduces c, and dumping again gives
// the identical bytes.
struct RunConfig {
  std::string command = "attractor";
  std::string system = "sierpinski";
  std::map<std::string, double> params;  // s, s2, mu, mu2 as applicable
  long res = 256;
  double eta = 0.0;
  std::string support = "domain";  // domain | trapping:<name> | file:<path>
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = machine parallelism
  std::string out = "out";
  double tol = -1.0;  // attractor stop; < 0 means one cell diameter
  long max_iters = 2000;
  double epsilon = 0.05;
  std::string panel;
  std::string chain;
  std::string family;
  double param_lo = 0.0, param_hi = 2.0;
  double second_param = 1.4142135623730951;
  long sweep_steps = 256;
  long orbit_total = 200000;
  long orbit_burn = 1000;
  double start_x = 0.1, start_y = 0.1;
  // custom system: kind/params per map plus a domain line
  std::vector<std::string> custom_maps;  // "kind p0 p1 ..." one per map
  std::string custom_domain;             // "dim lox hix [loy hiy] [triangle]"
};

inline std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[run]\n";
  os << "chain=" << c.chain << "\n";
  os << "command=" << c.command << "\n";
  os << "epsilon=" << format_double(c.epsilon) << "\n";
  os << "eta=" << format_double(c.eta) << "\n";
  os << "family=" << c.family << "\n";
  os << "max_iters=" << c.max_iters << "\n";
  os << "orbit_burn=" << c.orbit_burn << "\n";
  os << "orbit_total=" << c.orbit_total << "\n";
  os << "out=" << c.out << "\n";
  os << "panel=" << c.panel << "\n";
  os << "param_hi=" << format_double(c.param_hi) << "\n";
  os << "param_lo=" << format_double(c.param_lo) << "\n";
  os << "res=" << c.res << "\n";
  os << "second_param=" << format_double(c.second_param) << "\n";
  os << "seed=" << c.seed << "\n";
  os << "start_x=" << format_double(c.start_x) << "\n";
  os << "start_y=" << format_double(c.start_y) << "\n";
  os << "support=" << c.support << "\n";
  os << "sweep_steps=" << c.sweep_steps << "\n";
  os << "system=" << c.system << "\n";
  os << "threads=" << c.threads << "\n";
  os << "tol=" << format_double(c.tol) << "\n";
  for (const auto& [k, v] : c.params)
    os << "param_" << k << "=" << format_double(v) << "\n";
  if (!c.custom_maps.empty() || !c.custom_domain.empty()) {
    os << "[custom]\n";
    os << "domain=" << c.custom_domain << "\n";
    for (const auto& m : c.custom_maps) os << "map=" << m << "\n";
  }
  return os.str();
}

inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  c.params.clear();
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#' || line[start] == ';') continue;
    if (line[start] == '[') {
      const auto end = line.find(']', start);
      if (end == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated section");
      section = line.substr(start + 1, end - start - 1);
      continue;
    }
    const auto eq = line.find('=', start);
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    const std::string key = line.substr(start, eq - start);
    const std::string val = line.substr(eq + 1);
    auto as_double = [&](const std::string& v) {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size())
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": bad number '" + v + "'");
      return d;
    };
    auto as_long = [&](const std::string& v) {
      return static_cast<long>(as_double(v));
    };
    if (section == "custom") {
      if (key == "domain") c.custom_domain = val;
      else if (key == "map") c.custom_maps.push_back(val);
      else
        throw std::invalid_argument("config: unknown custom key " + key);
      continue;
    }
    if (section != "" && section != "run")
      throw std::invalid_argument("config: unknown section " + section);
    if (key == "chain") c.chain = val;
    else if (key == "command") c.command = val;
    else if (key == "epsilon") c.epsilon = as_double(val);
    else if (key == "eta") c.eta = as_double(val);
    else if (key == "family") c.family = val;
    else if (key == "max_iters") c.max_iters = as_long(val);
    else if (key == "orbit_burn") c.orbit_burn = as_long(val);
    else if (key == "orbit_total") c.orbit_total = as_long(val);
    else if (key == "out") c.out = val;
    else if (key == "panel") c.panel = val;
    else if (key == "param_hi") c.param_hi = as_double(val);
    else if (key == "param_lo") c.param_lo = as_double(val);
    else if (key == "res") c.res = as_long(val);
    else if (key == "second_param") c.second_param = as_double(val);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(as_double(val));
    else if (key == "start_x") c.start_x = as_double(val);
    else if (key == "start_y") c.start_y = as_double(val);
    else if (key == "support") c.support = val;
    else if (key == "sweep_steps") c.sweep_steps = as_long(val);
    else if (key == "system") c.system = val;
    else if (key == "threads") c.threads = static_cast<int>(as_long(val));
    else if (key == "tol") c.tol = as_double(val);
    else if (key.rfind("param_", 0) == 0)
      c.params[key.substr(6)] = as_double(val);
    else
      throw std::invalid_argument("config: unknown key " + key);
  }
  return c;
}

// ---- realizing a config ----

inline MapSpec parse_map_line(const std::string& line) {
  std::istringstream is(line);
  std::string kind;
  is >> kind;
  std::vector<double> p;
  double v;
  while (is >> v) p.push_back(v);
  auto need = [&](std::size_t n) {
    if (p.size() != n)
      throw std::invalid_argument("custom map " + kind + ": expected " +
                                  std::to_string(n) + " parameters");
  };
  if (kind == "affine1d") { need(2); return make_affine1d(p[0], p[1], "affine1d"); }
  if (kind == "affine2d") {
    need(6);
    return make_affine2d(p[0], p[1], p[2], p[3], p[4], p[5], "affine2d");
  }
  if (kind == "projective2d") {
    need(9);
    std::array<double, 9> rows;
    std::copy(p.begin(), p.end(), rows.begin());
    return make_projective(rows, "projective2d");
  }
  if (kind == "radial_tent") { need(3); return make_radial_tent(p[0], {p[1], p[2]}, "radial_tent"); }
  if (kind == "radial_logistic") {
    need(3);
    return make_radial_logistic(p[0], {p[1], p[2]}, "radial_logistic");
  }
  if (kind == "tent1d") { need(1); return make_tent1d(p[0]); }
  if (kind == "logistic1d") { need(1); return make_logistic1d(p[0]); }
  if (kind == "cubic_flow1d") {
    need(4);
    return make_cubic_flow(p[0], p[1], p[2], p[3], "cubic_flow1d");
  }
  throw std::invalid_argument("custom map: unknown kind " + kind);
}

inline IfsSystem system_from_config(const RunConfig& c) {
  if (c.system != "custom") return make_system(c.system, c.params);
  if (c.custom_maps.empty())
    throw std::invalid_argument("custom system: no maps given");
  IfsSystem sys;
  sys.name = "custom";
  for (const auto& m : c.custom_maps) sys.maps.push_back(parse_map_line(m));
  std::istringstream is(c.custom_domain);
  int dim = 0;
  is >> dim;
  if (dim == 1) {
    double lo, hi;
    if (!(is >> lo >> hi))
      throw std::invalid_argument("custom system: bad domain line");
    sys.domain = box1d(lo, hi);
  } else if (dim == 2) {
    double lox, hix, loy, hiy;
    if (!(is >> lox >> hix >> loy >> hiy))
      throw std::invalid_argument("custom system: bad domain line");
    sys.domain = box2d(lox, loy, hix, hiy);
    std::string mask;
    if (is >> mask && mask == "triangle") {
      sys.masked = true;
      sys.tri = unit_triangle();
    }
  } else {
    throw std::invalid_argument("custom system: bad domain dimension");
  }
  return sys;
}

inline GridSpec grid_from_config(const RunConfig& c, const IfsSystem& sys) {
  if (c.res < 2) throw std::invalid_argument("res must be at least 2");
  if (sys.domain.dim == 1)
    return GridSpec(sys.domain, static_cast<std::uint32_t>(c.res));
  return GridSpec(sys.domain, static_cast<std::uint32_t>(c.res),
                  static_cast<std::uint32_t>(c.res),
                  sys.masked ? MaskKind::triangle : MaskKind::none, sys.tri);
}

// Named supports: the whole (masked) domain, the catalog trapping regions,
// or a grid set loaded from an RLE file.
inline GridSet support_from_config(const RunConfig& c, const IfsSystem& sys,
                                   const GridSpec& g) {
  if (c.support == "domain") return full_set(g);
  if (c.support.rfind("trapping:", 0) == 0) {
    const std::string name = c.support.substr(9);
    if (name == "disc") {
      const Point center{0.5, kSqrt3 / 6.0};
      GridSet s(g);
      for (CellId cell = 0; cell < g.size(); ++cell)
        if (g.masked_in(cell) && dist(g.cell_center(cell), center) <= 0.7)
          s.set(cell);
      return s;
    }
    if (name.rfind("qeps:", 0) == 0) {
      const double eps = std::stod(name.substr(5));
      const Point vs[3] = {vertex_a(), vertex_b(), vertex_c()};
      GridSet s(g);
      for (CellId cell = 0; cell < g.size(); ++cell) {
        if (!g.masked_in(cell)) continue;
        const Point p = g.cell_center(cell);
        bool ok = true;
        for (const Point& v : vs)
          if (dist(p, v) < eps) ok = false;
        if (ok) s.set(cell);
      }
      return s;
    }
    throw std::invalid_argument("unknown trapping region: " + name);
  }
  if (c.support.rfind("file:", 0) == 0) {
    const std::string path = c.support.substr(5);
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open support file " + path);
    GridSpec file_grid;
    GridSet s = read_rle(is, file_grid);
    const bool geometry_matches =
        file_grid.nx == g.nx && file_grid.ny == g.ny &&
        file_grid.dim() == g.dim() &&
        file_grid.domain.lo.x == g.domain.lo.x &&
        file_grid.domain.hi.x == g.domain.hi.x &&
        file_grid.domain.lo.y == g.domain.lo.y &&
        file_grid.domain.hi.y == g.domain.hi.y;
    if (!geometry_matches)
      throw std::invalid_argument("support file grid does not match --res");
    GridSet out(g);
    s.for_each([&](CellId cell) {
      if (g.masked_in(cell)) out.set(cell);
    });
    return out;
  }
  throw std::invalid_argument("unknown support: " + c.support);
}

}  // namespace ifs
