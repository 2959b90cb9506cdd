#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifs/chaingraph.hpp"
#include "ifs/grid.hpp"

namespace ifs {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- PGM (binary P5). Row 0 is the top of the image (max y). ----

inline void write_pgm(std::ostream& os, const GridSet& s,
                      unsigned char on = 255, unsigned char off = 0) {
  const GridSpec& g = s.grid();
  os << "P5\n" << g.nx << " " << g.ny << "\n255\n";
  std::vector<unsigned char> row(g.nx);
  for (std::uint32_t iy = 0; iy < g.ny; ++iy) {
    const std::uint32_t src = g.ny - 1 - iy;
    for (std::uint32_t ix = 0; ix < g.nx; ++ix)
      row[ix] = s.test(src * g.nx + ix) ? on : off;
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
}

// Three-level raster: strong cells 255, weak-only 128, rest 0.
inline void write_recurrent_pgm(std::ostream& os, const GridSet& strong,
                                const GridSet& weak) {
  const GridSpec& g = strong.grid();
  os << "P5\n" << g.nx << " " << g.ny << "\n255\n";
  std::vector<unsigned char> row(g.nx);
  for (std::uint32_t iy = 0; iy < g.ny; ++iy) {
    const std::uint32_t src = g.ny - 1 - iy;
    for (std::uint32_t ix = 0; ix < g.nx; ++ix) {
      const CellId c = src * g.nx + ix;
      row[ix] = strong.test(c) ? 255 : (weak.test(c) ? 128 : 0);
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
}

// ---- run-length text format ----
// header: IFSRLE <dim> <nx> [ny] <lox> <hix> [loy] [hiy]
// then counts of alternating clear/set runs in flat index order,
// starting with a clear run.

inline void write_rle(std::ostream& os, const GridSet& s) {
  const GridSpec& g = s.grid();
  os << "IFSRLE " << g.dim() << " " << g.nx;
  if (g.dim() == 2) os << " " << g.ny;
  os << " " << format_double(g.domain.lo.x) << " "
     << format_double(g.domain.hi.x);
  if (g.dim() == 2)
    os << " " << format_double(g.domain.lo.y) << " "
       << format_double(g.domain.hi.y);
  os << "\n";
  std::uint64_t run = 0;
  bool cur = false;
  bool first = true;
  auto flush = [&]() {
    os << (first ? "" : " ") << run;
    first = false;
  };
  for (CellId c = 0; c < g.size(); ++c) {
    const bool b = s.test(c);
    if (b == cur) {
      ++run;
    } else {
      flush();
      cur = b;
      run = 1;
    }
  }
  flush();
  os << "\n";
}

// Reads an RLE stream; the grid is reconstructed from the header (no mask).
// The caller owns the returned GridSpec's lifetime via the out-parameter.
inline GridSet read_rle(std::istream& is, GridSpec& spec_out) {
  std::string magic;
  int dim = 0;
  if (!(is >> magic >> dim) || magic != "IFSRLE")
    throw std::runtime_error("rle: bad header");
  std::uint32_t nx = 0, ny = 1;
  double lox, hix, loy = 0.0, hiy = 0.0;
  if (dim == 1) {
    if (!(is >> nx >> lox >> hix)) throw std::runtime_error("rle: bad header");
    spec_out = GridSpec(box1d(lox, hix), nx);
  } else if (dim == 2) {
    if (!(is >> nx >> ny >> lox >> hix >> loy >> hiy))
      throw std::runtime_error("rle: bad header");
    spec_out = GridSpec(box2d(lox, loy, hix, hiy), nx, ny);
  } else {
    throw std::runtime_error("rle: bad dimension");
  }
  GridSet s(spec_out);
  CellId c = 0;
  bool cur = false;
  std::uint64_t run;
  while (c < spec_out.size() && is >> run) {
    if (cur)
      for (std::uint64_t i = 0; i < run; ++i) s.set(c++);
    else
      c += static_cast<CellId>(run);
    cur = !cur;
  }
  if (c != spec_out.size()) throw std::runtime_error("rle: truncated runs");
  return s;
}

// ---- DOT export of classified node graphs (condensed view only) ----

inline void write_node_dot(std::ostream& os, const ChainGraph& cg,
                           RecurrenceClass which, const std::string& name) {
  const auto nodes = cg.nodes_of_class(which == RecurrenceClass::strong
                                           ? NodeClass::strong_node
                                           : NodeClass::weak_node);
  const auto edges = node_edges(cg, which);
  os << "digraph " << name << " {\n";
  for (auto k : nodes) {
    GridSet cells = cg.component_cells(k);
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    cells.for_each([&](CellId c) {
      const Point p = cg.grid().cell_center(c);
      x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
    });
    os << "  n" << k << " [label=\"" << node_class_name(cg.node_class(k))
       << " #" << k << "\\ncells=" << cg.component_size(k) << "\\nbox=["
       << format_double(x0) << "," << format_double(x1);
    if (cg.grid().dim() == 2)
      os << "]x[" << format_double(y0) << "," << format_double(y1);
    os << "]\"];\n";
  }
  for (auto [a, b] : edges) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
}

// ---- CSV of the classified node inventory ----

inline void write_nodes_csv(std::ostream& os, const ChainGraph& cg) {
  os << "node,class,cells,min_x,max_x,min_y,max_y\n";
  for (auto k : cg.nodes_of_class(NodeClass::weak_node)) {
    GridSet cells = cg.component_cells(k);
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    cells.for_each([&](CellId c) {
      const Point p = cg.grid().cell_center(c);
      x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
    });
    os << k << "," << node_class_name(cg.node_class(k)) << ","
       << cg.component_size(k) << "," << format_double(x0) << ","
       << format_double(x1) << "," << format_double(y0) << ","
       << format_double(y1) << "\n";
  }
}

// ---- compact binary edge list ----
// u32 magic 'IFSG', u32 maps, u32 cells, then per map: u64 edge count,
// u32 (src,dst) pairs for every stored core edge.

inline void write_graph_binary(std::ostream& os, const TransitionGraph& g) {
  auto put32 = [&](std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
  };
  auto put64 = [&](std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
  };
  put32(0x47534649u);  // "IFSG"
  put32(static_cast<std::uint32_t>(g.map_count()));
  put32(g.grid().size());
  for (std::size_t l = 0; l < g.map_count(); ++l) {
    std::uint64_t count = 0;
    g.support().for_each([&](CellId c) {
      auto [b, e] = g.core_targets(static_cast<int>(l), c);
      count += static_cast<std::uint64_t>(e - b);
    });
    put64(count);
    g.support().for_each([&](CellId c) {
      auto [b, e] = g.core_targets(static_cast<int>(l), c);
      for (const CellId* t = b; t != e; ++t) {
        put32(c);
        put32(*t);
      }
    });
  }
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace ifs
