#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ifs/grid.hpp"
#include "ifs/maps.hpp"
#include "ifs/transition.hpp"

namespace ifs {

struct JacobianScan {
  double max_norm = 0.0;
  CellId argmax_cell = kNoCell;
  std::vector<CellId> near_unit_cells;  // norm >= 1 - 1e-3
  std::vector<CellId> skipped_cells;    // non-smooth locus crossed the cell
};

// Central finite-difference Jacobian at each (masked) cell center with the
// operator norm from the 2x2 singular value. Cells crossing a known
// non-differentiable locus are skipped and reported.
inline JacobianScan jacobian_norm_scan(const MapSpec& m, const GridSpec& g,
                                       double fd_step,
                                       double near_unit_tol = 1e-3) {
  if (m.dim() != 2)
    throw std::invalid_argument("jacobian_norm_scan: needs a 2D map");
  if (!(fd_step > 0.0) || fd_step >= std::min(g.wx(), g.wy()))
    throw std::invalid_argument(
        "jacobian_norm_scan: fd_step must be positive and below cell width");
  JacobianScan out;
  for (CellId c = 0; c < g.size(); ++c) {
    if (!g.masked_in(c)) continue;
    const Point q = g.cell_center(c);
    // widen the smoothness check by the stencil extent
    Box stencil = detail::cell_box(g, c);
    stencil.lo.x -= fd_step;
    stencil.lo.y -= fd_step;
    stencil.hi.x += fd_step;
    stencil.hi.y += fd_step;
    if (!smooth_on(m, stencil)) {
      out.skipped_cells.push_back(c);
      continue;
    }
    const auto J = fd_jacobian(m, q, fd_step);
    const double nrm = spectral_norm_2x2(J[0], J[1], J[2], J[3]);
    if (nrm > out.max_norm) {
      out.max_norm = nrm;
      out.argmax_cell = c;
    }
    if (nrm >= 1.0 - near_unit_tol) out.near_unit_cells.push_back(c);
  }
  return out;
}

}  // namespace ifs
