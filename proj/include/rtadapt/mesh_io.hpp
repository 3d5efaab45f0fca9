#pragma once

#include "rtadapt/mesh.hpp"

#include <iosfwd>
#include <span>

namespace rtadapt {

/// Plain-text dump: a header `NV NE NT`, then `id x y` per vertex,
/// `id v0 v1 flag` per edge and `id v0 v1 v2 e0 e1 e2 ancestor` per element.
void write_mesh(std::ostream& out, const Triangulation& mesh);

/// Reads a dump written by write_mesh. Throws MeshError on malformed input or
/// when the stored edges disagree with the rebuilt ones.
Triangulation read_mesh(std::istream& in);

struct SvgOptions {
  double width_px = 800.0;
  /// Heat shading on a log scale spanning this many decades below the maximum.
  double decades = 4.0;
};

/// SVG of the triangulation. With a non-empty indicator (one value per
/// element) elements are shaded by it.
void write_svg(std::ostream& out, const Triangulation& mesh, std::span<const double> indicator = {},
               const SvgOptions& options = {});

}  // namespace rtadapt
