#pragma once

#include <string>

#include "peritl/diagram.hpp"

namespace peritl {

// Renders the diagram on an annulus: nodes equally spaced, arches as curves,
// the seam as a dashed radial line.
std::string render_svg(const AnnularDiagram& d);

}  // namespace peritl
