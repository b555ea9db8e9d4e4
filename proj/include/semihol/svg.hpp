#ifndef SEMIHOL_SVG_HPP
#define SEMIHOL_SVG_HPP

#include <string>

#include "semihol/configuration.hpp"
#include "semihol/fk_observable.hpp"
#include "semihol/geometry.hpp"
#include "semihol/interface.hpp"
#include "semihol/sholo.hpp"

namespace semihol {

// Domain with columns and boundary, optional point configuration, optional
// interface and loops.
std::string render_scene_svg(const SemiDiscreteDomain& dom, const Configuration* cfg,
                             const InterfaceTrace* trace);

// Scalar heatmap of the real part of a field on its measurement grid, with a
// linear colour scale bar.
std::string render_field_svg(const ComplexField& field);

// Heatmap of a real grid function (H fields, residual maps).
std::string render_real_svg(const RealField& f, double delta, const std::string& title);

}  // namespace semihol

#endif
