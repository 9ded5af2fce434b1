#ifndef STEPMAP_SVG_HPP
#define STEPMAP_SVG_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stepmap/boundary.hpp"
#include "stepmap/common.hpp"

namespace stepmap {

enum class RenderWhat {
  boundary_image,
  circle_images,
  polygon_overlay,
  error_heatmap
};

struct RenderSpec {
  RenderWhat what = RenderWhat::boundary_image;
  std::vector<double> radii{0.5, 0.9};
  int resolution = 512;  // >= 64
  std::string output_path;
};

RenderWhat render_what_from_name(const std::string& name);

// Deterministic SVG of the map: circle and radius images, boundary image,
// polygon overlays, or an error heatmap against a reference map. Path
// coordinates are rounded to 6 decimals; the viewBox fits the content with
// a 5% margin.
void render_svg(const std::function<cplx(cplx)>& map, const RenderSpec& spec,
                const std::optional<JordanPolygon>& polygon = std::nullopt,
                const std::function<cplx(cplx)>* reference = nullptr);

}  // namespace stepmap

#endif  // STEPMAP_SVG_HPP
