#include "stepmap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stepmap {

namespace {

constexpr double kRim = 1.0 - 1e-6;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  // Avoid the negative-zero spelling so byte output is stable.
  if (std::string(buf) == "-0.000000") return "0.000000";
  return buf;
}

struct Box {
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  void add(cplx p) {
    lo_x = std::min(lo_x, p.real());
    hi_x = std::max(hi_x, p.real());
    lo_y = std::min(lo_y, p.imag());
    hi_y = std::max(hi_y, p.imag());
  }
};

std::string path_of(const std::vector<cplx>& pts, bool closed) {
  std::ostringstream s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s << (i == 0 ? "M " : "L ") << num(pts[i].real()) << " "
      << num(-pts[i].imag());  // SVG y axis points down
    if (i + 1 < pts.size()) s << " ";
  }
  if (closed) s << " Z";
  return s.str();
}

std::vector<cplx> circle_image(const std::function<cplx(cplx)>& map, double r,
                               int resolution) {
  std::vector<cplx> pts(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i)
    pts[static_cast<std::size_t>(i)] =
        map(std::polar(r, kTwoPi * i / resolution));
  return pts;
}

}  // namespace

RenderWhat render_what_from_name(const std::string& name) {
  if (name == "boundary_image") return RenderWhat::boundary_image;
  if (name == "circle_images") return RenderWhat::circle_images;
  if (name == "polygon_overlay") return RenderWhat::polygon_overlay;
  if (name == "error_heatmap") return RenderWhat::error_heatmap;
  throw Error("unknown render kind: " + name);
}

void render_svg(const std::function<cplx(cplx)>& map, const RenderSpec& spec,
                const std::optional<JordanPolygon>& polygon,
                const std::function<cplx(cplx)>* reference) {
  if (spec.resolution < 64) throw Error("render resolution must be >= 64");
  for (const double r : spec.radii)
    if (!(r > 0.0 && r < 1.0)) throw Error("render radii must lie in (0,1)");

  std::vector<std::string> elements;
  Box box;

  auto add_path = [&](const std::vector<cplx>& pts, const char* color,
                      bool closed) {
    for (const cplx& p : pts) box.add(p);
    elements.push_back("<path d=\"" + path_of(pts, closed) + "\" fill=\"none\" stroke=\"" +
                       color + "\" stroke-width-relative=\"y\"/>");
  };

  switch (spec.what) {
    case RenderWhat::boundary_image: {
      add_path(circle_image(map, kRim, spec.resolution), "#1f4e79", true);
      break;
    }
    case RenderWhat::circle_images: {
      for (const double r : spec.radii)
        add_path(circle_image(map, r, spec.resolution), "#1f4e79", true);
      const double max_r =
          spec.radii.empty()
              ? 0.9
              : *std::max_element(spec.radii.begin(), spec.radii.end());
      for (int k = 0; k < 12; ++k) {
        std::vector<cplx> spoke;
        const int steps = std::max(16, spec.resolution / 8);
        for (int s = 0; s <= steps; ++s)
          spoke.push_back(
              map(std::polar(max_r * s / steps, kTwoPi * k / 12.0)));
        add_path(spoke, "#999999", false);
      }
      break;
    }
    case RenderWhat::polygon_overlay: {
      if (!polygon)
        throw Error("polygon_overlay needs a polygon");
      add_path(polygon->vertices, "#aa3311", true);
      add_path(circle_image(map, kRim, spec.resolution), "#1f4e79", true);
      break;
    }
    case RenderWhat::error_heatmap: {
      if (reference == nullptr)
        throw Error("error_heatmap needs a reference map");
      const int cells = 48;
      const double extent = 0.95;
      double max_err = 0.0;
      std::vector<std::pair<cplx, double>> values;
      for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < cells; ++j) {
          const cplx z(-extent + 2.0 * extent * (i + 0.5) / cells,
                       -extent + 2.0 * extent * (j + 0.5) / cells);
          if (std::abs(z) >= extent) continue;
          const double err = std::abs(map(z) - (*reference)(z));
          values.emplace_back(z, err);
          max_err = std::max(max_err, err);
        }
      }
      const double cell = 2.0 * extent / cells;
      for (const auto& [z, err] : values) {
        const double t = max_err > 0.0 ? err / max_err : 0.0;
        const int shade = static_cast<int>(std::lround(255.0 * (1.0 - t)));
        char color[8];
        std::snprintf(color, sizeof(color), "#ff%02x%02x", shade, shade);
        box.add(z - cplx(cell / 2, cell / 2));
        box.add(z + cplx(cell / 2, cell / 2));
        elements.push_back(
            "<rect x=\"" + num(z.real() - cell / 2) + "\" y=\"" +
            num(-z.imag() - cell / 2) + "\" width=\"" + num(cell) +
            "\" height=\"" + num(cell) + "\" fill=\"" + color + "\"/>");
      }
      break;
    }
  }

  const double width = std::max(box.hi_x - box.lo_x, 1e-9);
  const double height = std::max(box.hi_y - box.lo_y, 1e-9);
  const double margin = 0.05 * std::max(width, height);
  const double stroke = std::max(width, height) / 400.0;

  std::ostringstream doc;
  doc << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  doc << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
      << num(box.lo_x - margin) << " " << num(-box.hi_y - margin) << " "
      << num(width + 2 * margin) << " " << num(height + 2 * margin)
      << "\">\n";
  for (std::string& e : elements) {
    // Patch in the stroke width now that the extent is known.
    const std::string token = "stroke-width-relative=\"y\"";
    const auto pos = e.find(token);
    if (pos != std::string::npos)
      e.replace(pos, token.size(), "stroke-width=\"" + num(stroke) + "\"");
    doc << "  " << e << "\n";
  }
  doc << "</svg>\n";

  std::ofstream out(spec.output_path, std::ios::binary);
  if (!out) throw IOError("cannot write SVG: " + spec.output_path);
  out << doc.str();
  if (!out) throw IOError("failed writing SVG: " + spec.output_path);
}

}  // namespace stepmap
