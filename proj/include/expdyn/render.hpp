#pragma once

#include <string>
#include <vector>

#include "expdyn/curve.hpp"

namespace expdyn {

// Raster escape-time rendering with polyline overlays. Illustrative only:
// pixel orbits run in double precision with escape radius 100.
struct RenderSpec {
  double re_min = -4.0, re_max = 4.0;
  double im_min = -4.0, im_max = 4.0;
  unsigned width = 512, height = 512;
  int max_iter = 32;
  std::string palette = "gray";  // "gray" or "fire"
  std::vector<SampledCurve> overlays;
  bool overlay_strips = false;
};

inline constexpr double kEscapeRadius = 100.0;

// Per-pixel escape step; -1 when the orbit survives max_iter steps.
int escape_steps(const ExpMap& map, double re, double im, int max_iter);

// Deterministic binary PPM (P6) output.
void render_ppm(const ExpMap& map, const RenderSpec& spec,
                const std::string& path);

}  // namespace expdyn
