#include "expdyn/render.hpp"

#include <cmath>
#include <complex>
#include <fstream>

namespace expdyn {

int escape_steps(const ExpMap& map, double re, double im, int max_iter) {
  std::complex<double> lambda(map.lambda().re().to_double(),
                              map.lambda().im().to_double());
  std::complex<double> z(re, im);
  for (int n = 0; n < max_iter; ++n) {
    if (std::abs(z) > kEscapeRadius) return n;
    z = lambda * std::exp(z);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return n + 1;
  }
  return -1;
}

namespace {

struct RGB {
  unsigned char r, g, b;
};

RGB shade(const std::string& palette, int steps, int max_iter) {
  if (steps < 0) return {0, 0, 0};
  double u = max_iter > 0 ? static_cast<double>(steps) / max_iter : 0.0;
  if (palette == "fire") {
    double r = std::min(1.0, 3.0 * u);
    double g = std::min(1.0, std::max(0.0, 3.0 * u - 1.0));
    double b = std::min(1.0, std::max(0.0, 3.0 * u - 2.0));
    return {static_cast<unsigned char>(255 * r),
            static_cast<unsigned char>(255 * g),
            static_cast<unsigned char>(255 * b)};
  }
  unsigned char v = static_cast<unsigned char>(255 * (1.0 - u));
  return {v, v, v};
}

struct Canvas {
  unsigned w, h;
  std::vector<RGB> px;
  void set(long x, long y, RGB c) {
    if (x < 0 || y < 0 || x >= static_cast<long>(w) ||
        y >= static_cast<long>(h))
      return;
    px[static_cast<size_t>(y) * w + static_cast<size_t>(x)] = c;
  }
};

void draw_polyline(Canvas& cv, const RenderSpec& spec,
                   const std::vector<std::pair<double, double>>& pts, RGB c) {
  auto to_px = [&](double re, double im, double& x, double& y) {
    x = (re - spec.re_min) / (spec.re_max - spec.re_min) * spec.width;
    y = (spec.im_max - im) / (spec.im_max - spec.im_min) * spec.height;
  };
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double x0, y0, x1, y1;
    to_px(pts[i].first, pts[i].second, x0, y0);
    to_px(pts[i + 1].first, pts[i + 1].second, x1, y1);
    if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(x1) ||
        !std::isfinite(y1))
      continue;
    double steps = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
    long n = std::max(1L, static_cast<long>(steps));
    for (long s = 0; s <= n; ++s) {
      double u = static_cast<double>(s) / n;
      cv.set(static_cast<long>(x0 + u * (x1 - x0)),
             static_cast<long>(y0 + u * (y1 - y0)), c);
    }
  }
}

}  // namespace

void render_ppm(const ExpMap& map, const RenderSpec& spec,
                const std::string& path) {
  if (spec.width < 1 || spec.height < 1)
    throw InvalidArgument("resolution must be >= 1x1");
  if (!(spec.re_max > spec.re_min) || !(spec.im_max > spec.im_min))
    throw InvalidArgument("window must be nondegenerate");

  Canvas cv{spec.width, spec.height, {}};
  cv.px.resize(static_cast<size_t>(spec.width) * spec.height);
  for (unsigned y = 0; y < spec.height; ++y) {
    double im =
        spec.im_max - (y + 0.5) / spec.height * (spec.im_max - spec.im_min);
    for (unsigned x = 0; x < spec.width; ++x) {
      double re =
          spec.re_min + (x + 0.5) / spec.width * (spec.re_max - spec.re_min);
      cv.px[static_cast<size_t>(y) * spec.width + x] =
          shade(spec.palette, escape_steps(map, re, im, spec.max_iter),
                spec.max_iter);
    }
  }

  if (spec.overlay_strips) {
    for (const Strip& s : map.strips().hats) {
      for (const HPReal* edge : {&s.im_low, &s.im_high}) {
        std::vector<std::pair<double, double>> line{
            {spec.re_min, edge->to_double()}, {spec.re_max, edge->to_double()}};
        draw_polyline(cv, spec, line, {255, 64, 64});
      }
    }
  }
  for (const SampledCurve& c : spec.overlays) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(c.samples.size());
    for (const CurveSample& s : c.samples)
      pts.emplace_back(s.z.re().to_double(), s.z.im().to_double());
    draw_polyline(cv, spec, pts, {64, 160, 255});
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << "P6\n" << spec.width << ' ' << spec.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(cv.px.data()),
            static_cast<std::streamsize>(cv.px.size() * 3));
}

}  // namespace expdyn
