// expdyn: command-line front end for the exponential-map dynamics toolkit.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "expdyn/json_io.hpp"
#include "expdyn/render.hpp"

using namespace expdyn;

namespace {

struct Global {
  std::string lambda = "1,0";
  unsigned precision = kDefaultPrecisionBits;
  uint64_t exponent_budget = kDefaultMaxExponentBits;
  std::string out;
};

HPComplex parse_complex(const std::string& s, const Global& g) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    return {HPReal::from_decimal(s, g.precision), HPReal(0.0, g.precision),
            g.exponent_budget};
  return {HPReal::from_decimal(s.substr(0, comma), g.precision),
          HPReal::from_decimal(s.substr(comma + 1), g.precision),
          g.exponent_budget};
}

std::vector<HPReal> parse_reals(const std::string& s, unsigned prec) {
  std::vector<HPReal> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(HPReal::from_decimal(s.substr(pos, comma - pos), prec));
    pos = comma + 1;
  }
  return out;
}

ExpMap build_map(const Global& g, const std::string& explicit_k) {
  HPComplex lambda = parse_complex(g.lambda, g);
  if (explicit_k.empty()) return make_map(lambda);
  return make_map(lambda,
                  KPolicy::Explicit(HPReal::from_decimal(explicit_k,
                                                         g.precision)));
}

void emit(const json& j, const Global& g) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(g.out);
    if (!f) throw Error("cannot open output file: " + g.out);
    f << j.dump(2) << "\n";
  }
}

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open input file: " + path);
  json j;
  f >> j;
  return j;
}

Region parse_region(const std::string& spec, unsigned prec) {
  if (spec == "halfplane:upper") return halfplane_region(true);
  if (spec == "halfplane:lower") return halfplane_region(false);
  if (spec.rfind("disk:", 0) == 0) {
    auto nums = parse_reals(spec.substr(5), prec);
    if (nums.size() != 3) throw InvalidArgument("disk needs cx,cy,r");
    return disk_region({nums[0], nums[1], kDefaultMaxExponentBits}, nums[2]);
  }
  if (spec.rfind("polygon:", 0) == 0)
    return polygon_region(curve_from_json(load_json(spec.substr(8))));
  throw InvalidArgument("unknown region spec: " + spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"expdyn: numerics for the exponential family f(z) = lambda e^z"};
  app.require_subcommand(1);

  Global g;
  if (const char* env = std::getenv("EXPDYN_PRECISION"))
    g.precision = static_cast<unsigned>(std::atoi(env));
  app.add_option("--lambda", g.lambda, "lambda as re,im (decimal strings)");
  app.add_option("--precision", g.precision, "working precision in bits");
  app.add_option("--exponent-budget", g.exponent_budget,
                 "max exponent bits before tower tracking");
  app.add_option("--out", g.out, "write JSON/image output here");

  std::string explicit_k;
  app.add_option("--k", explicit_k, "explicit strip cutoff K");

  // strips
  auto* cmd_strips = app.add_subcommand("strips", "strip system for lambda");

  // classify
  auto* cmd_classify = app.add_subcommand("classify", "escape classification");
  std::string opt_z = "11,0";
  int opt_budget = 16;
  cmd_classify->add_option("--z", opt_z, "starting point re,im")->required();
  cmd_classify->add_option("--budget", opt_budget, "orbit step budget");

  // verify-lemelt
  auto* cmd_lemelt = app.add_subcommand("verify-lemelt",
                                        "orbit growth/argument inequalities");
  std::string lem_z = "11,0";
  int lem_n = 1;
  cmd_lemelt->add_option("--z", lem_z, "starting point re,im")->required();
  cmd_lemelt->add_option("--n", lem_n, "iterate count");

  // trace-hair / trace-boundary
  auto* cmd_hair = app.add_subcommand("trace-hair", "sample the hair T_a");
  std::string hair_itin = "0*", hair_anchors = "12,20,50";
  int hair_depth = 10;
  cmd_hair->add_option("--itinerary", hair_itin, "e.g. 0*, 011(01)*");
  cmd_hair->add_option("--depth", hair_depth, "pullback depth");
  cmd_hair->add_option("--anchors", hair_anchors, "anchor real parts");

  auto* cmd_bound = app.add_subcommand("trace-boundary",
                                       "sample the boundary curve W_(k,a)");
  std::string bnd_itin = "0*", bnd_anchors = "12,20,50", bnd_side = "+";
  int bnd_k = 1;
  cmd_bound->add_option("--itinerary", bnd_itin, "itinerary");
  cmd_bound->add_option("--k", bnd_k, "pullback count");
  cmd_bound->add_option("--side", bnd_side, "+ or -");
  cmd_bound->add_option("--anchors", bnd_anchors, "anchor real parts");

  // periodic
  auto* cmd_per = app.add_subcommand("periodic", "repelling periodic point");
  std::string per_cycle = "0";
  cmd_per->add_option("--cycle", per_cycle, "cycle word over {0,1}");

  // iterate-curve
  auto* cmd_iter = app.add_subcommand("iterate-curve", "forward curve image");
  std::string iter_curve, iter_tol = "0";
  int iter_n = 1;
  cmd_iter->add_option("--curve", iter_curve, "curve JSON file")->required();
  cmd_iter->add_option("--n", iter_n, "iterate count");
  cmd_iter->add_option("--tol", iter_tol, "absolute chord tolerance");

  // angle-set
  auto* cmd_angles = app.add_subcommand("angle-set",
                                        "crossing angles with hairs");
  std::string ang_curve;
  std::vector<std::string> ang_hairs;
  int ang_n = 0;
  cmd_angles->add_option("--curve", ang_curve, "curve JSON file")->required();
  cmd_angles->add_option("--n", ang_n, "iterate count");
  cmd_angles->add_option("--hairs", ang_hairs, "hair JSON files")->required();

  // surround
  auto* cmd_surround = app.add_subcommand("surround",
                                          "subarc surround certificate");
  std::string sur_curve, sur_hair, sur_target = "2,0", sur_eps = "0.5";
  int sur_budget = 8;
  cmd_surround->add_option("--curve", sur_curve, "curve JSON")->required();
  cmd_surround->add_option("--hair", sur_hair, "hair JSON")->required();
  cmd_surround->add_option("--target", sur_target, "target re,im");
  cmd_surround->add_option("--eps", sur_eps, "diameter bound");
  cmd_surround->add_option("--budget", sur_budget, "iterate budget");

  // refine
  auto* cmd_refine = app.add_subcommand("refine", "nested dense-orbit chain");
  std::string ref_curve, ref_targets = "2,0,0.5";
  int ref_budget = 8;
  cmd_refine->add_option("--curve", ref_curve, "curve JSON")->required();
  cmd_refine->add_option("--targets", ref_targets,
                         "semicolon-separated re,im,eps triplets");
  cmd_refine->add_option("--budget", ref_budget, "iterate budget");

  // kappa
  auto* cmd_kappa = app.add_subcommand("kappa", "the vertical segment K");

  // covering
  auto* cmd_cover = app.add_subcommand("covering",
                                       "f^N(disk) covering of the kappa segment");
  std::string cov_cycle = "0", cov_radius = "0.5";
  int cov_nmax = 8;
  cmd_cover->add_option("--cycle", cov_cycle, "periodic point cycle");
  cmd_cover->add_option("--radius", cov_radius, "disk radius");
  cmd_cover->add_option("--nmax", cov_nmax, "max iterate");

  // nice-check
  auto* cmd_nice = app.add_subcommand("nice-check", "nice-set boundary check");
  std::string nice_boundary, nice_region = "halfplane:upper";
  int nice_depth = 5;
  cmd_nice->add_option("--boundary", nice_boundary, "boundary curve JSON")
      ->required();
  cmd_nice->add_option("--region", nice_region,
                       "halfplane:upper|lower, disk:cx,cy,r, polygon:file");
  cmd_nice->add_option("--depth", nice_depth, "iterate depth");

  // render
  auto* cmd_render = app.add_subcommand("render", "escape-time PPM image");
  std::string ren_window = "-4,4,-4,4", ren_res = "512x512",
              ren_palette = "gray";
  int ren_iter = 32;
  std::vector<std::string> ren_overlays;
  bool ren_strips = false;
  cmd_render->add_option("--window", ren_window, "re_min,re_max,im_min,im_max");
  cmd_render->add_option("--res", ren_res, "WxH");
  cmd_render->add_option("--max-iter", ren_iter, "iteration cap");
  cmd_render->add_option("--palette", ren_palette, "gray|fire");
  cmd_render->add_option("--overlay", ren_overlays, "curve/hair JSON files");
  cmd_render->add_flag("--overlay-strips", ren_strips, "draw strip bands");

  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExpMap map = build_map(g, explicit_k);

    if (cmd_strips->parsed()) {
      emit(strips_to_json(map), g);
      return 0;
    }
    if (cmd_classify->parsed()) {
      emit(classification_to_json(
               classify(map, parse_complex(opt_z, g), opt_budget)),
           g);
      return 0;
    }
    if (cmd_lemelt->parsed()) {
      LemEltReport rep = verify_lemelt(map, parse_complex(lem_z, g), lem_n);
      emit(lemelt_report_to_json(rep), g);
      return rep.pass() ? 0 : 1;
    }
    if (cmd_hair->parsed()) {
      emit(hair_to_json(trace_hair(map, Itinerary::parse(hair_itin),
                                   hair_depth,
                                   parse_reals(hair_anchors, g.precision))),
           g);
      return 0;
    }
    if (cmd_bound->parsed()) {
      HairSide side = bnd_side == "-" ? HairSide::LowerBoundary
                                      : HairSide::UpperBoundary;
      emit(hair_to_json(trace_boundary(map, Itinerary::parse(bnd_itin), bnd_k,
                                       side,
                                       parse_reals(bnd_anchors, g.precision))),
           g);
      return 0;
    }
    if (cmd_per->parsed()) {
      std::vector<uint8_t> cycle;
      for (char c : per_cycle) {
        if (c != '0' && c != '1') throw InvalidArgument("cycle must be 0/1");
        cycle.push_back(static_cast<uint8_t>(c - '0'));
      }
      emit(periodic_to_json(periodic_point(map, cycle)), g);
      return 0;
    }
    if (cmd_iter->parsed()) {
      SampledCurve c = curve_from_json(load_json(iter_curve));
      IterateOptions opts;
      opts.tol = HPReal::from_decimal(iter_tol, g.precision);
      IterateResult r = iterate_curve(map, c, iter_n, opts);
      json j = curve_to_json(r.curve);
      j["steps_done"] = r.steps_done;
      if (r.budget_stop_step) j["budget_stop_step"] = *r.budget_stop_step;
      emit(j, g);
      return r.steps_done == iter_n ? 0 : 1;
    }
    if (cmd_angles->parsed()) {
      SampledCurve c = curve_from_json(load_json(ang_curve));
      std::vector<HairSample> hairs;
      for (const std::string& path : ang_hairs)
        hairs.push_back(hair_from_json(load_json(path)));
      emit(angle_set_to_json(angle_set(map, c, ang_n, hairs)), g);
      return 0;
    }
    if (cmd_surround->parsed()) {
      SurroundOutcome o = surround_from_curve(
          map, curve_from_json(load_json(sur_curve)),
          hair_from_json(load_json(sur_hair)), parse_complex(sur_target, g),
          HPReal::from_decimal(sur_eps, g.precision), sur_budget);
      emit(surround_to_json(o), g);
      return o.certified() ? 0 : 1;
    }
    if (cmd_refine->parsed()) {
      std::vector<std::pair<HPComplex, HPReal>> targets;
      size_t pos = 0;
      while (pos < ref_targets.size()) {
        size_t semi = ref_targets.find(';', pos);
        if (semi == std::string::npos) semi = ref_targets.size();
        auto nums = parse_reals(ref_targets.substr(pos, semi - pos),
                                g.precision);
        if (nums.size() != 3)
          throw InvalidArgument("targets must be re,im,eps triplets");
        targets.emplace_back(
            HPComplex{nums[0], nums[1], g.exponent_budget}, nums[2]);
        pos = semi + 1;
      }
      RefinementChain chain = refine_dense_orbit(
          map, curve_from_json(load_json(ref_curve)), targets, ref_budget);
      emit(refinement_to_json(chain), g);
      return chain.stopped_at_horizon ? 1 : 0;
    }
    if (cmd_kappa->parsed()) {
      emit(curve_to_json(kappa_segment(map)), g);
      return 0;
    }
    if (cmd_cover->parsed()) {
      std::vector<uint8_t> cycle;
      for (char c : cov_cycle) cycle.push_back(static_cast<uint8_t>(c - '0'));
      PeriodicPoint p = periodic_point(map, cycle);
      emit(covering_to_json(covering_check(
               map, p, HPReal::from_decimal(cov_radius, g.precision),
               cov_nmax)),
           g);
      return 0;
    }
    if (cmd_nice->parsed()) {
      SampledCurve boundary = curve_from_json(load_json(nice_boundary));
      NiceReport rep =
          nice_check(map, boundary, parse_region(nice_region, g.precision),
                     nice_depth,
                     {HPReal(0.0, g.precision), 0.1, size_t(1) << 18});
      emit(nice_to_json(rep), g);
      return rep.nice_up_to_depth() ? 0 : 1;
    }
    if (cmd_render->parsed()) {
      RenderSpec spec;
      auto win = parse_reals(ren_window, 64);
      if (win.size() != 4) throw InvalidArgument("window needs 4 numbers");
      spec.re_min = win[0].to_double();
      spec.re_max = win[1].to_double();
      spec.im_min = win[2].to_double();
      spec.im_max = win[3].to_double();
      auto x = ren_res.find('x');
      if (x == std::string::npos) throw InvalidArgument("res must be WxH");
      spec.width = static_cast<unsigned>(std::stoul(ren_res.substr(0, x)));
      spec.height = static_cast<unsigned>(std::stoul(ren_res.substr(x + 1)));
      spec.max_iter = ren_iter;
      spec.palette = ren_palette;
      spec.overlay_strips = ren_strips;
      for (const std::string& path : ren_overlays) {
        json j = load_json(path);
        if (j.contains("points"))
          spec.overlays.push_back(hair_polyline(hair_from_json(j)));
        else
          spec.overlays.push_back(curve_from_json(j));
      }
      std::string out = g.out.empty() ? "expdyn.ppm" : g.out;
      render_ppm(map, spec, out);
      std::cout << "wrote " << out << "\n";
      return 0;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
