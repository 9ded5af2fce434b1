#include "stepmap/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stepmap/boundary.hpp"
#include "stepmap/harmonic.hpp"
#include "stepmap/pipeline.hpp"
#include "stepmap/poles.hpp"
#include "stepmap/svg.hpp"
#include "stepmap/univalence.hpp"

namespace stepmap {

namespace {

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("expected re,im, got: " + text);
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

StepFunction load_map_spec(const std::string& source) {
  for (const auto& [name, sf] : catalog_step_functions())
    if (name == source) return sf;
  return read_step_function(source);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const double v : parse_double_list(text))
    out.push_back(static_cast<int>(std::lround(v)));
  return out;
}

int cmd_eval(const std::string& map_path, const std::vector<std::string>& zs,
             double circle, int samples, const std::string& out_path) {
  const StepFunction sf = load_map_spec(map_path);
  std::vector<cplx> points;
  for (const std::string& z : zs) points.push_back(parse_complex(z));
  if (circle > 0.0) {
    for (int s = 0; s < samples; ++s)
      points.push_back(std::polar(circle, kTwoPi * s / samples));
  }
  if (points.empty())
    throw CLI::ValidationError("eval needs --z or --circle");

  std::ostringstream csv;
  csv << "re_z,im_z,re_f,im_f\n";
  for (const cplx& z : points) {
    const cplx w = eval_poisson_extension(sf, z);
    csv << format_double(z.real()) << "," << format_double(z.imag()) << ","
        << format_double(w.real()) << "," << format_double(w.imag()) << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IOError("cannot write: " + out_path);
    out << csv.str();
  }
  return 0;
}

int cmd_coeffs(const std::string& map_path, int kmax,
               const std::string& out_path) {
  const StepFunction sf = load_map_spec(map_path);
  const auto coeffs = fourier_coefficients(sf, -kmax, kmax);
  if (out_path.empty()) {
    std::cout << "k,re,im\n";
    for (const auto& [k, c] : coeffs)
      std::cout << k << "," << format_double(c.real()) << ","
                << format_double(c.imag()) << "\n";
  } else {
    write_coefficients_csv(coeffs, out_path);
  }
  return 0;
}

int cmd_certify(const std::string& map_path, const std::string& out_path) {
  const StepFunction sf = load_map_spec(map_path);
  const HarmonicStepMap map = decompose(sf);
  const CertifyConfig config;
  const UnivalenceCertificate cert = certify(map, config);
  const std::string json = certificate_to_json(cert, config);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IOError("cannot write: " + out_path);
    out << json;
  }
  std::cout << "verdict: " << verdict_name(cert.verdict) << "\n";
  switch (cert.verdict) {
    case Verdict::univalent:
      return 0;
    case Verdict::inconclusive:
      return 1;
    case Verdict::not_univalent:
      return 2;
  }
  return 1;
}

int cmd_approx(const PipelineConfig& config, const std::string& out_path,
               const std::string& svg_prefix) {
  const PipelineReport report = run_pipeline(config);
  const std::string json = pipeline_report_to_json(report);
  if (out_path.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IOError("cannot write: " + out_path);
    out << json;
  }
  if (!svg_prefix.empty()) {
    for (const PipelineRun& run : report.runs) {
      if (run.polygon.vertices.empty()) continue;
      RenderSpec spec;
      spec.what = RenderWhat::polygon_overlay;
      spec.resolution = 512;
      spec.output_path = svg_prefix + "n" + std::to_string(run.n) + ".svg";
      const StepFunction fitted = run.fitted;
      render_svg([fitted](cplx z) { return eval_poisson_extension(fitted, z); },
                 spec, run.polygon);
    }
  }
  bool all_accepted = true;
  for (const PipelineRun& run : report.runs)
    if (!run.accepted) all_accepted = false;
  if (!all_accepted) {
    std::cerr << "approx: some iterates were not accepted\n";
    return 2;
  }
  return 0;
}

int cmd_poles(const std::string& family_path, const std::string& merge,
              const std::string& deltas, const std::string& out_path,
              const std::string& csv_path) {
  const StepFunction base = load_map_spec(family_path);
  const std::vector<int> pair = parse_int_list(merge);
  if (pair.size() != 2)
    throw CLI::ValidationError("--merge expects i,j");
  const std::vector<double> schedule = parse_double_list(deltas);
  const CoalescingFamily family = coalescing_family(
      base,
      {static_cast<std::size_t>(pair[0]), static_cast<std::size_t>(pair[1])},
      schedule);

  nlohmann::ordered_json doc =
      nlohmann::ordered_json::parse(coalescing_family_to_json(family));
  doc["config"] = {{"family", family_path},
                   {"merge", merge},
                   {"deltas", schedule}};
  const std::string json = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IOError("cannot write: " + out_path);
    out << json;
  }
  if (!csv_path.empty()) write_order_csv(family, csv_path);
  return family.truncated ? 2 : 0;
}

int cmd_render(const std::string& map_path, const std::string& what,
               const std::string& radii, int resolution,
               const std::string& out_path, const std::string& reference) {
  const StepFunction sf = load_map_spec(map_path);
  RenderSpec spec;
  spec.what = render_what_from_name(what);
  spec.radii = parse_double_list(radii);
  spec.resolution = resolution;
  spec.output_path = out_path;

  auto map = [sf](cplx z) { return eval_poisson_extension(sf, z); };
  std::optional<JordanPolygon> polygon;
  if (spec.what == RenderWhat::polygon_overlay)
    polygon = polygon_from_step(sf);
  if (spec.what == RenderWhat::error_heatmap) {
    if (reference.empty())
      throw CLI::ValidationError("error_heatmap needs --reference");
    const StepFunction ref_sf = load_map_spec(reference);
    const std::function<cplx(cplx)> ref = [ref_sf](cplx z) {
      return eval_poisson_extension(ref_sf, z);
    };
    render_svg(map, spec, polygon, &ref);
  } else {
    render_svg(map, spec, polygon);
  }
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"Poisson integrals of step functions: evaluation, "
               "certification, approximation and pole probes"};
  app.require_subcommand(1);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a step map");
  std::string eval_map, eval_out;
  std::vector<std::string> eval_zs;
  double eval_circle = 0.0;
  int eval_samples = 256;
  eval_cmd->add_option("--map", eval_map, "map-spec JSON or catalog name")
      ->required();
  eval_cmd->add_option("--z", eval_zs, "evaluation point re,im (repeatable)");
  eval_cmd->add_option("--circle", eval_circle, "sample a circle of this radius");
  eval_cmd->add_option("--samples", eval_samples, "circle sample count");
  eval_cmd->add_option("--out", eval_out, "CSV output path (default stdout)");

  // coeffs
  auto* coeffs_cmd = app.add_subcommand("coeffs", "Fourier coefficients");
  std::string coeffs_map, coeffs_out;
  int coeffs_kmax = 64;
  coeffs_cmd->add_option("--map", coeffs_map, "map-spec JSON or catalog name")
      ->required();
  coeffs_cmd->add_option("--kmax", coeffs_kmax, "coefficient range |k| <= kmax");
  coeffs_cmd->add_option("--out", coeffs_out, "CSV output path (default stdout)");

  // certify
  auto* certify_cmd = app.add_subcommand("certify", "univalence certificate");
  std::string certify_map, certify_out;
  certify_cmd->add_option("--map", certify_map, "map-spec JSON or catalog name")
      ->required();
  certify_cmd->add_option("--out", certify_out, "certificate JSON path");

  // approx
  auto* approx_cmd = app.add_subcommand("approx", "step-map approximation run");
  PipelineConfig config;
  std::string approx_n = "8,16,32,64";
  std::string approx_out, approx_svg;
  approx_cmd->add_option("--target", config.target,
                         "koebe_harmonic | analytic_koebe | polygon_identity");
  approx_cmd->add_option("--t", config.t, "dilation parameter in (0,1)");
  approx_cmd->add_option("--n", approx_n, "comma-separated step counts");
  approx_cmd->add_option("--rho", config.rho, "dilatation dilation in (0,1)");
  approx_cmd->add_option("--degree", config.blaschke_degree,
                         "Blaschke truncation degree");
  approx_cmd->add_option("--budget", config.budget, "optimizer evaluation cap");
  approx_cmd->add_option("--seed", config.seed, "recorded seed");
  approx_cmd->add_option("--out", approx_out, "report JSON path");
  approx_cmd->add_option("--svg", approx_svg, "SVG overlay path prefix");
  approx_cmd->add_flag("--timing", config.include_timing,
                       "include wall-clock timings in the report");

  // poles
  auto* poles_cmd = app.add_subcommand("poles", "coalescing-family probe");
  std::string poles_family = "ngon6", poles_merge = "0,1";
  std::string poles_deltas = "0.2,0.1,0.05,0.025";
  std::string poles_out, poles_csv;
  poles_cmd->add_option("--family", poles_family,
                        "map-spec JSON or catalog name");
  poles_cmd->add_option("--merge", poles_merge, "adjacent jump indices i,j");
  poles_cmd->add_option("--deltas", poles_deltas, "gap schedule");
  poles_cmd->add_option("--out", poles_out, "report JSON path");
  poles_cmd->add_option("--csv", poles_csv, "order-versus-delta CSV path");

  // render
  auto* render_cmd = app.add_subcommand("render", "SVG rendering");
  std::string render_map, render_what = "circle_images";
  std::string render_radii = "0.5,0.9", render_out, render_reference;
  int render_resolution = 512;
  render_cmd->add_option("--map", render_map, "map-spec JSON or catalog name")
      ->required();
  render_cmd->add_option("--what", render_what,
                         "boundary_image | circle_images | polygon_overlay | "
                         "error_heatmap");
  render_cmd->add_option("--radii", render_radii, "circle radii");
  render_cmd->add_option("--resolution", render_resolution, "samples per path");
  render_cmd->add_option("--out", render_out, "SVG output path")->required();
  render_cmd->add_option("--reference", render_reference,
                         "reference map for error_heatmap");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (eval_cmd->parsed())
      return cmd_eval(eval_map, eval_zs, eval_circle, eval_samples, eval_out);
    if (coeffs_cmd->parsed())
      return cmd_coeffs(coeffs_map, coeffs_kmax, coeffs_out);
    if (certify_cmd->parsed()) return cmd_certify(certify_map, certify_out);
    if (approx_cmd->parsed()) {
      config.n_schedule = parse_int_list(approx_n);
      return cmd_approx(config, approx_out, approx_svg);
    }
    if (poles_cmd->parsed())
      return cmd_poles(poles_family, poles_merge, poles_deltas, poles_out,
                       poles_csv);
    if (render_cmd->parsed())
      return cmd_render(render_map, render_what, render_radii,
                        render_resolution, render_out, render_reference);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IOError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace stepmap
