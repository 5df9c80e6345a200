// curverad command-line driver: evaluates the curve integral n, runs
// ellipse sweeps, invariance checks, the near-intersection study, and
// simplicity diagnostics. Emits JSON on stdout and CSV to --output.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curverad/intersection.hpp"
#include "curverad/json_io.hpp"
#include "curverad/version.hpp"

namespace {

using nlohmann::json;
using namespace curverad;

// 15 significant digits, C locale; the reproducibility contract for CSV.
std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

json load_curve_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw std::invalid_argument("cannot open curve spec: " + arg);
  json j;
  in >> j;
  return j;
}

int resolve_thread_flag(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CURVERAD_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // auto-detect in the quadrature layer
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << body;
}

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

json make_manifest(const std::string& command, const json& curve,
                   const json& config, double wall_s) {
  return json{{"command", command},
              {"curve", curve},
              {"config", config},
              {"version", std::string("curverad ") + kVersion},
              {"wall_time_s", wall_s}};
}

struct QuadFlags {
  int grid = 64;
  int max_grid = 8192;
  double tol = 1e-10;
  int threads = 0;

  QuadratureConfig config() const {
    return {grid, max_grid, tol, resolve_thread_flag(threads)};
  }
  json to_json() const {
    return json{{"initial_grid", grid},
                {"max_grid", max_grid},
                {"rel_tol", tol},
                {"threads", threads}};
  }
};

void add_quad_flags(CLI::App* cmd, QuadFlags& q, bool own_tol = true) {
  cmd->add_option("--grid", q.grid, "initial grid points per axis");
  cmd->add_option("--max-grid", q.max_grid, "grid-doubling cap");
  if (own_tol)
    cmd->add_option("--tol", q.tol, "relative convergence tolerance");
  else
    cmd->add_option("--quad-tol", q.tol, "quadrature convergence tolerance");
  cmd->add_option("--threads", q.threads,
                  "worker cap (CURVERAD_THREADS as fallback, 0 = auto)");
}

int cmd_compute(const std::string& curve_arg, const QuadFlags& quad,
                const std::string& output) {
  const json spec = load_curve_arg(curve_arg);
  const CurveVariant cv = parse_curve_spec(spec);
  WallClock clock;
  const QuadratureResult result =
      std::visit([&](const auto& c) { return integrate_n(c, quad.config()); }, cv);
  const CurveDescriptor desc =
      std::visit([](const auto& c) { return c.descriptor(); }, cv);

  json payload{{"n", result.value},
               {"grid", result.grid},
               {"error_estimate", result.error_estimate},
               {"converged", result.converged}};
  if (const auto cf = closed_form_value(desc)) {
    payload["closed_form"] = *cf;
    payload["deviation"] = std::abs(result.value - *cf) / std::abs(*cf);
  }
  json out = make_manifest("compute", spec, quad.to_json(), clock.seconds());
  out["result"] = payload;
  write_text(output, out.dump(2) + "\n");
  return 0;
}

int cmd_sweep_ellipse(double xi_min, double xi_max, int steps,
                      const QuadFlags& quad, const std::string& output) {
  if (!(xi_min > 0.0) || !(xi_min <= xi_max) || !(xi_max <= 1.0) || steps < 1)
    throw std::invalid_argument(
        "sweep-ellipse: need 0 < xi-min <= xi-max <= 1 and steps >= 1");
  WallClock clock;
  std::ostringstream body;
  body << "xi,n_numeric,n_closed,rel_err\n";
  for (int k = 0; k < steps; ++k) {
    const double xi =
        steps == 1 ? xi_min : xi_min + k * (xi_max - xi_min) / (steps - 1);
    const QuadratureResult r = integrate_n(make_ellipse(1.0, xi), quad.config());
    const double closed = n_ellipse(xi);
    body << fmt15(xi) << ',' << fmt15(r.value) << ',' << fmt15(closed) << ','
         << fmt15(std::abs(r.value - closed) / closed) << '\n';
  }
  json config = quad.to_json();
  config["xi_min"] = xi_min;
  config["xi_max"] = xi_max;
  config["steps"] = steps;
  const json man =
      make_manifest("sweep-ellipse", nullptr, config, clock.seconds());
  write_text(output, "# manifest: " + man.dump() + "\n" + body.str());
  return 0;
}

int cmd_invariance(const std::string& curve_arg, const std::string& transform_arg,
                   double tol, const QuadFlags& quad, const std::string& output) {
  const json spec = load_curve_arg(curve_arg);
  const json op = json::parse(transform_arg);
  const CurveVariant cv = parse_curve_spec(spec);
  WallClock clock;
  const InvarianceReport report = std::visit(
      [&](const auto& c) {
        constexpr std::size_t N = std::decay_t<decltype(c)>::dimension;
        return check_invariance(c, parse_transform_op<N>(op), quad.config(), tol);
      },
      cv);
  json config = quad.to_json();
  config["tolerance"] = tol;
  config["transform"] = op;
  json out = make_manifest("invariance", spec, config, clock.seconds());
  out["result"] = invariance_report_json(report);
  write_text(output, out.dump(2) + "\n");
  return report.pass ? 0 : 1;
}

int cmd_intersection(double phi, double mu_min, double mu_max, int steps,
                     const std::string& output) {
  if (!(mu_min > 0.0) || !(mu_min <= mu_max) || steps < 1)
    throw std::invalid_argument(
        "intersection: need 0 < mu-min <= mu-max and steps >= 1");
  WallClock clock;
  std::vector<double> mus(steps);
  for (int k = 0; k < steps; ++k)
    mus[k] = steps == 1 ? mu_max
                        : std::exp(std::log(mu_max) +
                                   k * (std::log(mu_min) - std::log(mu_max)) /
                                       (steps - 1));

  std::vector<double> values(mus.size());
  for (std::size_t i = 0; i < mus.size(); ++i)
    values[i] = disk_integral(mus[i], phi);
  const AsymptoticFit fit = asymptotic_fit(phi, mus);
  const Asymptote exact = intersection_asymptote(phi);

  const std::string model_name =
      fit.model ? asymptote_kind_name(*fit.model) : "indeterminate";
  const double rel_err =
      exact.coefficient != 0.0
          ? std::abs(fit.coefficient - exact.coefficient) /
                std::abs(exact.coefficient)
          : std::abs(fit.coefficient);

  std::ostringstream body;
  body << "phi,mu,I_numeric,model,coefficient_fit,coefficient_exact,rel_err\n";
  for (std::size_t i = 0; i < mus.size(); ++i) {
    body << fmt15(phi) << ',' << fmt15(mus[i]) << ',' << fmt15(values[i]) << ','
         << model_name << ',' << fmt15(fit.coefficient) << ','
         << fmt15(exact.coefficient) << ',' << fmt15(rel_err) << '\n';
  }
  const json config{{"phi", phi}, {"mu_min", mu_min}, {"mu_max", mu_max},
                    {"steps", steps}};
  const json man =
      make_manifest("intersection", nullptr, config, clock.seconds());

  json summary{{"phi", phi},
               {"model", model_name},
               {"coefficient_fit", fit.coefficient},
               {"coefficient_exact", exact.coefficient},
               {"rel_err", rel_err}};
  const std::string csv = "# manifest: " + man.dump() + "\n" + body.str();
  if (output.empty()) {
    std::cout << csv;
    std::cerr << summary.dump(2) << "\n";
  } else {
    write_text(output, csv);
    std::cout << summary.dump(2) << "\n";
  }
  return 0;
}

int cmd_check_simple(const std::string& curve_arg, int samples,
                     const std::string& output) {
  const json spec = load_curve_arg(curve_arg);
  const CurveVariant cv = parse_curve_spec(spec);
  WallClock clock;
  const double ratio =
      std::visit([&](const auto& c) { return check_simple(c, samples); }, cv);
  json out = make_manifest("check-simple", spec, json{{"samples", samples}},
                           clock.seconds());
  out["result"] = json{{"min_ratio", ratio}, {"samples", samples}};
  write_text(output, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curverad: double integral n over smooth closed curves"};
  app.require_subcommand(1);

  std::string curve_arg, transform_arg, output;
  QuadFlags quad;
  double xi_min = 0.2, xi_max = 1.0, phi = 0.0;
  double mu_min = 1e-4, mu_max = 1e-1, inv_tol = 1e-8;
  int steps = 9, samples = 4096;

  auto* compute = app.add_subcommand("compute", "evaluate n for a curve spec");
  compute->add_option("--curve", curve_arg, "curve spec (inline JSON or path)")
      ->required();
  add_quad_flags(compute, quad);
  compute->add_option("--output", output, "write JSON here instead of stdout");

  auto* sweep = app.add_subcommand("sweep-ellipse",
                                   "n over an aspect-ratio range, CSV");
  sweep->add_option("--xi-min", xi_min, "smallest b/a ratio")->required();
  sweep->add_option("--xi-max", xi_max, "largest b/a ratio")->required();
  sweep->add_option("--steps", steps, "number of ratios")->required();
  add_quad_flags(sweep, quad);
  sweep->add_option("--output", output, "CSV path (default stdout)");

  auto* invariance =
      app.add_subcommand("invariance", "compare n before/after a transform");
  invariance->add_option("--curve", curve_arg, "curve spec (inline JSON or path)")
      ->required();
  invariance
      ->add_option("--transform", transform_arg,
                   "transform op JSON, e.g. {\"invert\":{\"center\":[0,0]}}")
      ->required();
  invariance->add_option("--tol", inv_tol, "pass tolerance on |dn|/|n|");
  add_quad_flags(invariance, quad, /*own_tol=*/false);
  invariance->add_option("--output", output, "write JSON here instead of stdout");

  auto* intersection = app.add_subcommand(
      "intersection", "near-intersection sweep I(mu, phi) with asymptotic fit");
  intersection->add_option("--phi", phi, "tangent angle in radians")->required();
  intersection->add_option("--mu-min", mu_min, "smallest gap ratio")->required();
  intersection->add_option("--mu-max", mu_max, "largest gap ratio")->required();
  intersection->add_option("--steps", steps, "points, log-spaced")->required();
  intersection->add_option("--output", output, "CSV path (default stdout)");

  auto* simple =
      app.add_subcommand("check-simple", "sampled simplicity evidence");
  simple->add_option("--curve", curve_arg, "curve spec (inline JSON or path)")
      ->required();
  simple->add_option("--samples", samples, "grid samples (>= 16)");
  simple->add_option("--output", output, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*compute) return cmd_compute(curve_arg, quad, output);
    if (*sweep) return cmd_sweep_ellipse(xi_min, xi_max, steps, quad, output);
    if (*invariance)
      return cmd_invariance(curve_arg, transform_arg, inv_tol, quad, output);
    if (*intersection)
      return cmd_intersection(phi, mu_min, mu_max, steps, output);
    if (*simple) return cmd_check_simple(curve_arg, samples, output);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
