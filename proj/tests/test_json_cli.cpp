#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "curverad/json_io.hpp"
#include "curverad/quadrature.hpp"

using namespace curverad;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = std::string(CURVERAD_CLI_PATH) + " " + args + " 2>/dev/null";
  if (!env.empty()) cmd = "env " + env + " " + cmd;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::vector<std::string> csv_body(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

std::vector<std::string> split_csv(const std::string& row) {
  std::vector<std::string> cells;
  std::istringstream in(row);
  std::string cell;
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST_CASE("curve specs parse into working curves", "[json]") {
  const auto circle = parse_curve_spec(json::parse(R"({"kind":"circle","r":2.0})"));
  REQUIRE(std::holds_alternative<Curve<2>>(circle));
  CHECK(std::get<Curve<2>>(circle).jet(0.0).x[0] == 2.0);
  CHECK(std::get<Curve<2>>(circle).kind() == CurveKind::Circle);

  const auto ell =
      parse_curve_spec(json::parse(R"({"kind":"ellipse","a":2.0,"b":1.0})"));
  CHECK(std::get<Curve<2>>(ell).jet(0.0).x[0] == 2.0);

  const auto fourier = parse_curve_spec(json::parse(
      R"({"kind":"fourier","cos":[[0,1],[0,0]],"sin":[[0,0],[0,1]]})"));
  const auto& fc = std::get<Curve<2>>(fourier);
  CHECK(fc.kind() == CurveKind::Fourier);
  CHECK_THAT(fc.jet(0.4).x[0], Catch::Matchers::WithinAbs(std::cos(0.4), 1e-15));
  CHECK_THAT(fc.jet(0.4).x[1], Catch::Matchers::WithinAbs(std::sin(0.4), 1e-15));

  const auto curve3 = parse_curve_spec(json::parse(
      R"({"kind":"fourier","cos":[[0,1],[0,0],[0.5]],"sin":[[0,0],[0,1],[0,0,0.2]]})"));
  REQUIRE(std::holds_alternative<Curve<3>>(curve3));
  CHECK_THAT(std::get<Curve<3>>(curve3).jet(0.0).x[2],
             Catch::Matchers::WithinAbs(0.5, 1e-15));
}

TEST_CASE("transformed specs apply ops in order", "[json]") {
  const auto spec = json::parse(R"({
    "kind":"transformed",
    "base":{"kind":"circle","r":1.0},
    "ops":[{"scale":2.0},{"translate":[1.0,0.0]}]
  })");
  const auto& c = std::get<Curve<2>>(parse_curve_spec(spec));
  CHECK_THAT(c.jet(0.0).x[0], Catch::Matchers::WithinAbs(3.0, 1e-15));

  const auto swapped = json::parse(R"({
    "kind":"transformed",
    "base":{"kind":"circle","r":1.0},
    "ops":[{"translate":[1.0,0.0]},{"scale":2.0}]
  })");
  const auto& d = std::get<Curve<2>>(parse_curve_spec(swapped));
  CHECK_THAT(d.jet(0.0).x[0], Catch::Matchers::WithinAbs(4.0, 1e-15));

  const auto rotated = json::parse(R"({
    "kind":"transformed",
    "base":{"kind":"ellipse","a":2.0,"b":1.0},
    "ops":[{"rotate":1.5707963267948966}]
  })");
  const auto& r = std::get<Curve<2>>(parse_curve_spec(rotated));
  CHECK_THAT(r.jet(0.0).x[1], Catch::Matchers::WithinAbs(2.0, 1e-12));
  CHECK(r.kind() == CurveKind::Transformed);

  const auto inverted = json::parse(R"({
    "kind":"transformed",
    "base":{"kind":"ellipse","a":2.0,"b":1.0},
    "ops":[{"invert":{"center":[0.0,0.0]}},{"reparam":{"amplitude":0.3}}]
  })");
  CHECK_THAT(std::get<Curve<2>>(parse_curve_spec(inverted)).jet(0.0).x[0],
             Catch::Matchers::WithinAbs(0.5, 1e-14));
}

TEST_CASE("curve spec errors", "[json]") {
  CHECK_THROWS_AS(parse_curve_spec(json::parse(R"({"kind":"square","side":1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_curve_spec(json::parse(R"({"r":1.0})")),
                  std::invalid_argument);
  CHECK_THROWS(parse_curve_spec(json::parse(R"({"kind":"ellipse","a":2.0})")));
  CHECK_THROWS_AS(
      parse_curve_spec(json::parse(R"({"kind":"fourier","cos":[[1,1]]})")),
      std::invalid_argument);
}

TEST_CASE("transform op parsing", "[json]") {
  const auto rot = parse_transform_op<2>(json::parse(R"({"rotate":0.5})"));
  CHECK(transform_name(rot) == "rotate");
  CHECK_THROWS_AS(parse_transform_op<3>(json::parse(R"({"rotate":0.5})")),
                  std::invalid_argument);
  const auto mrot = parse_transform_op<2>(
      json::parse(R"({"rotate":[[0.0,-1.0],[1.0,0.0]]})"));
  CHECK(transform_name(mrot) == "rotate");
  CHECK(transform_name(parse_transform_op<2>(
            json::parse(R"({"invert":{"center":[0,0]}})"))) == "invert");
  CHECK(transform_name(parse_transform_op<2>(json::parse(R"({"scale":7})"))) ==
        "scale");
  CHECK_THROWS_AS(parse_transform_op<2>(json::parse(R"({"shear":0.5})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_transform_op<2>(json::parse(R"({"scale":1,"rotate":2})")),
                  std::invalid_argument);
}

TEST_CASE("closed forms attach to descriptors", "[json]") {
  CHECK_THAT(*closed_form_value({CurveKind::Circle, 1.0, 1.0}),
             Catch::Matchers::WithinRel(n_circle(), 1e-15));
  CHECK_THAT(*closed_form_value({CurveKind::Ellipse, 2.0, 1.0}),
             Catch::Matchers::WithinRel(n_ellipse(0.5), 1e-15));
  CHECK_FALSE(closed_form_value({CurveKind::Fourier}).has_value());
  CHECK_FALSE(closed_form_value({CurveKind::Transformed}).has_value());
}

TEST_CASE("invariance report serialization", "[json]") {
  InvarianceReport rep{"invert", 1.0, 1.0 + 1e-9, 1e-9, 1e-9, true};
  const json j = invariance_report_json(rep);
  CHECK(j.at("transform") == "invert");
  CHECK(j.at("pass") == true);
  CHECK(j.at("rel_dev").get<double>() == 1e-9);
}

TEST_CASE("cli compute on the circle and ellipse", "[cli]") {
  const auto res = run_cli(R"(compute --curve '{"kind":"circle","r":1}')");
  REQUIRE(res.exit_code == 0);
  const json out = json::parse(res.out);
  CHECK(out.at("command") == "compute");
  CHECK(out.at("version").get<std::string>().find("curverad") == 0);
  const auto& payload = out.at("result");
  CHECK_THAT(payload.at("n").get<double>(),
             Catch::Matchers::WithinRel(19.7392088022, 1e-9));
  CHECK(payload.at("converged") == true);
  CHECK_THAT(payload.at("closed_form").get<double>(),
             Catch::Matchers::WithinRel(n_circle(), 1e-12));
  CHECK(payload.at("deviation").get<double>() <= 1e-12);

  const auto ell =
      run_cli(R"(compute --curve '{"kind":"ellipse","a":2,"b":1}')");
  REQUIRE(ell.exit_code == 0);
  CHECK_THAT(json::parse(ell.out).at("result").at("n").get<double>(),
             Catch::Matchers::WithinRel(24.6740110027, 1e-9));
}

TEST_CASE("cli exit codes distinguish parse and domain failures", "[cli]") {
  const auto bad = run_cli(R"(compute --curve '{"kind":"circle",)");
  CHECK(bad.exit_code == 2);
  CHECK(bad.out.empty());

  const auto unknown = run_cli(R"(compute --curve '{"kind":"square"}')");
  CHECK(unknown.exit_code == 2);

  // self-intersecting figure-eight: domain violation, not a parse error
  const auto eight = run_cli(
      R"(compute --curve '{"kind":"fourier","cos":[[],[]],"sin":[[0,0,1],[0,1]]}')");
  CHECK(eight.exit_code == 3);

  const auto usage = run_cli("compute --no-such-flag");
  CHECK(usage.exit_code == 2);

  const auto missing = run_cli("compute --curve /no/such/file.json");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("cli sweep-ellipse emits a deterministic decreasing sweep", "[cli]") {
  const std::string args =
      "sweep-ellipse --xi-min 0.2 --xi-max 1.0 --steps 9 --tol 1e-10";
  const auto first = run_cli(args);
  REQUIRE(first.exit_code == 0);
  const auto rows = csv_body(first.out);
  REQUIRE(rows.size() == 10);  // header + 9 data rows
  CHECK(rows[0] == "xi,n_numeric,n_closed,rel_err");
  double prev_n = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split_csv(rows[i]);
    REQUIRE(cells.size() == 4);
    const double n_num = std::stod(cells[1]);
    const double rel = std::stod(cells[3]);
    CHECK(n_num < prev_n);
    CHECK(rel <= 1e-8);
    prev_n = n_num;
  }
  // last row is the circle
  CHECK_THAT(std::stod(split_csv(rows.back())[2]),
             Catch::Matchers::WithinRel(n_circle(), 1e-12));

  const auto second = run_cli(args);
  CHECK(csv_body(second.out) == rows);

  CHECK(run_cli("sweep-ellipse --xi-min 0 --xi-max 1 --steps 3").exit_code == 2);
  CHECK(run_cli("sweep-ellipse --xi-min 0.5 --xi-max 1.5 --steps 3").exit_code ==
        2);
}

TEST_CASE("cli invariance pass, fail tolerance and domain error", "[cli]") {
  const auto pass = run_cli(
      R"(invariance --curve '{"kind":"ellipse","a":2,"b":1}' )"
      R"(--transform '{"invert":{"center":[0,0]}}' --tol 1e-6)");
  REQUIRE(pass.exit_code == 0);
  const json rep = json::parse(pass.out).at("result");
  CHECK(rep.at("pass") == true);
  CHECK(rep.at("transform") == "invert");
  CHECK(rep.at("rel_dev").get<double>() <= 1e-6);

  const auto rot = run_cli(
      R"(invariance --curve '{"kind":"circle","r":1}' )"
      R"(--transform '{"rotate":0.7}')");
  CHECK(rot.exit_code == 0);

  // circle through the origin: inversion is a domain violation
  const auto degenerate = run_cli(
      R"(invariance --curve '{"kind":"transformed","base":{"kind":"circle","r":1},)"
      R"("ops":[{"translate":[1.0,0.0]}]}' --transform '{"invert":{"center":[0,0]}}')");
  CHECK(degenerate.exit_code == 3);
}

TEST_CASE("cli intersection sweep and fit summary", "[cli]") {
  const std::string csv_path = "/tmp/curverad_test_intersection.csv";
  std::remove(csv_path.c_str());
  const auto res = run_cli(
      "intersection --phi 3.14159265358979 --mu-min 1e-4 --mu-max 1e-1 "
      "--steps 9 --output " +
      csv_path);
  REQUIRE(res.exit_code == 0);
  const json summary = json::parse(res.out);
  CHECK(summary.at("model") == "pole");
  CHECK(summary.at("rel_err").get<double>() <= 0.02);
  CHECK_THAT(summary.at("coefficient_exact").get<double>(),
             Catch::Matchers::WithinRel(-pi / std::sqrt(2.0), 1e-6));

  std::ifstream in(csv_path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto rows = csv_body(buffer.str());
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] ==
        "phi,mu,I_numeric,model,coefficient_fit,coefficient_exact,rel_err");

  // orthogonal tangents: the I column is identically zero
  const auto zero = run_cli(
      "intersection --phi 1.5707963267948966 --mu-min 1e-3 --mu-max 1e-1 "
      "--steps 5");
  REQUIRE(zero.exit_code == 0);
  for (const auto& row : csv_body(zero.out)) {
    if (row.rfind("phi,", 0) == 0) continue;
    CHECK(std::abs(std::stod(split_csv(row)[2])) <= 1e-12);
  }

  CHECK(run_cli("intersection --phi 1 --mu-min 0 --mu-max 1 --steps 3")
            .exit_code == 2);
}

TEST_CASE("cli check-simple reports the chord ratio", "[cli]") {
  const auto res =
      run_cli(R"(check-simple --curve '{"kind":"circle","r":1}' --samples 512)");
  REQUIRE(res.exit_code == 0);
  const json out = json::parse(res.out);
  CHECK_THAT(out.at("result").at("min_ratio").get<double>(),
             Catch::Matchers::WithinRel(2.0 / pi, 1e-6));
  CHECK(out.at("result").at("samples") == 512);
}

TEST_CASE("cli reads curve specs from files and honors the thread env",
          "[cli]") {
  const std::string path = "/tmp/curverad_test_curve.json";
  {
    std::ofstream out(path);
    out << R"({"kind":"ellipse","a":2.0,"b":1.0})";
  }
  const auto res = run_cli("compute --curve " + path);
  REQUIRE(res.exit_code == 0);
  const double n = json::parse(res.out).at("result").at("n").get<double>();

  // the worker count must not change the result
  const auto env_run = run_cli("compute --curve " + path, "CURVERAD_THREADS=2");
  REQUIRE(env_run.exit_code == 0);
  CHECK(json::parse(env_run.out).at("result").at("n").get<double>() == n);
}

TEST_CASE("every emitted file embeds a manifest", "[cli]") {
  const auto sweep =
      run_cli("sweep-ellipse --xi-min 0.5 --xi-max 1.0 --steps 2");
  REQUIRE(sweep.exit_code == 0);
  CHECK(sweep.out.rfind("# manifest: {", 0) == 0);
  const auto brace = sweep.out.find('{');
  const auto eol = sweep.out.find('\n');
  const json man = json::parse(sweep.out.substr(brace, eol - brace));
  CHECK(man.at("command") == "sweep-ellipse");
  CHECK(man.contains("wall_time_s"));
  CHECK(man.contains("version"));

  const auto compute = run_cli(R"(compute --curve '{"kind":"circle","r":1}')");
  const json cj = json::parse(compute.out);
  for (const char* key : {"command", "curve", "config", "version",
                          "wall_time_s", "result"})
    CHECK(cj.contains(key));
}
