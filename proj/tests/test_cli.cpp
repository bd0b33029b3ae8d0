#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ngeo/curve_io.hpp"
#include "ngeo/report.hpp"

namespace fs = std::filesystem;
using namespace ngeo;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NGEO_BIN) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ngeo-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kScenarios = NGEO_SCENARIO_DIR;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve: Minkowski point to point") {
  const fs::path dir = scratch("mink");
  const Run r = run("solve " + kScenarios + "/minkowski-point.json --out-dir " + dir.string());
  CHECK(r.code == 0);
  const SpacetimeCurve c = read_curve((dir / "minkowski-point.curve.csv").string());
  REQUIRE(c.segments() == 64);
  for (int i = 0; i <= 64; ++i) {
    CHECK(std::abs(c.nodes[i].x[0] - i / 64.0) <= 1e-8);
    CHECK(std::abs(c.nodes[i].x[1]) <= 1e-8);
    CHECK(std::abs(c.nodes[i].t) <= 1e-8);
  }
  const auto rep = parse_report(slurp(dir / "minkowski-point.report.txt"));
  CHECK(rep.at("converged") == "yes");
  CHECK(rep.at("branch") == "H1");
  CHECK(rep.at("seed") == "7");
  CHECK(std::stod(rep.at("J")) == doctest::Approx(0.5));
}

TEST_CASE("solve: sphere to point reports small orthogonality residuals") {
  const fs::path dir = scratch("sphere");
  const Run r = run("solve " + kScenarios + "/sphere-point.json --out-dir " + dir.string());
  CHECK(r.code == 0);
  const auto rep = parse_report(slurp(dir / "sphere-point.report.txt"));
  CHECK(std::stod(rep.at("orthogonality_r0")) <= 1e-5);
  CHECK(std::stod(rep.at("orthogonality_r1")) <= 1e-5);
  CHECK(rep.at("causal_character") == "lightlike");
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  const Run infeasible = run("solve " + kScenarios + "/infeasible.json --out-dir " + dir.string());
  CHECK(infeasible.code == 2);
  CHECK(infeasible.out.find("disjoint") != std::string::npos);

  std::ofstream(dir / "broken.json") << "{\"metric\": {\"builtin\": \"boost\"}, \"colour\": 3}";
  const Run parse = run("solve " + (dir / "broken.json").string() + " --out-dir " + dir.string());
  CHECK(parse.code == 2);
  CHECK(parse.out.find("colour") != std::string::npos);

  CHECK(run("solve builtin:nowhere --out-dir " + dir.string()).code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("--help").code == 0);
  CHECK(run("catalog").out.find("builtin:rotating:cylinder-cylinder") != std::string::npos);

  // A budget too small to certify: best attempt is still written.
  const Run starved = run("solve builtin:static-well:sphere-point --segments 8 --restarts 1 --tol-geo 1e-14 --out-dir " +
                          dir.string());
  CHECK(starved.code == 1);
  CHECK(fs::exists(dir / "static-well-sphere-point.curve.csv"));
  CHECK(parse_report(slurp(dir / "static-well-sphere-point.report.txt")).at("status") == "not-found");
}

TEST_CASE("identical seeds give byte-identical artifacts") {
  const fs::path a = scratch("det-a"), b = scratch("det-b");
  const std::string args = "solve builtin:rotating:sphere-point --segments 32 --restarts 3 --seed 11 --out-dir ";
  REQUIRE(run(args + a.string()).code == 0);
  REQUIRE(run(args + b.string()).code == 0);
  CHECK(slurp(a / "rotating-sphere-point.curve.csv") == slurp(b / "rotating-sphere-point.curve.csv"));
  CHECK(slurp(a / "rotating-sphere-point.report.txt") == slurp(b / "rotating-sphere-point.report.txt"));
}

TEST_CASE("diagnose reproduces the solve report") {
  const fs::path dir = scratch("diag");
  REQUIRE(run("solve builtin:boost:sphere-point --segments 32 --out-dir " + dir.string()).code == 0);
  const auto solved = parse_report(slurp(dir / "boost-sphere-point.report.txt"));
  const Run d = run("diagnose " + (dir / "boost-sphere-point.curve.csv").string() + " builtin:boost:sphere-point");
  REQUIRE(d.code == 0);
  const auto diag = parse_report(d.out);
  for (const auto& [key, value] : diag) {
    CAPTURE(key);
    REQUIRE(solved.count(key) == 1);
    CHECK(solved.at(key) == value);
  }

  // Corrupting one interior row makes the residual spike.
  std::string text = slurp(dir / "boost-sphere-point.curve.csv");
  SpacetimeCurve c = parse_curve(text);
  c.nodes[16].x[1] += 0.05;
  write_curve((dir / "bad.csv").string(), c);
  const auto bad = parse_report(run("diagnose " + (dir / "bad.csv").string() + " builtin:boost:sphere-point").out);
  CHECK(std::stod(bad.at("geodesic_residual")) > 1e3 * std::stod(diag.at("geodesic_residual")));
  CHECK(bad.at("certified") == "no");

  std::ofstream(dir / "wrong.csv") << "s,x1,t\n0,0,0\n1,1,0\n";
  CHECK(run("diagnose " + (dir / "wrong.csv").string() + " builtin:boost:sphere-point").code == 2);
}

TEST_CASE("fermat subcommands") {
  const fs::path dir = scratch("fermat");
  const Run d = run("fermat distance " + kScenarios + "/boost-fermat.json --from 0,0 --to 1,0 --out-dir " + dir.string());
  REQUIRE(d.code == 0);
  const auto rep = parse_report(d.out);
  CHECK(std::stod(rep.at("forward")) == doctest::Approx(1.6180339887).epsilon(1e-4));
  CHECK(std::stod(rep.at("backward")) == doctest::Approx(0.6180339887).epsilon(1e-4));

  const auto len = parse_report(run("fermat length builtin:minkowski --from 0,0 --to 1,0").out);
  CHECK(std::stod(len.at("length_future")) == doctest::Approx(1.0));
  CHECK(len.at("comparison_holds") == "yes");

  const Run lift = run("fermat lift builtin:boost --from 0,0 --to 1,0.5 --segments 64 --out-dir " + dir.string());
  REQUIRE(lift.code == 0);
  const std::string csv = slurp(dir / "boost.lightlike-future.csv");
  CHECK(csv.rfind("s,x1,x2,t,null_check\n", 0) == 0);
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  int rows = 0;
  while (std::getline(ss, line)) {
    ++rows;
    CHECK(std::abs(std::stod(line.substr(line.rfind(',') + 1))) <= 1e-10);
  }
  CHECK(rows == 65);
  const auto diag = parse_report(run("diagnose " + (dir / "boost.lightlike-future.csv").string() +
                                     " builtin:boost:point-point").out);
  CHECK(diag.at("causal_character") == "lightlike");

  CHECK(run("fermat distance builtin:boost --from 0,0 --to 1").code == 2);
}

TEST_CASE("lift: H2 route from the polynomial scenario") {
  const fs::path dir = scratch("lift");
  const Run r = run("lift " + kScenarios + "/polynomial-well.json --segments 32 --out-dir " + dir.string());
  CHECK(r.code == 0);
  const auto rep = parse_report(r.out);
  CHECK(rep.at("causal_character") == "spacelike");
  CHECK(std::stod(rep.at("base_energy")) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(run("lift builtin:boost:sphere-point --out-dir " + dir.string()).code == 2);
}

}
