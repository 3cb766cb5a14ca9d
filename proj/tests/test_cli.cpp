#include "idtlab/idtlab.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using idtlab::io::Json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
  Json error() const { return Json::parse(err); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "idtlab_cli_test";
  fs::create_directories(dir);
  return dir;
}

CliRun run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
  const std::string cmd = std::string(IDTLAB_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string data(const std::string& name) { return (fs::path(IDTLAB_DATA_DIR) / name).string(); }

}  // namespace

TEST(Cli, DelaunayCube) {
  const CliRun r = run("delaunay " + data("cube.off"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["flips"], 0);
  EXPECT_NEAR(j["harmonic_index"].get<double>(), 96.0, 1e-12);
  EXPECT_NEAR(j["min_angle_slack"].get<double>(), 0.0, 1e-12);
  EXPECT_EQ(j["edges"].size(), 18u);
}

TEST(Cli, DelaunayKite) {
  const CliRun r = run("delaunay " + data("kite.off"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["flips"], 1);
  ASSERT_EQ(j["flip_log"].size(), 1u);
  EXPECT_NEAR(j["flip_log"][0]["new_length"].get<double>(), std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(j["harmonic_index_input"].get<double>(), 22.0, 1e-12);
  EXPECT_NEAR(j["harmonic_index"].get<double>(), 17.0, 1e-12);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const CliRun a = run("delaunay " + data("hex_fan.off")), b = run("delaunay " + data("hex_fan.off"));
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, WeightsOfKite) {
  const CliRun input = run("weights --use-input-triangulation " + data("kite.off"));
  ASSERT_EQ(input.code, 0) << input.err;
  const Json edges = input.json()["edges"];
  double min_w = 0;
  for (const auto& e : edges) min_w = std::min(min_w, e["weight"].get<double>());
  EXPECT_NEAR(min_w, -0.25, 1e-12);

  const CliRun idt = run("weights " + data("kite.off"));
  ASSERT_EQ(idt.code, 0);
  const Json idt_edges = idt.json()["edges"];
  for (const auto& e : idt_edges) EXPECT_GE(e["weight"].get<double>(), -1e-12);
}

TEST(Cli, SolveDirichletLinearData) {
  const CliRun r = run("solve --dirichlet " + data("grid.off") + " --boundary " + data("grid_linear.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto mesh = idtlab::io::load_mesh(data("grid.off"));
  const Json field = r.json()["field"];
  ASSERT_EQ(field.size(), static_cast<std::size_t>(mesh.num_vertices()));
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& p = mesh.positions[v];
    EXPECT_NEAR(field[std::to_string(v)].get<double>(), 2 * p.x() - p.y() + 0.5, 1e-9) << v;
  }
}

TEST(Cli, SolveNeumannIncompatibleExitsTwo) {
  const fs::path bc = scratch() / "single.json";
  std::ofstream(bc) << R"({"0": 1})";
  const CliRun r = run("solve --neumann " + data("cube.off") + " --boundary " + bc.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.error()["error"]["kind"], "IncompatibleData");
}

TEST(Cli, EnergyAndCurvature) {
  const CliRun e = run("energy " + data("square.off"));
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_GT(e.json()["energy"].get<double>(), 0.0);

  const CliRun c = run("curvature " + data("cube.off"));
  ASSERT_EQ(c.code, 0) << c.err;
  const Json H = c.json()["H"]["0"];
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(H[k].get<double>(), -1.0, 1e-12);
}

TEST(Cli, TessellationOfCube) {
  const CliRun r = run("tessellation " + data("cube.off"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["num_cells"], 6);
}

TEST(Cli, MinimalWritesMeshAndLog) {
  const fs::path out = scratch() / "minimal.off", log = scratch() / "minimal.jsonl";
  const CliRun r = run("minimal " + data("grid.off") + " -o " + out.string() + " --log " + log.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.json()["converged"].get<bool>());
  EXPECT_EQ(idtlab::io::load_mesh(out).num_vertices(), 25);
  std::ifstream in(log);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  const Json first = Json::parse(line);
  EXPECT_EQ(first["iter"], 1);
  EXPECT_TRUE(first.contains("energy"));
}

TEST(Cli, MinimalNotConvergedExitsNumeric) {
  const CliRun r = run("minimal " + data("ring.off") + " --max-iter 2");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.error()["error"]["kind"], "NotConverged");
}

TEST(Cli, FlowWritesSnapshots) {
  const fs::path prefix = scratch() / "flow";
  const CliRun r = run("flow " + data("cube.off") + " --steps 2 --dt 0.01 -o " + prefix.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(scratch() / "flow_0001.off"));
  EXPECT_TRUE(fs::exists(scratch() / "flow_0002.off"));
}

TEST(Cli, Verify) {
  const CliRun r = run("verify --count 10");
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(r.json()["passed"].get<bool>());
}

TEST(Cli, ParseErrorExitsOneWithLocation) {
  const fs::path bad = scratch() / "truncated.off";
  std::ofstream(bad) << "OFF\n3 1 0\n0 0 0\n";
  const CliRun r = run("delaunay " + bad.string());
  EXPECT_EQ(r.code, 1);
  const Json e = r.error();
  EXPECT_EQ(e["schema_version"], 1);
  EXPECT_EQ(e["error"]["kind"], "ParseError");
  EXPECT_EQ(e["error"]["line"], 4);

  const fs::path quad = scratch() / "quad.obj";
  std::ofstream(quad) << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
  const CliRun q = run("delaunay " + quad.string());
  EXPECT_EQ(q.code, 1);
  EXPECT_EQ(q.error()["error"]["kind"], "NonTriangleFace");
}

TEST(Cli, ValidationErrorsExitTwo) {
  const fs::path bowtie = scratch() / "bowtie.obj";
  std::ofstream(bowtie) << "v 0 0 0\nv 1 0 0\nv 0 1 0\nv -1 0 0\nv 0 -1 0\nf 1 2 3\nf 1 4 5\n";
  const CliRun b = run("delaunay " + bowtie.string());
  EXPECT_EQ(b.code, 2);
  EXPECT_EQ(b.error()["error"]["kind"], "NonManifoldInput");
  EXPECT_EQ(run("solve " + data("grid.off")).code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("delaunay " + (scratch() / "missing.off").string()).code, 2);
}
