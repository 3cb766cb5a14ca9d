#include "idtlab/idtlab.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

namespace {

using idtlab::io::Json;
namespace fs = std::filesystem;

struct RunConfig {
  std::string input;
  std::string format = "auto";
  double eps_w = idtlab::kDefaultEpsW;
  double merge_eps = -1;
  double tol = -1;
  int max_iter = 200;
  long max_flips = -1;
  double dt = 0;
  int steps = 1;
  std::string output;
  std::string boundary;
  std::string field;
  std::string log;
  bool use_input_triangulation = false;
  bool dirichlet = false;
  bool neumann = false;
  bool integrated = false;
  std::uint64_t seed = 1;
  int count = 100;
};

idtlab::io::MeshFormat parse_format(const std::string& s) {
  if (s == "off") return idtlab::io::MeshFormat::Off;
  if (s == "obj") return idtlab::io::MeshFormat::Obj;
  return idtlab::io::MeshFormat::Auto;
}

idtlab::FlipOptions flip_options(const RunConfig& cfg) {
  idtlab::FlipOptions f;
  f.eps_w = cfg.eps_w;
  f.max_flips = cfg.max_flips;
  return f;
}

idtlab::SolverOptions solver_options(const RunConfig& cfg) {
  idtlab::SolverOptions s;
  if (cfg.tol > 0) s.tol = cfg.tol;
  return s;
}

idtlab::EmbeddedMesh load(const RunConfig& cfg) { return idtlab::io::load_mesh(cfg.input, parse_format(cfg.format)); }

void emit(const Json& j, const std::string& path = {}) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw idtlab::Error(idtlab::ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

idtlab::IntrinsicOperator make_operator(const RunConfig& cfg, const idtlab::EmbeddedMesh& mesh) {
  return idtlab::intrinsic_operator(mesh, flip_options(cfg), cfg.use_input_triangulation);
}

int cmd_validate(const RunConfig& cfg) {
  const auto mesh = load(cfg);
  const auto s = idtlab::PiecewiseFlatSurface::from_embedding(mesh);
  Json j = idtlab::io::report("validate");
  j["diagnostics"] = idtlab::io::to_json(idtlab::validate(s));
  emit(j, cfg.output);
  return 0;
}

int cmd_delaunay(const RunConfig& cfg) {
  const auto mesh = load(cfg);
  auto s = idtlab::PiecewiseFlatSurface::from_embedding(mesh);
  const double before = idtlab::harmonic_index(s);
  const auto log = idtlab::flip_to_delaunay(s, flip_options(cfg));
  Json j = idtlab::io::report("delaunay");
  j["flips"] = log.size();
  j["harmonic_index_input"] = before;
  j["harmonic_index"] = idtlab::harmonic_index(s);
  j["min_angle_slack"] = idtlab::min_delaunay_slack(s);
  j["squared_circumradii_sum"] = idtlab::squared_circumradii_sum(s);
  j["flip_log"] = idtlab::io::to_json(log);
  j["edges"] = idtlab::io::intrinsic_edges_json(s, log);
  emit(j, cfg.output);
  return 0;
}

int cmd_weights(const RunConfig& cfg) {
  const auto op = make_operator(cfg, load(cfg));
  Json j = idtlab::io::report("weights");
  j["flips"] = op.flips.size();
  j["triangulation"] = cfg.use_input_triangulation ? "input" : "intrinsic_delaunay";
  j["edges"] = idtlab::io::to_json(op.graph);
  emit(j, cfg.output);
  return 0;
}

int cmd_energy(const RunConfig& cfg) {
  const auto mesh = load(cfg);
  const auto op = make_operator(cfg, mesh);
  Json j = idtlab::io::report("energy");
  if (cfg.field.empty()) {
    j["field"] = "positions";
    j["energy"] = idtlab::dirichlet_energy<idtlab::Vec3>(op.graph, mesh.positions);
  } else {
    const Json field = idtlab::io::read_json(cfg.field);
    const int nv = mesh.num_vertices();
    if (idtlab::io::is_vector_field(field)) {
      const auto data = idtlab::io::vector_boundary(field, nv);
      if (static_cast<int>(data.size()) != nv)
        throw idtlab::Error(idtlab::ErrorKind::InvalidArgument, "the field must give a value for every vertex");
      idtlab::VertexField<idtlab::Vec3> f(nv);
      for (const auto& [v, x] : data) f[v] = x;
      j["field"] = cfg.field;
      j["energy"] = idtlab::dirichlet_energy<idtlab::Vec3>(op.graph, f);
    } else {
      const auto data = idtlab::io::scalar_boundary(field, nv);
      if (static_cast<int>(data.size()) != nv)
        throw idtlab::Error(idtlab::ErrorKind::InvalidArgument, "the field must give a value for every vertex");
      idtlab::VertexField<double> f(nv);
      for (const auto& [v, x] : data) f[v] = x;
      j["field"] = cfg.field;
      j["energy"] = idtlab::dirichlet_energy<double>(op.graph, f);
    }
  }
  emit(j, cfg.output);
  return 0;
}

template <class T>
Json solve_field(const RunConfig& cfg, const idtlab::WeightedGraph& g, const idtlab::BoundaryData<T>& data) {
  const auto solver = solver_options(cfg);
  const auto f = cfg.neumann ? idtlab::solve_neumann<T>(g, data, solver) : idtlab::solve_dirichlet<T>(g, data, solver);
  Json j;
  j["field"] = idtlab::io::field_json(f);
  j["energy"] = idtlab::dirichlet_energy<T>(g, f);
  return j;
}

int cmd_solve(const RunConfig& cfg) {
  const auto mesh = load(cfg);
  const auto op = make_operator(cfg, mesh);
  const Json data = cfg.boundary.empty() ? Json::object() : idtlab::io::read_json(cfg.boundary);
  Json j = idtlab::io::report("solve");
  j["problem"] = cfg.neumann ? "neumann" : "dirichlet";
  j["flips"] = op.flips.size();
  const Json result = idtlab::io::is_vector_field(data)
                          ? solve_field(cfg, op.graph, idtlab::io::vector_boundary(data, mesh.num_vertices()))
                          : solve_field(cfg, op.graph, idtlab::io::scalar_boundary(data, mesh.num_vertices()));
  j["energy"] = result["energy"];
  j["field"] = result["field"];
  emit(j, cfg.output);
  return 0;
}

int cmd_tessellation(const RunConfig& cfg) {
  auto s = idtlab::PiecewiseFlatSurface::from_embedding(load(cfg));
  const auto log = idtlab::flip_to_delaunay(s, flip_options(cfg));
  const auto cells = idtlab::extract_tessellation(s, cfg.merge_eps);
  Json j = idtlab::io::report("tessellation");
  j["flips"] = log.size();
  j["merge_eps"] = cells.merge_eps;
  j["num_cells"] = cells.cells.size();
  j["cells"] = idtlab::io::to_json(cells);
  emit(j, cfg.output);
  return 0;
}

int cmd_curvature(const RunConfig& cfg) {
  const auto field = idtlab::curvature_field(load(cfg), flip_options(cfg));
  Json j = idtlab::io::report("curvature");
  j["flips"] = field.flips;
  j["H"] = idtlab::io::field_json(field.H);
  j["density"] = idtlab::io::field_json(field.density);
  j["area"] = idtlab::io::field_json(field.area);
  emit(j, cfg.output);
  return 0;
}

int cmd_minimal(const RunConfig& cfg) {
  const auto mesh = load(cfg);
  const auto fixed = cfg.boundary.empty()
                         ? idtlab::boundary_constraints(mesh)
                         : idtlab::io::vector_boundary(idtlab::io::read_json(cfg.boundary), mesh.num_vertices());
  idtlab::MinimalOptions opts;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  opts.flip = flip_options(cfg);
  const auto result = idtlab::minimal_solve(mesh, fixed, opts);

  if (!cfg.output.empty()) idtlab::io::save_off(cfg.output, result.mesh);
  if (!cfg.log.empty()) {
    std::ofstream out(cfg.log);
    if (!out) throw idtlab::Error(idtlab::ErrorKind::InvalidArgument, "cannot write '" + cfg.log + "'");
    for (const auto& it : result.log) out << idtlab::io::to_json(it).dump() << '\n';
  }
  Json j = idtlab::io::report("minimal");
  j["converged"] = result.converged;
  j["iterations"] = result.log.size();
  j["tol"] = result.tol;
  j["residual"] = result.residual;
  Json log = Json::array();
  for (const auto& it : result.log) log.push_back(idtlab::io::to_json(it));
  j["log"] = std::move(log);
  if (!result.converged) {
    std::cout << j.dump(2) << '\n';
    throw idtlab::Error(idtlab::ErrorKind::NotConverged,
                        "no convergence within " + std::to_string(cfg.max_iter) + " iterations");
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_flow(const RunConfig& cfg) {
  if (cfg.steps < 1) throw idtlab::Error(idtlab::ErrorKind::InvalidArgument, "--steps must be positive");
  idtlab::FlowOptions opts;
  opts.use_density = !cfg.integrated;
  opts.flip = flip_options(cfg);
  idtlab::EmbeddedMesh mesh = load(cfg);
  const fs::path prefix = cfg.output.empty() ? fs::path(fs::path(cfg.input).stem().string() + "_flow") : fs::path(cfg.output);

  Json j = idtlab::io::report("flow");
  j["dt"] = cfg.dt;
  j["velocity"] = opts.use_density ? "density" : "integrated";
  Json steps = Json::array();
  for (int k = 1; k <= cfg.steps; ++k) {
    const auto step = idtlab::mcf_step(mesh, cfg.dt, opts);
    mesh = step.mesh;
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_%04d.off", k);
    const std::string path = prefix.string() + suffix;
    idtlab::io::save_off(path, mesh);
    Json s;
    s["step"] = k;
    s["flips"] = step.flips;
    s["dt_limit"] = step.dt_limit;
    s["area"] = idtlab::surface_area(mesh);
    s["output"] = path;
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  idtlab::VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.quads = opts.triangles = 10 * cfg.count;
  opts.triangulations = cfg.count;
  const auto results = idtlab::run_verification(opts);
  Json j = idtlab::io::report("verify");
  j["seed"] = cfg.seed;
  bool ok = true;
  Json checks = Json::array();
  for (const auto& r : results) {
    Json c;
    c["name"] = r.name;
    c["trials"] = r.trials;
    c["failures"] = r.failures;
    c["max_error"] = r.max_error;
    c["passed"] = r.passed();
    checks.push_back(std::move(c));
    ok = ok && r.passed();
  }
  j["checks"] = std::move(checks);
  j["passed"] = ok;
  emit(j, cfg.output);
  if (!ok) throw idtlab::Error(idtlab::ErrorKind::SolverFailure, "oracle verification failed");
  return 0;
}

void print_error(std::string_view kind, const std::string& message, int line = 0, int column = 0) {
  Json j;
  j["schema_version"] = idtlab::io::kSchemaVersion;
  Json e;
  e["kind"] = kind;
  e["message"] = message;
  if (line > 0) {
    e["line"] = line;
    e["column"] = column;
  }
  j["error"] = std::move(e);
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("IDTLAB_THREADS")) Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"Intrinsic Delaunay triangulations and discrete Laplace operators of piecewise flat surfaces"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::function<int(const RunConfig&)> run;

  auto add = [&](const std::string& name, const std::string& help, int (*fn)(const RunConfig&),
                 bool takes_mesh = true) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (takes_mesh) {
      sub->add_option("mesh", cfg.input, "Input mesh (.off or .obj)")->required();
      sub->add_option("--format", cfg.format, "Mesh format")->check(CLI::IsMember({"auto", "off", "obj"}));
      sub->add_option("--eps-w", cfg.eps_w, "Flip when the cotan weight is below -eps_w")
          ->check(CLI::PositiveNumber);
      sub->add_option("--max-flips", cfg.max_flips, "Flip budget (default 100 * edges)");
    }
    sub->add_option("--output,-o", cfg.output, "Output path");
    sub->callback([&run, fn] { run = fn; });
    return sub;
  };

  add("validate", "Report mesh diagnostics", cmd_validate);
  add("delaunay", "Flip to the intrinsic Delaunay triangulation", cmd_delaunay);
  add("weights", "Cotan weights of the intrinsic Delaunay triangulation", cmd_weights)
      ->add_flag("--use-input-triangulation", cfg.use_input_triangulation, "Use the input triangulation instead");
  add("energy", "Dirichlet energy of a vertex field", cmd_energy)
      ->add_option("--field", cfg.field, "JSON {vertex: value}; default is the vertex positions");
  auto* solve = add("solve", "Solve a Dirichlet or Neumann boundary value problem", cmd_solve);
  auto* dir = solve->add_flag("--dirichlet", cfg.dirichlet, "Prescribe values at the boundary vertices");
  solve->add_flag("--neumann", cfg.neumann, "Prescribe the Laplacian at the boundary vertices")->excludes(dir);
  solve->add_option("--boundary", cfg.boundary, "JSON {vertex: value}")->check(CLI::ExistingFile);
  solve->add_option("--tol", cfg.tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  solve->add_flag("--use-input-triangulation", cfg.use_input_triangulation, "Use the input triangulation instead");
  add("tessellation", "Cells of the Delaunay tessellation", cmd_tessellation)
      ->add_option("--merge-eps", cfg.merge_eps, "Merge across edges with |weight| <= merge_eps")
      ->check(CLI::PositiveNumber);
  add("curvature", "Mean curvature vectors, densities and Voronoi areas", cmd_curvature);
  auto* minimal = add("minimal", "Iterate toward a discrete minimal surface", cmd_minimal);
  minimal->add_option("--boundary", cfg.boundary, "JSON {vertex: [x, y, z]}; default fixes the boundary")
      ->check(CLI::ExistingFile);
  minimal->add_option("--tol", cfg.tol, "Displacement tolerance (default 1e-8 * bbox diagonal)")
      ->check(CLI::PositiveNumber);
  minimal->add_option("--max-iter", cfg.max_iter, "Iteration limit")->check(CLI::PositiveNumber);
  minimal->add_option("--log", cfg.log, "Write the iteration log as JSON lines");
  auto* flow = add("flow", "Explicit mean curvature flow", cmd_flow);
  flow->add_option("--steps", cfg.steps, "Number of steps")->check(CLI::PositiveNumber);
  flow->add_option("--dt", cfg.dt, "Time step")->required()->check(CLI::NonNegativeNumber);
  flow->add_flag("--integrated", cfg.integrated, "Move by the integrated H instead of the density");
  auto* verify = add("verify", "Run the randomized oracle suite", cmd_verify, false);
  verify->add_option("--seed", cfg.seed, "Random seed");
  verify->add_option("--count", cfg.count, "Random triangulations (10x as many quads and triangles)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("InvalidArgument", e.what());
    return static_cast<int>(idtlab::ErrorCategory::Validation);
  }
  if (solve->parsed() && !cfg.dirichlet && !cfg.neumann) {
    print_error("InvalidArgument", "solve needs --dirichlet or --neumann");
    return static_cast<int>(idtlab::ErrorCategory::Validation);
  }

  try {
    return run(cfg);
  } catch (const idtlab::ParseError& e) {
    print_error(idtlab::to_string(e.kind()), e.detail(), e.line(), e.column());
    return static_cast<int>(e.category());
  } catch (const idtlab::Error& e) {
    print_error(idtlab::to_string(e.kind()), e.detail());
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    print_error("InvalidArgument", e.what());
    return static_cast<int>(idtlab::ErrorCategory::Validation);
  }
}
