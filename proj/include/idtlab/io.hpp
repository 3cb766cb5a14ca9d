#pragma once

// Mesh file formats (ASCII OFF and OBJ, triangles only) and the JSON schemas
// used by the command-line tool. Every top-level report carries
// "schema_version": 1.

#include "idtlab/curvature.hpp"
#include "idtlab/errors.hpp"
#include "idtlab/idt.hpp"
#include "idtlab/laplace.hpp"
#include "idtlab/mesh.hpp"
#include "idtlab/surface.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace idtlab::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class MeshFormat { Auto, Off, Obj };

namespace detail {

struct Token {
  std::string_view text;
  int column = 1;  // 1-based
};

/// Whitespace tokens of a line with everything after '#' dropped.
inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next line with at least one token; nullopt at end of input.
  std::optional<std::vector<Token>> next() {
    while (std::getline(in_, current_)) {
      ++line_;
      if (!current_.empty() && current_.back() == '\r') current_.pop_back();
      auto tokens = tokenize(current_);
      if (!tokens.empty()) return tokens;
    }
    ++line_;
    return std::nullopt;
  }

  int line() const { return line_; }

  [[noreturn]] void fail(const std::string& msg, int column, ErrorKind kind = ErrorKind::ParseError) const {
    throw ParseError(kind, msg, line_, column);
  }

 private:
  std::istream& in_;
  std::string current_;
  int line_ = 0;
};

inline double parse_double(const LineReader& r, const Token& t) {
  double value = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    r.fail("expected a finite number, found '" + std::string(t.text) + "'", t.column);
  return value;
}

inline long parse_int(const LineReader& r, const Token& t) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size())
    r.fail("expected an integer, found '" + std::string(t.text) + "'", t.column);
  return value;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Parses ASCII OFF. Extra per-vertex and per-face values (colors) are ignored.
inline EmbeddedMesh read_off(std::istream& in) {
  detail::LineReader reader(in);
  auto tokens = reader.next();
  if (!tokens) reader.fail("empty file, expected 'OFF' header", 1);
  if ((*tokens)[0].text != "OFF") reader.fail("expected 'OFF' header", (*tokens)[0].column);
  tokens->erase(tokens->begin());
  if (tokens->empty()) {
    tokens = reader.next();
    if (!tokens) reader.fail("unexpected end of file, expected vertex and face counts", 1);
  }
  if (tokens->size() < 2) reader.fail("expected vertex and face counts", (*tokens)[0].column);
  const long nv = detail::parse_int(reader, (*tokens)[0]);
  const long nf = detail::parse_int(reader, (*tokens)[1]);
  if (nv < 0 || nf < 0) reader.fail("negative element count", (*tokens)[0].column);

  EmbeddedMesh mesh;
  mesh.positions.reserve(nv);
  for (long v = 0; v < nv; ++v) {
    tokens = reader.next();
    if (!tokens) reader.fail("unexpected end of file, expected vertex " + std::to_string(v), 1);
    if (tokens->size() < 3) reader.fail("vertex needs three coordinates", (*tokens)[0].column);
    mesh.positions.emplace_back(detail::parse_double(reader, (*tokens)[0]),
                                detail::parse_double(reader, (*tokens)[1]),
                                detail::parse_double(reader, (*tokens)[2]));
  }
  mesh.faces.reserve(nf);
  for (long f = 0; f < nf; ++f) {
    tokens = reader.next();
    if (!tokens) reader.fail("unexpected end of file, expected face " + std::to_string(f), 1);
    const long k = detail::parse_int(reader, (*tokens)[0]);
    if (k != 3)
      reader.fail("face with " + std::to_string(k) + " vertices; only triangles are supported",
                  (*tokens)[0].column, ErrorKind::NonTriangleFace);
    if (tokens->size() < 4) reader.fail("face needs three vertex indices", (*tokens)[0].column);
    Face face{};
    for (int c = 0; c < 3; ++c) {
      const auto& t = (*tokens)[c + 1];
      const long idx = detail::parse_int(reader, t);
      if (idx < 0 || idx >= nv) reader.fail("vertex index " + std::to_string(idx) + " out of range", t.column);
      face[c] = static_cast<int>(idx);
    }
    mesh.faces.push_back(face);
  }
  return mesh;
}

/// Parses the `v` and `f` records of a Wavefront OBJ file; texture and normal
/// indices in face records are ignored, negative indices are relative.
inline EmbeddedMesh read_obj(std::istream& in) {
  detail::LineReader reader(in);
  EmbeddedMesh mesh;
  while (auto tokens = reader.next()) {
    const std::string_view kind = (*tokens)[0].text;
    if (kind == "v") {
      if (tokens->size() < 4) reader.fail("vertex needs three coordinates", (*tokens)[0].column);
      mesh.positions.emplace_back(detail::parse_double(reader, (*tokens)[1]),
                                  detail::parse_double(reader, (*tokens)[2]),
                                  detail::parse_double(reader, (*tokens)[3]));
    } else if (kind == "f") {
      if (tokens->size() != 4)
        reader.fail("face with " + std::to_string(tokens->size() - 1) + " vertices; only triangles are supported",
                    (*tokens)[0].column, ErrorKind::NonTriangleFace);
      Face face{};
      for (int c = 0; c < 3; ++c) {
        detail::Token t = (*tokens)[c + 1];
        t.text = t.text.substr(0, t.text.find('/'));
        const long idx = detail::parse_int(reader, t);
        const long n = static_cast<long>(mesh.positions.size());
        const long resolved = idx < 0 ? n + idx : idx - 1;
        if (idx == 0 || resolved < 0 || resolved >= n)
          reader.fail("vertex index " + std::to_string(idx) + " out of range", t.column);
        face[c] = static_cast<int>(resolved);
      }
      mesh.faces.push_back(face);
    }
  }
  return mesh;
}

inline MeshFormat detect_format(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".off") return MeshFormat::Off;
  if (ext == ".obj") return MeshFormat::Obj;
  throw Error(ErrorKind::InvalidArgument, "cannot infer mesh format from '" + path.string() + "'");
}

/// Reads a mesh and checks it: manifold, consistently oriented, no degenerate faces.
inline EmbeddedMesh load_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::Auto) {
  if (format == MeshFormat::Auto) format = detect_format(path);
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path.string() + "'");
  EmbeddedMesh mesh = format == MeshFormat::Off ? read_off(in) : read_obj(in);
  (void)PiecewiseFlatSurface::from_embedding(mesh);
  return mesh;
}

/// ASCII OFF with 17 significant digits, so positions survive a round trip.
inline void write_off(std::ostream& out, const EmbeddedMesh& mesh) {
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << " 0\n";
  for (const Vec3& p : mesh.positions)
    out << detail::format_double(p.x()) << ' ' << detail::format_double(p.y()) << ' '
        << detail::format_double(p.z()) << '\n';
  for (const Face& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

inline void save_off(const std::filesystem::path& path, const EmbeddedMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  write_off(out, mesh);
}

// ---------------------------------------------------------------------------
// JSON

inline Json report(std::string_view command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

inline Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

inline Json to_json(const SurfaceDiagnostics& d) {
  Json j;
  j["num_vertices"] = d.num_vertices;
  j["num_edges"] = d.num_edges;
  j["num_faces"] = d.num_faces;
  j["euler_characteristic"] = d.euler_characteristic;
  j["num_components"] = d.num_components;
  j["num_boundary_edges"] = d.num_boundary_edges;
  j["total_area"] = d.total_area;
  j["triangle_inequality_violations"] = d.triangle_inequality_violations;
  j["nonmanifold_edges"] = d.nonmanifold_edges;
  j["nonmanifold_vertices"] = d.nonmanifold_vertices;
  j["cone_points"] = d.cone_points;
  j["warnings"] = d.warnings;
  return j;
}

inline Json to_json(const FlipRecord& r) {
  Json j;
  j["ordinal"] = r.ordinal;
  j["edge"] = r.edge;
  j["old_endpoints"] = r.old_endpoints;
  j["new_endpoints"] = r.new_endpoints;
  j["old_length"] = r.old_length;
  j["new_length"] = r.new_length;
  return j;
}

inline Json to_json(const FlipLog& log) {
  Json j = Json::array();
  for (const FlipRecord& r : log) j.push_back(to_json(r));
  return j;
}

/// Intrinsic edges as {i, j, length, origin}; origin is "input" or the ordinal
/// of the flip that produced the edge.
inline Json intrinsic_edges_json(const PiecewiseFlatSurface& s, const FlipLog& log) {
  std::vector<int> origin(s.num_edges(), 0);
  for (const FlipRecord& r : log) origin[r.edge] = r.ordinal;
  Json j = Json::array();
  for (int e = 0; e < s.num_edges(); ++e) {
    const auto [a, b] = s.endpoints(e);
    Json edge;
    edge["i"] = a;
    edge["j"] = b;
    edge["length"] = s.length(e);
    if (origin[e] == 0)
      edge["origin"] = "input";
    else
      edge["origin"] = origin[e];
    j.push_back(std::move(edge));
  }
  return j;
}

inline Json to_json(const WeightedGraph& g) {
  Json j = Json::array();
  for (const WeightedEdge& e : g.edges) {
    Json edge;
    edge["i"] = e.i;
    edge["j"] = e.j;
    edge["weight"] = e.weight;
    j.push_back(std::move(edge));
  }
  return j;
}

inline Json field_json(const VertexField<double>& f) {
  Json j = Json::object();
  for (std::size_t v = 0; v < f.size(); ++v) j[std::to_string(v)] = f[v];
  return j;
}

inline Json field_json(const VertexField<Vec3>& f) {
  Json j = Json::object();
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f[v].allFinite())
      j[std::to_string(v)] = vec_json(f[v]);
    else
      j[std::to_string(v)] = nullptr;
  }
  return j;
}

inline Json to_json(const TessellationCells& t) {
  Json cells = Json::array();
  for (const TessellationCell& c : t.cells) {
    Json cell;
    cell["faces"] = c.faces;
    Json sides = Json::array();
    for (const CellSide& s : c.boundary) sides.push_back(Json{{"vertex", s.vertex}, {"edge", s.edge}});
    cell["sides"] = std::move(sides);
    cells.push_back(std::move(cell));
  }
  return cells;
}

inline Json to_json(const MinimalIteration& it) {
  Json j;
  j["iter"] = it.iter;
  j["energy"] = it.energy;
  j["max_disp"] = it.max_disp;
  j["flips"] = it.flips;
  j["area"] = it.area;
  return j;
}

namespace detail {

inline int vertex_key(const std::string& key, int num_vertices) {
  int v = -1;
  const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
  if (ec != std::errc() || ptr != key.data() + key.size() || v < 0 || v >= num_vertices)
    throw Error(ErrorKind::InvalidArgument, "'" + key + "' is not a vertex index");
  return v;
}

}  // namespace detail

/// True if any value of a {vertex: value} object is an array.
inline bool is_vector_field(const Json& j) {
  for (const auto& [key, value] : j.items())
    if (value.is_array()) return true;
  return false;
}

inline BoundaryData<double> scalar_boundary(const Json& j, int num_vertices) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "boundary data must be a JSON object");
  BoundaryData<double> out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw Error(ErrorKind::InvalidArgument, "boundary value for '" + key + "' is not a number");
    out[detail::vertex_key(key, num_vertices)] = value.get<double>();
  }
  return out;
}

inline BoundaryData<Vec3> vector_boundary(const Json& j, int num_vertices) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "boundary data must be a JSON object");
  BoundaryData<Vec3> out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_array() || value.size() != 3)
      throw Error(ErrorKind::InvalidArgument, "boundary value for '" + key + "' is not a 3-vector");
    for (const auto& c : value)
      if (!c.is_number())
        throw Error(ErrorKind::InvalidArgument, "boundary value for '" + key + "' is not a 3-vector");
    out[detail::vertex_key(key, num_vertices)] = Vec3(value[0].get<double>(), value[1].get<double>(), value[2].get<double>());
  }
  return out;
}

inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace idtlab::io
