#include "meshspectra/obj_io.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <vector>

#include "meshspectra/errors.hpp"
#include "meshspectra/text_format.hpp"

namespace meshspectra {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

// "7/2/3" -> 7; only the vertex reference matters here.
std::string vertex_ref(const std::string& token) {
  const auto slash = token.find('/');
  return slash == std::string::npos ? token : token.substr(0, slash);
}

int resolve_index(long raw, long vertex_count, int line) {
  long resolved;
  if (raw > 0) {
    resolved = raw - 1;
  } else if (raw < 0) {
    resolved = vertex_count + raw;  // -1 refers to the latest vertex
  } else {
    throw ParseError("face index 0 is not a valid OBJ reference", line);
  }
  if (resolved < 0 || resolved >= vertex_count) {
    throw StructuralError("line " + std::to_string(line) + ": face index " +
                          std::to_string(raw) + " outside the " +
                          std::to_string(vertex_count) +
                          " vertices seen so far");
  }
  return static_cast<int>(resolved);
}

}  // namespace

TriangleMesh parse_obj(std::istream& input) {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> faces;

  std::string line;
  int line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;

    if (tokens[0] == "v") {
      if (tokens.size() != 4) {
        throw ParseError("expected 'v x y z', got " +
                             std::to_string(tokens.size() - 1) +
                             " coordinates",
                         line_no);
      }
      vertices.push_back({parse_double(tokens[1], line_no),
                          parse_double(tokens[2], line_no),
                          parse_double(tokens[3], line_no)});
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) {
        throw ParseError("face needs at least 3 vertex references", line_no);
      }
      std::vector<int> polygon;
      polygon.reserve(tokens.size() - 1);
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        const long raw = parse_long(vertex_ref(tokens[t]), line_no);
        polygon.push_back(
            resolve_index(raw, static_cast<long>(vertices.size()), line_no));
      }
      // Fan triangulation from the first polygon vertex.
      for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
        const std::array<int, 3> tri{polygon[0], polygon[k], polygon[k + 1]};
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
          throw StructuralError("line " + std::to_string(line_no) +
                                ": face repeats a vertex index");
        }
        faces.push_back(tri);
      }
    }
    // vt/vn/g/o/s/usemtl/mtllib and anything else: ignored.
  }

  TriangleMesh mesh;
  mesh.vertices.resize(static_cast<Eigen::Index>(vertices.size()), 3);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    mesh.vertices.row(static_cast<Eigen::Index>(i)) << vertices[i][0],
        vertices[i][1], vertices[i][2];
  }
  mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t i = 0; i < faces.size(); ++i) {
    mesh.faces.row(static_cast<Eigen::Index>(i)) << faces[i][0], faces[i][1],
        faces[i][2];
  }
  check_mesh(mesh);
  return mesh;
}

TriangleMesh parse_obj(const std::string& text) {
  std::istringstream stream(text);
  return parse_obj(stream);
}

TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw IoError("cannot open OBJ file: " + path.string());
  }
  return parse_obj(stream);
}

std::string write_obj(const TriangleMesh& mesh) {
  check_mesh(mesh);
  std::string out = "# meshspectra OBJ\n";
  for (Eigen::Index i = 0; i < mesh.vertex_count(); ++i) {
    out += "v ";
    out += format_double(mesh.vertices(i, 0));
    out += ' ';
    out += format_double(mesh.vertices(i, 1));
    out += ' ';
    out += format_double(mesh.vertices(i, 2));
    out += '\n';
  }
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    out += "f " + std::to_string(mesh.faces(f, 0) + 1) + ' ' +
           std::to_string(mesh.faces(f, 1) + 1) + ' ' +
           std::to_string(mesh.faces(f, 2) + 1) + '\n';
  }
  return out;
}

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    throw IoError("cannot open for writing: " + path.string());
  }
  stream << write_obj(mesh);
  if (!stream) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace meshspectra
