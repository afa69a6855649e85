#include "meshspectra/mesh.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "meshspectra/errors.hpp"
#include "meshspectra/hash.hpp"

namespace meshspectra {

void check_mesh(const TriangleMesh& mesh) {
  const Eigen::Index n = mesh.vertex_count();
  if (mesh.face_count() > 0 && n < 3) {
    throw StructuralError("mesh has faces but fewer than 3 vertices");
  }
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const int a = mesh.faces(f, 0);
    const int b = mesh.faces(f, 1);
    const int c = mesh.faces(f, 2);
    for (int idx : {a, b, c}) {
      if (idx < 0 || idx >= n) {
        throw StructuralError("face " + std::to_string(f) +
                              " references vertex " + std::to_string(idx) +
                              " outside [0, " + std::to_string(n) + ")");
      }
    }
    if (a == b || b == c || a == c) {
      throw StructuralError("face " + std::to_string(f) +
                            " repeats a vertex index");
    }
  }
}

MeshGraph build_graph(const TriangleMesh& mesh) {
  MeshGraph graph;
  graph.vertex_count = static_cast<int>(mesh.vertex_count());
  graph.edges.reserve(static_cast<std::size_t>(mesh.face_count()) * 3);
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const int idx[3] = {mesh.faces(f, 0), mesh.faces(f, 1), mesh.faces(f, 2)};
    for (int k = 0; k < 3; ++k) {
      const int i = idx[k];
      const int j = idx[(k + 1) % 3];
      graph.edges.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()),
                    graph.edges.end());
  return graph;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ValidationReport validate(const TriangleMesh& mesh) {
  check_mesh(mesh);

  // Edge -> incident face count.
  std::map<std::pair<int, int>, int> edge_faces;
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const int idx[3] = {mesh.faces(f, 0), mesh.faces(f, 1), mesh.faces(f, 2)};
    for (int k = 0; k < 3; ++k) {
      const int i = idx[k];
      const int j = idx[(k + 1) % 3];
      ++edge_faces[{std::min(i, j), std::max(i, j)}];
    }
  }

  ValidationReport report;
  const int v = static_cast<int>(mesh.vertex_count());
  const int e = static_cast<int>(edge_faces.size());
  const int f = static_cast<int>(mesh.face_count());
  report.euler_characteristic = v - e + f;
  for (const auto& [edge, count] : edge_faces) {
    if (count == 1) ++report.boundary_edge_count;
    if (count > 2) ++report.non_manifold_edge_count;
  }

  UnionFind uf(v);
  for (const auto& [edge, count] : edge_faces) uf.unite(edge.first, edge.second);
  int components = 0;
  for (int i = 0; i < v; ++i) {
    if (uf.find(i) == i) ++components;
  }
  report.connected_component_count = components;
  return report;
}

std::uint64_t content_hash(const TriangleMesh& mesh) {
  Fnv1a64 h;
  h.update("mesh", 4);
  h.update_value(static_cast<std::int64_t>(mesh.vertex_count()));
  for (Eigen::Index i = 0; i < mesh.vertex_count(); ++i) {
    h.update_value(mesh.vertices(i, 0));
    h.update_value(mesh.vertices(i, 1));
    h.update_value(mesh.vertices(i, 2));
  }
  h.update_value(static_cast<std::int64_t>(mesh.face_count()));
  for (Eigen::Index i = 0; i < mesh.face_count(); ++i) {
    h.update_value(mesh.faces(i, 0));
    h.update_value(mesh.faces(i, 1));
    h.update_value(mesh.faces(i, 2));
  }
  return h.digest();
}

}  // namespace meshspectra
