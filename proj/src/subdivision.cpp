#include "meshspectra/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "meshspectra/errors.hpp"

namespace meshspectra {
namespace {

double loop_beta(int valence) {
  const double k = static_cast<double>(valence);
  const double inner = 3.0 / 8.0 + 0.25 * std::cos(2.0 * std::numbers::pi / k);
  return (5.0 / 8.0 - inner * inner) / k;
}

struct EdgeInfo {
  int face_count = 0;
  int opposite[2] = {-1, -1};  // third vertex of each incident face
};

}  // namespace

SubdivisionOperator build_subdivision_operator(const TriangleMesh& mesh) {
  check_mesh(mesh);
  const MeshGraph graph = build_graph(mesh);
  const int n = graph.vertex_count;
  const int m = static_cast<int>(graph.edges.size());

  std::map<std::pair<int, int>, int> edge_index;
  for (int e = 0; e < m; ++e) edge_index.emplace(graph.edges[static_cast<std::size_t>(e)], e);

  std::vector<EdgeInfo> edge_info(static_cast<std::size_t>(m));
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const int idx[3] = {mesh.faces(f, 0), mesh.faces(f, 1), mesh.faces(f, 2)};
    for (int k = 0; k < 3; ++k) {
      const int i = idx[k];
      const int j = idx[(k + 1) % 3];
      const int opposite = idx[(k + 2) % 3];
      auto& info = edge_info[static_cast<std::size_t>(
          edge_index.at(std::minmax(i, j)))];
      if (info.face_count >= 2) {
        throw StructuralError("edge (" + std::to_string(std::min(i, j)) + ", " +
                              std::to_string(std::max(i, j)) +
                              ") has more than two incident faces");
      }
      info.opposite[info.face_count] = opposite;
      ++info.face_count;
    }
  }

  std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> boundary_neighbors(static_cast<std::size_t>(n));
  for (int e = 0; e < m; ++e) {
    const auto [i, j] = graph.edges[static_cast<std::size_t>(e)];
    neighbors[static_cast<std::size_t>(i)].push_back(j);
    neighbors[static_cast<std::size_t>(j)].push_back(i);
    if (edge_info[static_cast<std::size_t>(e)].face_count == 1) {
      boundary_neighbors[static_cast<std::size_t>(i)].push_back(j);
      boundary_neighbors[static_cast<std::size_t>(j)].push_back(i);
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * 7 +
                   static_cast<std::size_t>(m) * 4);

  // Even rows: repositioned coarse vertices.
  for (int v = 0; v < n; ++v) {
    const auto& ring = neighbors[static_cast<std::size_t>(v)];
    const auto& crease = boundary_neighbors[static_cast<std::size_t>(v)];
    if (!crease.empty()) {
      if (crease.size() == 2) {
        triplets.emplace_back(v, v, 0.75);
        triplets.emplace_back(v, crease[0], 0.125);
        triplets.emplace_back(v, crease[1], 0.125);
      } else {
        // Corner or irregular boundary vertex: keep it fixed.
        triplets.emplace_back(v, v, 1.0);
      }
    } else if (ring.empty()) {
      triplets.emplace_back(v, v, 1.0);  // isolated vertex
    } else {
      const int k = static_cast<int>(ring.size());
      const double beta = loop_beta(k);
      triplets.emplace_back(v, v, 1.0 - k * beta);
      for (int u : ring) triplets.emplace_back(v, u, beta);
    }
  }

  // Odd rows: one new vertex per edge, numbered n + edge index.
  for (int e = 0; e < m; ++e) {
    const auto [i, j] = graph.edges[static_cast<std::size_t>(e)];
    const auto& info = edge_info[static_cast<std::size_t>(e)];
    const int row = n + e;
    if (info.face_count == 2) {
      triplets.emplace_back(row, i, 0.375);
      triplets.emplace_back(row, j, 0.375);
      triplets.emplace_back(row, info.opposite[0], 0.125);
      triplets.emplace_back(row, info.opposite[1], 0.125);
    } else {
      triplets.emplace_back(row, i, 0.5);
      triplets.emplace_back(row, j, 0.5);
    }
  }

  SubdivisionOperator op;
  op.matrix.resize(n + m, n);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  op.coarse_face_count = mesh.face_count();

  op.refined_faces.resize(mesh.face_count() * 4, 3);
  auto midpoint = [&](int i, int j) {
    return n + edge_index.at(std::minmax(i, j));
  };
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const int a = mesh.faces(f, 0);
    const int b = mesh.faces(f, 1);
    const int c = mesh.faces(f, 2);
    const int ab = midpoint(a, b);
    const int bc = midpoint(b, c);
    const int ca = midpoint(c, a);
    op.refined_faces.row(4 * f + 0) << a, ab, ca;
    op.refined_faces.row(4 * f + 1) << ab, b, bc;
    op.refined_faces.row(4 * f + 2) << ca, bc, c;
    op.refined_faces.row(4 * f + 3) << ab, bc, ca;
  }
  return op;
}

TriangleMesh apply_subdivision(const SubdivisionOperator& op,
                               const TriangleMesh& mesh) {
  if (mesh.vertex_count() != op.coarse_vertex_count()) {
    throw ArgumentError("mesh has " + std::to_string(mesh.vertex_count()) +
                        " vertices, operator expects " +
                        std::to_string(op.coarse_vertex_count()));
  }
  TriangleMesh refined;
  refined.vertices = op.matrix * mesh.vertices;
  refined.faces = op.refined_faces;
  return refined;
}

Eigen::MatrixXd transfer_parameters(const SubdivisionOperator& op,
                                    const Eigen::MatrixXd& params) {
  if (params.cols() != op.coarse_vertex_count()) {
    throw ArgumentError("parameter matrix has " + std::to_string(params.cols()) +
                        " columns, operator expects " +
                        std::to_string(op.coarse_vertex_count()));
  }
  return params * op.matrix.transpose();
}

Eigen::MatrixX3d transfer_field(const SubdivisionOperator& op,
                                const Eigen::MatrixX3d& field) {
  if (field.rows() != op.coarse_vertex_count()) {
    throw ArgumentError("field has " + std::to_string(field.rows()) +
                        " rows, operator expects " +
                        std::to_string(op.coarse_vertex_count()));
  }
  return op.matrix * field;
}

}  // namespace meshspectra
