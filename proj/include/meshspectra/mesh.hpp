#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

namespace meshspectra {

/// Triangle mesh: vertex positions in millimetres plus 0-based index
/// triples. The universal geometric carrier for every module.
struct TriangleMesh {
  Eigen::MatrixX3d vertices;
  Eigen::MatrixX3i faces;

  Eigen::Index vertex_count() const { return vertices.rows(); }
  Eigen::Index face_count() const { return faces.rows(); }
};

/// Undirected vertex graph of a mesh. Edges are stored as (i, j) with
/// i < j, lexicographically sorted and deduplicated, so the edge order
/// (and everything derived from it, like subdivision vertex numbering)
/// is face-order invariant.
struct MeshGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;

  Eigen::Index edge_count() const {
    return static_cast<Eigen::Index>(edges.size());
  }
};

struct ValidationReport {
  int euler_characteristic = 0;
  int boundary_edge_count = 0;
  int non_manifold_edge_count = 0;
  int connected_component_count = 0;
};

/// Throws StructuralError on out-of-range face indices or faces that
/// repeat a vertex. Used by parsers and fixture builders.
void check_mesh(const TriangleMesh& mesh);

/// Deduplicated undirected edge set of all faces.
MeshGraph build_graph(const TriangleMesh& mesh);

/// Exact topology counts: chi = V - E + F, boundary edges (one incident
/// face), non-manifold edges (more than two), connected components.
/// Non-manifold meshes are reported, not rejected.
ValidationReport validate(const TriangleMesh& mesh);

/// 64-bit content hash over vertices and faces, for provenance sidecars.
std::uint64_t content_hash(const TriangleMesh& mesh);

}  // namespace meshspectra
