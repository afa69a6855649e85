#pragma once

#include <vector>

#include "meshspectra/mesh.hpp"

namespace meshspectra {

/// AABB-tree over a mesh's triangles for exact nearest point-on-surface
/// queries. The tree only prunes; the per-triangle minimization is exact,
/// so results match an exhaustive scan over all faces. Immutable after
/// construction and safe for concurrent queries.
class SurfaceIndex {
public:
  explicit SurfaceIndex(const TriangleMesh& mesh);

  struct Result {
    Eigen::Vector3d point;
    double distance = 0.0;
    Eigen::Index face = -1;
  };

  Result closest(const Eigen::Vector3d& query) const;

  Eigen::Index face_count() const {
    return static_cast<Eigen::Index>(triangles_.size());
  }

private:
  struct Node {
    Eigen::Vector3d lower;
    Eigen::Vector3d upper;
    int left = -1;    // internal: child node; leaf: first triangle
    int right = -1;   // internal: child node; leaf: -1
    int count = 0;    // leaf triangle count, 0 for internal nodes
  };
  struct Triangle {
    Eigen::Vector3d a, b, c;
    Eigen::Index face;
  };

  int build(int begin, int end);
  std::vector<Triangle> triangles_;
  std::vector<Node> nodes_;
};

/// Exact closest point on a single triangle.
Eigen::Vector3d closest_point_on_triangle(const Eigen::Vector3d& point,
                                          const Eigen::Vector3d& a,
                                          const Eigen::Vector3d& b,
                                          const Eigen::Vector3d& c);

/// Replaces every template vertex with its closest point on the target
/// surface, keeping the template connectivity.
TriangleMesh snap_to_surface(const TriangleMesh& template_mesh,
                             const TriangleMesh& target);

/// Moves masked vertices toward their one-ring average:
/// v += factor * (mean(neighbors) - v), simultaneously, for the given
/// number of iterations. Unmasked vertices never move. factor must lie
/// in (0, 1].
TriangleMesh masked_smooth(const TriangleMesh& mesh,
                           const std::vector<bool>& mask, int iterations,
                           double factor);

}  // namespace meshspectra
