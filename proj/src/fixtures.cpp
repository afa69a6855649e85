#include "meshspectra/fixtures.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "meshspectra/errors.hpp"

namespace meshspectra {
namespace {

struct MeshBuilder {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Eigen::Vector3i> faces;

  TriangleMesh finish() const {
    TriangleMesh mesh;
    mesh.vertices.resize(static_cast<Eigen::Index>(vertices.size()), 3);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      mesh.vertices.row(static_cast<Eigen::Index>(i)) = vertices[i];
    }
    mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
    for (std::size_t i = 0; i < faces.size(); ++i) {
      mesh.faces.row(static_cast<Eigen::Index>(i)) = faces[i];
    }
    check_mesh(mesh);
    return mesh;
  }
};

MeshBuilder icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  MeshBuilder b;
  b.vertices = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1},
  };
  b.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  return b;
}

}  // namespace

TriangleMesh make_icosphere(int subdivision_level, double radius_mm) {
  if (subdivision_level < 0) {
    throw ArgumentError("icosphere level must be non-negative");
  }
  if (subdivision_level > 5) {
    throw ResourceError("icosphere level " + std::to_string(subdivision_level) +
                        " exceeds the supported maximum of 5 (" +
                        std::to_string(20l << (2 * subdivision_level)) +
                        " faces)");
  }
  if (!(radius_mm > 0.0)) {
    throw ArgumentError("icosphere radius must be positive");
  }

  MeshBuilder b = icosahedron();
  for (int level = 0; level < subdivision_level; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto midpoint_index = [&](int i, int j) {
      const auto key = std::minmax(i, j);
      const auto found = midpoint.find(key);
      if (found != midpoint.end()) return found->second;
      const int idx = static_cast<int>(b.vertices.size());
      b.vertices.push_back(0.5 * (b.vertices[static_cast<std::size_t>(i)] +
                                  b.vertices[static_cast<std::size_t>(j)]));
      midpoint.emplace(key, idx);
      return idx;
    };

    std::vector<Eigen::Vector3i> refined;
    refined.reserve(b.faces.size() * 4);
    for (const auto& face : b.faces) {
      const int a = face[0], c = face[1], e = face[2];
      const int ac = midpoint_index(a, c);
      const int ce = midpoint_index(c, e);
      const int ea = midpoint_index(e, a);
      refined.push_back({a, ac, ea});
      refined.push_back({ac, c, ce});
      refined.push_back({ea, ce, e});
      refined.push_back({ac, ce, ea});
    }
    b.faces = std::move(refined);
  }

  for (auto& v : b.vertices) v *= radius_mm / v.norm();
  return b.finish();
}

TriangleMesh make_disc_fixture(int target_vertices, int target_faces,
                               int target_boundary) {
  const int v = target_vertices;
  const int f = target_faces;
  const int boundary = target_boundary;
  if (boundary < 3 || v < boundary || f != 2 * v - boundary - 2) {
    throw ArgumentError(
        "infeasible disc counts: need faces == 2*vertices - boundary - 2, "
        "boundary >= 3 and vertices >= boundary; got (" + std::to_string(v) +
        ", " + std::to_string(f) + ", " + std::to_string(boundary) + ")");
  }

  const double radius = 50.0;
  MeshBuilder b;
  b.vertices.reserve(static_cast<std::size_t>(v));
  for (int i = 0; i < boundary; ++i) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(i) / boundary;
    b.vertices.push_back({radius * std::cos(angle), radius * std::sin(angle), 0.0});
  }
  // Fan triangulation of the boundary polygon.
  for (int k = 1; k + 1 < boundary; ++k) {
    b.faces.push_back({0, k, k + 1});
  }

  auto area2 = [&](const Eigen::Vector3i& face) {
    const Eigen::Vector3d& p0 = b.vertices[static_cast<std::size_t>(face[0])];
    const Eigen::Vector3d& p1 = b.vertices[static_cast<std::size_t>(face[1])];
    const Eigen::Vector3d& p2 = b.vertices[static_cast<std::size_t>(face[2])];
    return ((p1 - p0).cross(p2 - p0)).squaredNorm();
  };

  // Interior vertices enter by 1->3 centroid splits of the currently
  // largest face (lowest index on ties), which keeps the counts exact:
  // each split adds one vertex and two faces, boundary untouched.
  const int interior = v - boundary;
  for (int added = 0; added < interior; ++added) {
    std::size_t best = 0;
    double best_area = -1.0;
    for (std::size_t i = 0; i < b.faces.size(); ++i) {
      const double a = area2(b.faces[i]);
      if (a > best_area) {
        best_area = a;
        best = i;
      }
    }
    const Eigen::Vector3i face = b.faces[best];
    const int centroid = static_cast<int>(b.vertices.size());
    b.vertices.push_back((b.vertices[static_cast<std::size_t>(face[0])] +
                          b.vertices[static_cast<std::size_t>(face[1])] +
                          b.vertices[static_cast<std::size_t>(face[2])]) /
                         3.0);
    b.faces[best] = {face[0], face[1], centroid};
    b.faces.push_back({face[1], face[2], centroid});
    b.faces.push_back({face[2], face[0], centroid});
  }

  // Relax the interior toward a Tutte-style layout so vertices spread
  // evenly instead of clustering where the splits landed.
  if (interior > 0) {
    std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(v));
    std::map<std::pair<int, int>, bool> seen;
    for (const auto& face : b.faces) {
      for (int k = 0; k < 3; ++k) {
        const int i = face[k];
        const int j = face[(k + 1) % 3];
        const auto key = std::minmax(i, j);
        if (!seen.emplace(key, true).second) continue;
        neighbors[static_cast<std::size_t>(key.first)].push_back(key.second);
        neighbors[static_cast<std::size_t>(key.second)].push_back(key.first);
      }
    }
    for (int iter = 0; iter < 80; ++iter) {
      std::vector<Eigen::Vector3d> next = b.vertices;
      for (int i = boundary; i < v; ++i) {
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        const auto& ring = neighbors[static_cast<std::size_t>(i)];
        for (int j : ring) mean += b.vertices[static_cast<std::size_t>(j)];
        next[static_cast<std::size_t>(i)] =
            mean / static_cast<double>(ring.size());
      }
      b.vertices = std::move(next);
    }
  }

  // Dome lift: all three coordinates carry smooth, non-trivial signal.
  const double dome_height = 0.35 * radius;
  for (auto& p : b.vertices) {
    const double r2 = (p.x() * p.x() + p.y() * p.y()) / (radius * radius);
    p.z() = dome_height * (1.0 - r2);
  }

  return b.finish();
}

}  // namespace meshspectra
