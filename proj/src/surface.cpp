#include "meshspectra/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meshspectra/errors.hpp"

namespace meshspectra {

// Ericson-style exact point/triangle minimization via Voronoi regions.
Eigen::Vector3d closest_point_on_triangle(const Eigen::Vector3d& point,
                                          const Eigen::Vector3d& a,
                                          const Eigen::Vector3d& b,
                                          const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a;
  const Eigen::Vector3d ac = c - a;
  const Eigen::Vector3d ap = point - a;

  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Eigen::Vector3d bp = point - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return a + v * ab;
  }

  const Eigen::Vector3d cp = point - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return a + w * ac;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + w * (c - b);
  }

  const double denom = va + vb + vc;
  if (!(denom > 0.0)) {
    // Collinear face: minimize over its edges instead.
    auto on_segment = [&](const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
      const Eigen::Vector3d pq = q - p;
      const double len_sq = pq.squaredNorm();
      if (len_sq == 0.0) return p;
      const double t = std::clamp((point - p).dot(pq) / len_sq, 0.0, 1.0);
      return Eigen::Vector3d(p + t * pq);
    };
    Eigen::Vector3d best = on_segment(a, b);
    for (const Eigen::Vector3d& candidate : {on_segment(b, c), on_segment(c, a)}) {
      if ((point - candidate).squaredNorm() < (point - best).squaredNorm()) {
        best = candidate;
      }
    }
    return best;
  }
  const double v = vb / denom;
  const double w = vc / denom;
  return a + v * ab + w * ac;
}

SurfaceIndex::SurfaceIndex(const TriangleMesh& mesh) {
  check_mesh(mesh);
  if (mesh.face_count() == 0) {
    throw ArgumentError("SurfaceIndex needs a mesh with faces");
  }
  triangles_.reserve(static_cast<std::size_t>(mesh.face_count()));
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    triangles_.push_back({mesh.vertices.row(mesh.faces(f, 0)).transpose(),
                          mesh.vertices.row(mesh.faces(f, 1)).transpose(),
                          mesh.vertices.row(mesh.faces(f, 2)).transpose(), f});
  }
  nodes_.reserve(triangles_.size() * 2);
  build(0, static_cast<int>(triangles_.size()));
}

int SurfaceIndex::build(int begin, int end) {
  Node node;
  node.lower = Eigen::Vector3d::Constant(std::numeric_limits<double>::max());
  node.upper = Eigen::Vector3d::Constant(std::numeric_limits<double>::lowest());
  for (int i = begin; i < end; ++i) {
    const Triangle& t = triangles_[static_cast<std::size_t>(i)];
    node.lower = node.lower.cwiseMin(t.a).cwiseMin(t.b).cwiseMin(t.c);
    node.upper = node.upper.cwiseMax(t.a).cwiseMax(t.b).cwiseMax(t.c);
  }

  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(node);

  if (end - begin <= 4) {
    nodes_[static_cast<std::size_t>(index)].left = begin;
    nodes_[static_cast<std::size_t>(index)].count = end - begin;
    return index;
  }

  Eigen::Index axis;
  (node.upper - node.lower).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(triangles_.begin() + begin, triangles_.begin() + mid,
                   triangles_.begin() + end,
                   [axis](const Triangle& lhs, const Triangle& rhs) {
                     const double lc = lhs.a[axis] + lhs.b[axis] + lhs.c[axis];
                     const double rc = rhs.a[axis] + rhs.b[axis] + rhs.c[axis];
                     if (lc != rc) return lc < rc;
                     return lhs.face < rhs.face;  // deterministic ordering
                   });

  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<std::size_t>(index)].left = left;
  nodes_[static_cast<std::size_t>(index)].right = right;
  nodes_[static_cast<std::size_t>(index)].count = 0;
  return index;
}

namespace {

double aabb_dist_sq(const Eigen::Vector3d& lower, const Eigen::Vector3d& upper,
                    const Eigen::Vector3d& q) {
  double d2 = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    double d = 0.0;
    if (q[axis] < lower[axis]) d = lower[axis] - q[axis];
    if (q[axis] > upper[axis]) d = q[axis] - upper[axis];
    d2 += d * d;
  }
  return d2;
}

}  // namespace

SurfaceIndex::Result SurfaceIndex::closest(const Eigen::Vector3d& query) const {
  Result best;
  double best_d2 = std::numeric_limits<double>::max();

  int stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
    if (aabb_dist_sq(node.lower, node.upper, query) >= best_d2) continue;

    if (node.count > 0) {
      for (int i = node.left; i < node.left + node.count; ++i) {
        const Triangle& t = triangles_[static_cast<std::size_t>(i)];
        const Eigen::Vector3d p = closest_point_on_triangle(query, t.a, t.b, t.c);
        const double d2 = (query - p).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best.point = p;
          best.face = t.face;
        }
      }
      continue;
    }

    // Nearer child gets popped first.
    const int children[2] = {node.left, node.right};
    const double d_left =
        aabb_dist_sq(nodes_[static_cast<std::size_t>(node.left)].lower,
                     nodes_[static_cast<std::size_t>(node.left)].upper, query);
    const double d_right =
        aabb_dist_sq(nodes_[static_cast<std::size_t>(node.right)].lower,
                     nodes_[static_cast<std::size_t>(node.right)].upper, query);
    const int near = d_left <= d_right ? 0 : 1;
    stack[top++] = children[1 - near];
    stack[top++] = children[near];
  }

  best.distance = std::sqrt(best_d2);
  return best;
}

TriangleMesh snap_to_surface(const TriangleMesh& template_mesh,
                             const TriangleMesh& target) {
  check_mesh(template_mesh);
  const SurfaceIndex index(target);

  TriangleMesh snapped;
  snapped.faces = template_mesh.faces;
  snapped.vertices.resize(template_mesh.vertex_count(), 3);
  for (Eigen::Index v = 0; v < template_mesh.vertex_count(); ++v) {
    snapped.vertices.row(v) =
        index.closest(template_mesh.vertices.row(v).transpose()).point;
  }
  return snapped;
}

TriangleMesh masked_smooth(const TriangleMesh& mesh,
                           const std::vector<bool>& mask, int iterations,
                           double factor) {
  check_mesh(mesh);
  if (static_cast<Eigen::Index>(mask.size()) != mesh.vertex_count()) {
    throw ArgumentError("mask length must equal the vertex count");
  }
  if (!(factor > 0.0 && factor <= 1.0)) {
    throw ArgumentError("smoothing factor must lie in (0, 1]");
  }
  if (iterations < 0) throw ArgumentError("iterations must be non-negative");

  const MeshGraph graph = build_graph(mesh);
  std::vector<std::vector<int>> neighbors(
      static_cast<std::size_t>(graph.vertex_count));
  for (const auto& [i, j] : graph.edges) {
    neighbors[static_cast<std::size_t>(i)].push_back(j);
    neighbors[static_cast<std::size_t>(j)].push_back(i);
  }

  TriangleMesh smoothed = mesh;
  Eigen::MatrixX3d next = smoothed.vertices;
  for (int iter = 0; iter < iterations; ++iter) {
    for (Eigen::Index v = 0; v < smoothed.vertex_count(); ++v) {
      if (!mask[static_cast<std::size_t>(v)]) continue;
      const auto& ring = neighbors[static_cast<std::size_t>(v)];
      if (ring.empty()) continue;
      Eigen::RowVector3d mean = Eigen::RowVector3d::Zero();
      for (int u : ring) mean += smoothed.vertices.row(u);
      mean /= static_cast<double>(ring.size());
      next.row(v) =
          smoothed.vertices.row(v) + factor * (mean - smoothed.vertices.row(v));
    }
    smoothed.vertices.swap(next);
    next = smoothed.vertices;
  }
  return smoothed;
}

}  // namespace meshspectra
