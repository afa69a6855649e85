#include <vector>

#include "meshspectra/hash.hpp"
#include "meshspectra/spectral.hpp"

namespace meshspectra {

LaplacianMatrix build_laplacian(const MeshGraph& graph) {
  const int n = graph.vertex_count;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(graph.edges.size() * 2 + static_cast<std::size_t>(n));

  std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
  for (const auto& [i, j] : graph.edges) {
    triplets.emplace_back(i, j, -1.0);
    triplets.emplace_back(j, i, -1.0);
    degree[static_cast<std::size_t>(i)] += 1.0;
    degree[static_cast<std::size_t>(j)] += 1.0;
  }
  for (int i = 0; i < n; ++i) {
    triplets.emplace_back(i, i, degree[static_cast<std::size_t>(i)]);
  }

  LaplacianMatrix laplacian;
  laplacian.matrix.resize(n, n);
  laplacian.matrix.setFromTriplets(triplets.begin(), triplets.end());
  laplacian.matrix.makeCompressed();
  return laplacian;
}

std::uint64_t content_hash(const LaplacianMatrix& laplacian) {
  Fnv1a64 h;
  h.update("lapl", 4);
  const auto& m = laplacian.matrix;
  h.update_value(static_cast<std::int64_t>(m.rows()));
  h.update_value(static_cast<std::int64_t>(m.nonZeros()));
  for (int col = 0; col < m.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
      h.update_value(static_cast<std::int32_t>(it.row()));
      h.update_value(static_cast<std::int32_t>(it.col()));
      h.update_value(it.value());
    }
  }
  return h.digest();
}

}  // namespace meshspectra
