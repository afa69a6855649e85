#include <doctest.h>

#include <Eigen/Dense>

#include "meshspectra/fixtures.hpp"
#include "meshspectra/spectral.hpp"

using namespace meshspectra;

namespace {

MeshGraph k3() {
  MeshGraph graph;
  graph.vertex_count = 3;
  graph.edges = {{0, 1}, {0, 2}, {1, 2}};
  return graph;
}

MeshGraph path3() {
  MeshGraph graph;
  graph.vertex_count = 3;
  graph.edges = {{0, 1}, {1, 2}};
  return graph;
}

}  // namespace

TEST_CASE("K3 Laplacian is diag(2,2,2) with -1 off-diagonals") {
  const Eigen::MatrixXd dense(build_laplacian(k3()).matrix);
  Eigen::MatrixXd expected(3, 3);
  expected << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  CHECK((dense - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("3-path Laplacian rows") {
  const Eigen::MatrixXd dense(build_laplacian(path3()).matrix);
  Eigen::MatrixXd expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK((dense - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Laplacian rows sum to exactly zero and the matrix is symmetric") {
  for (const TriangleMesh& mesh :
       {make_icosphere(1, 10.0), make_disc_fixture(120, 220, 18)}) {
    const LaplacianMatrix laplacian = build_laplacian(build_graph(mesh));
    const Eigen::MatrixXd dense(laplacian.matrix);
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(dense.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
    // Unit weights: off-diagonals 0 or -1, diagonal = degree.
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
      for (Eigen::Index j = 0; j < dense.cols(); ++j) {
        if (i == j) continue;
        CHECK((dense(i, j) == 0.0 || dense(i, j) == -1.0));
      }
    }
  }
}

TEST_CASE("Laplacian is positive semi-definite") {
  const LaplacianMatrix laplacian =
      build_laplacian(build_graph(make_icosphere(1, 10.0)));
  const Eigen::VectorXd eigenvalues =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
          Eigen::MatrixXd(laplacian.matrix))
          .eigenvalues();
  CHECK(eigenvalues.minCoeff() >= -1e-9);
}

TEST_CASE("Laplacian content hash is structure-sensitive") {
  const auto a = build_laplacian(k3());
  const auto b = build_laplacian(path3());
  CHECK(content_hash(a) != content_hash(b));
  CHECK(content_hash(a) == content_hash(build_laplacian(k3())));
}
