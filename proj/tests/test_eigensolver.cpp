#include <doctest.h>

#include <Eigen/Dense>

#include "meshspectra/errors.hpp"
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

void check_basis_invariants(const LaplacianMatrix& laplacian,
                            const SpectralBasis& basis) {
  // Non-decreasing eigenvalues; PSD up to roundoff.
  for (Eigen::Index i = 1; i < basis.size(); ++i) {
    CHECK(basis.eigenvalues[i] >= basis.eigenvalues[i - 1]);
  }
  CHECK(basis.eigenvalues[0] >= -1e-9);
  CHECK(basis.eigenvalues[0] <= 1e-8);

  const Eigen::MatrixXd gram =
      basis.eigenvectors.transpose() * basis.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(basis.size(), basis.size()))
            .cwiseAbs()
            .maxCoeff() <= 1e-8);

  const double lambda_max = basis.eigenvalues[basis.size() - 1];
  const double tol = 1e-8 * std::max(1.0, lambda_max);
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const Eigen::VectorXd residual =
        laplacian.matrix * basis.eigenvectors.col(i) -
        basis.eigenvalues[i] * basis.eigenvectors.col(i);
    CHECK(residual.norm() <= tol);
  }
}

}  // namespace

TEST_CASE("dense: K3 spectrum is {0, 3, 3}") {
  const LaplacianMatrix laplacian = build_laplacian(k3());
  const SpectralBasis basis = eigendecompose_dense(laplacian);
  CHECK(basis.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(basis.eigenvalues[1] == doctest::Approx(3.0));
  CHECK(basis.eigenvalues[2] == doctest::Approx(3.0));
  check_basis_invariants(laplacian, basis);
}

TEST_CASE("dense: 3-path spectrum is {0, 1, 3}") {
  const LaplacianMatrix laplacian = build_laplacian(path3());
  const SpectralBasis basis = eigendecompose_dense(laplacian);
  CHECK(basis.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(basis.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(basis.eigenvalues[2] == doctest::Approx(3.0));
  check_basis_invariants(laplacian, basis);
}

TEST_CASE("dense: icosphere level 1 has a triple second eigenvalue") {
  const LaplacianMatrix laplacian =
      build_laplacian(build_graph(make_icosphere(1, 10.0)));
  const SpectralBasis basis = eigendecompose_dense(laplacian);
  CHECK(basis.eigenvalues[0] < 1e-10);
  CHECK(basis.eigenvalues[1] > 0.0);
  CHECK(std::abs(basis.eigenvalues[2] - basis.eigenvalues[1]) <= 1e-8);
  CHECK(std::abs(basis.eigenvalues[3] - basis.eigenvalues[1]) <= 1e-8);
  CHECK(basis.eigenvalues[4] - basis.eigenvalues[3] > 1e-6);
  check_basis_invariants(laplacian, basis);
}

TEST_CASE("dense: connected graph has exactly one near-zero eigenvalue, "
          "constant eigenvector") {
  const LaplacianMatrix laplacian =
      build_laplacian(build_graph(make_disc_fixture(60, 100, 18)));
  const SpectralBasis basis = eigendecompose_dense(laplacian);
  CHECK(basis.eigenvalues[0] <= 1e-8);
  CHECK(basis.eigenvalues[1] > 1e-8);
  const Eigen::VectorXd& constant = basis.eigenvectors.col(0);
  CHECK((constant.array() - constant[0]).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("dense: ceiling guard") {
  const LaplacianMatrix laplacian =
      build_laplacian(build_graph(make_icosphere(1, 10.0)));
  DenseSolveOptions options;
  options.ceiling = 10;
  CHECK_THROWS_AS(eigendecompose_dense(laplacian, options), ResourceError);
  options.allow_large = true;
  CHECK_NOTHROW(eigendecompose_dense(laplacian, options));
}

TEST_CASE("dense: deterministic, sign-fixed output") {
  const LaplacianMatrix laplacian =
      build_laplacian(build_graph(make_disc_fixture(40, 60, 18)));
  const SpectralBasis a = eigendecompose_dense(laplacian);
  const SpectralBasis b = eigendecompose_dense(laplacian);
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  // Sign convention: the largest-magnitude entry of each column is positive.
  for (Eigen::Index col = 0; col < a.size(); ++col) {
    Eigen::Index lead;
    a.eigenvectors.col(col).cwiseAbs().maxCoeff(&lead);
    CHECK(a.eigenvectors(lead, col) > 0.0);
  }
}

TEST_CASE("partial: K3 k=1 finds the constant eigenvector") {
  const LaplacianMatrix laplacian = build_laplacian(k3());
  const SpectralBasis basis = eigendecompose_partial(laplacian, 1, 7);
  CHECK(basis.mode == BasisMode::partial);
  CHECK(basis.size() == 1);
  CHECK(std::abs(basis.eigenvalues[0]) <= 1e-9);
  CHECK((basis.eigenvectors.col(0).array() - 1.0 / std::sqrt(3.0))
            .abs()
            .maxCoeff() <= 1e-9);
}

TEST_CASE("partial: 3-path k=2 is {0, 1}") {
  const SpectralBasis basis =
      eigendecompose_partial(build_laplacian(path3()), 2, 11);
  CHECK(basis.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(basis.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("partial: argument guards") {
  const LaplacianMatrix laplacian = build_laplacian(k3());
  CHECK_THROWS_AS(eigendecompose_partial(laplacian, 0, 1), ArgumentError);
  CHECK_THROWS_AS(eigendecompose_partial(laplacian, 3, 1), ArgumentError);
}

TEST_CASE("partial agrees with dense on small fixtures, multiplicities "
          "included") {
  struct Case {
    TriangleMesh mesh;
    int k;
  };
  const Case cases[] = {
      {make_icosphere(0, 10.0), 8},
      {make_icosphere(1, 10.0), 20},
      {make_icosphere(2, 10.0), 50},
      {make_disc_fixture(150, 280, 18), 40},
  };
  for (const auto& c : cases) {
    const LaplacianMatrix laplacian = build_laplacian(build_graph(c.mesh));
    const SpectralBasis dense = eigendecompose_dense(laplacian);
    const SpectralBasis partial = eigendecompose_partial(laplacian, c.k, 12345);
    check_basis_invariants(laplacian, partial);

    REQUIRE(partial.size() == c.k);
    for (int i = 0; i < c.k; ++i) {
      CHECK(std::abs(partial.eigenvalues[i] - dense.eigenvalues[i]) <= 1e-6);
    }

    // Subspace angle against the dense solver, restricted to the largest
    // cluster-closed prefix (the subspace of a split degenerate cluster is
    // not well defined).
    int closed = c.k;
    while (closed > 0 &&
           dense.eigenvalues[closed] - dense.eigenvalues[closed - 1] < 1e-6) {
      --closed;
    }
    if (closed > 0) {
      const Eigen::MatrixXd overlap =
          partial.eigenvectors.leftCols(closed).transpose() *
          dense.eigenvectors.leftCols(closed);
      const Eigen::VectorXd singular =
          Eigen::JacobiSVD<Eigen::MatrixXd>(overlap).singularValues();
      const double max_angle =
          std::acos(std::min(1.0, singular.minCoeff()));
      CHECK(max_angle <= 1e-5);
    }
  }
}

TEST_CASE("partial: deterministic for a fixed seed") {
  const LaplacianMatrix laplacian =
      build_laplacian(build_graph(make_icosphere(1, 10.0)));
  const SpectralBasis a = eigendecompose_partial(laplacian, 10, 99);
  const SpectralBasis b = eigendecompose_partial(laplacian, 10, 99);
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}
