#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "meshspectra/errors.hpp"
#include "meshspectra/spectral.hpp"

namespace meshspectra {
namespace {

// Largest-magnitude entry positive, lowest index deciding ties: a fixed
// sign convention so repeated runs emit bit-identical bases.
void fix_column_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
    Eigen::Index lead = 0;
    double lead_mag = -1.0;
    for (Eigen::Index row = 0; row < vectors.rows(); ++row) {
      const double mag = std::abs(vectors(row, col));
      if (mag > lead_mag) {
        lead_mag = mag;
        lead = row;
      }
    }
    if (vectors(lead, col) < 0.0) vectors.col(col) = -vectors.col(col);
  }
}

double gershgorin_upper_bound(const Eigen::SparseMatrix<double>& m) {
  Eigen::VectorXd row_abs = Eigen::VectorXd::Zero(m.rows());
  for (int col = 0; col < m.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
      row_abs[it.row()] += std::abs(it.value());
    }
  }
  return row_abs.size() > 0 ? row_abs.maxCoeff() : 0.0;
}

}  // namespace

SpectralBasis eigendecompose_dense(const LaplacianMatrix& laplacian,
                                   const DenseSolveOptions& options) {
  const Eigen::Index n = laplacian.dimension();
  if (n == 0) throw ArgumentError("empty Laplacian");

  if (n > options.ceiling) {
    const double gib = 3.0 * static_cast<double>(n) * static_cast<double>(n) *
                       8.0 / (1024.0 * 1024.0 * 1024.0);
    char estimate[160];
    std::snprintf(estimate, sizeof(estimate),
                  "dense eigendecomposition of %lld vertices needs about "
                  "%.2f GiB of workspace",
                  static_cast<long long>(n), gib);
    if (!options.allow_large) {
      throw ResourceError(std::string(estimate) + "; exceeds the ceiling of " +
                          std::to_string(options.ceiling) +
                          " (pass allow_large to override)");
    }
    std::fprintf(stderr, "warning: %s\n", estimate);
  }

  const Eigen::MatrixXd dense(laplacian.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense eigendecomposition failed to converge",
                         std::numeric_limits<double>::quiet_NaN());
  }

  SpectralBasis basis;
  basis.eigenvalues = solver.eigenvalues();  // ascending
  basis.eigenvectors = solver.eigenvectors();
  basis.mode = BasisMode::full;
  fix_column_signs(basis.eigenvectors);
  return basis;
}

// Lanczos with full reorthogonalization and deflated restarts.
//
// Each restart runs on the orthogonal complement of the locked eigenvectors,
// locks every Ritz pair whose true residual passes the tolerance, and the
// loop ends once k pairs are locked and the latest run certifies that the
// remaining complement holds nothing smaller. Restarting against the locked
// set is what captures eigenvalue multiplicities: a single Krylov run can
// only see one copy of a degenerate eigenvalue.
SpectralBasis eigendecompose_partial(const LaplacianMatrix& laplacian, int k,
                                     std::uint64_t seed) {
  const Eigen::Index n = laplacian.dimension();
  if (k < 1 || k >= n) {
    throw ArgumentError("partial eigensolver needs 1 <= k < dimension, got k=" +
                        std::to_string(k) + ", n=" + std::to_string(n));
  }

  const Eigen::SparseMatrix<double>& op = laplacian.matrix;
  const double scale = std::max(1.0, gershgorin_upper_bound(op));
  const double lock_tol = 1e-10 * scale;
  const double breakdown_tol = 1e-13 * scale;

  std::mt19937_64 rng(seed);
  auto random_vector = [&]() {
    Eigen::VectorXd v(n);
    // Canonical 53-bit mantissa mapping; independent of the standard
    // library's distribution internals, so seeds reproduce everywhere.
    for (Eigen::Index i = 0; i < n; ++i) {
      v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    }
    return v;
  };

  Eigen::MatrixXd locked(n, 0);
  std::vector<double> locked_values;

  auto orthogonalize_against_locked = [&](Eigen::VectorXd& v) {
    if (locked.cols() > 0) {
      v.noalias() -= locked * (locked.transpose() * v);
      v.noalias() -= locked * (locked.transpose() * v);
    }
  };

  const int max_restarts = 60;
  Eigen::Index base_cap = std::max<Eigen::Index>(2 * k + 48, 96);
  double worst_residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < max_restarts; ++restart) {
    const Eigen::Index remaining = n - locked.cols();
    if (remaining == 0) break;

    const Eigen::Index m_cap = std::min(remaining, base_cap);

    Eigen::VectorXd start = random_vector();
    orthogonalize_against_locked(start);
    if (start.norm() < 1e-8) continue;  // unlucky draw, try again
    start.normalize();

    Eigen::MatrixXd q(n, m_cap);
    Eigen::VectorXd alpha(m_cap);
    Eigen::VectorXd beta(m_cap);
    q.col(0) = start;

    Eigen::Index m = 0;
    double last_beta = 0.0;
    bool breakdown = false;
    for (Eigen::Index j = 0; j < m_cap; ++j) {
      Eigen::VectorXd w = op * q.col(j);
      alpha[j] = q.col(j).dot(w);
      w.noalias() -= alpha[j] * q.col(j);
      if (j > 0) w.noalias() -= beta[j - 1] * q.col(j - 1);

      // Full reorthogonalization, twice, against locked vectors and the
      // whole Krylov block.
      for (int pass = 0; pass < 2; ++pass) {
        orthogonalize_against_locked(w);
        auto block = q.leftCols(j + 1);
        w.noalias() -= block * (block.transpose() * w);
      }

      m = j + 1;
      last_beta = w.norm();
      beta[j] = last_beta;
      if (last_beta <= breakdown_tol) {
        breakdown = true;
        break;
      }
      if (j + 1 < m_cap) q.col(j + 1) = w / last_beta;
    }

    // Ritz pairs of the tridiagonal block.
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
    const Eigen::VectorXd theta = small.eigenvalues();
    const Eigen::MatrixXd s = small.eigenvectors();

    double complement_min_certified = std::numeric_limits<double>::infinity();
    bool smallest_certified = false;

    for (Eigen::Index i = 0; i < m; ++i) {
      const double estimate =
          breakdown ? 0.0 : std::abs(last_beta * s(m - 1, i));
      if (estimate > lock_tol) {
        if (i == 0) worst_residual = std::min(worst_residual, estimate);
        continue;
      }
      Eigen::VectorXd y = q.leftCols(m) * s.col(i);
      orthogonalize_against_locked(y);
      const double norm = y.norm();
      if (norm < 0.5) continue;  // collapsed onto the locked space
      y /= norm;
      const double residual = (op * y - theta[i] * y).norm();
      if (residual > 10.0 * lock_tol) {
        if (i == 0) worst_residual = std::min(worst_residual, residual);
        continue;
      }
      locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
      locked.col(locked.cols() - 1) = y;
      locked_values.push_back(theta[i]);
      if (i == 0) {
        smallest_certified = true;
        complement_min_certified = theta[i];
      }
    }

    if (static_cast<int>(locked_values.size()) >= k && smallest_certified) {
      std::vector<double> sorted(locked_values);
      std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
      const double kth = sorted[static_cast<std::size_t>(k - 1)];
      // Anything still unexplored lives in a subspace whose smallest
      // eigenvalue is at least the smallest value this run certified.
      if (complement_min_certified >= kth - 1e-9 * scale) break;
    }
    if (locked.cols() == n) break;

    // Unproductive cap? Lengthen the next run.
    if (!smallest_certified) {
      base_cap = std::min<Eigen::Index>(n, base_cap + base_cap / 2);
    }
  }

  if (static_cast<int>(locked_values.size()) < k) {
    throw NumericalError(
        "Lanczos failed to converge " + std::to_string(k) +
            " eigenpairs within the restart budget",
        worst_residual);
  }

  // k smallest locked pairs, ascending; stable order for equal values.
  std::vector<Eigen::Index> order(locked_values.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = static_cast<Eigen::Index>(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return locked_values[static_cast<std::size_t>(a)] <
                            locked_values[static_cast<std::size_t>(b)];
                   });

  SpectralBasis basis;
  basis.mode = BasisMode::partial;
  basis.eigenvalues.resize(k);
  basis.eigenvectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    basis.eigenvalues[i] =
        locked_values[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    basis.eigenvectors.col(i) = locked.col(order[static_cast<std::size_t>(i)]);
  }
  fix_column_signs(basis.eigenvectors);
  return basis;
}

}  // namespace meshspectra
