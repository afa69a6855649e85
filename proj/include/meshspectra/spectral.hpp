#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <vector>

#include "meshspectra/mesh.hpp"

namespace meshspectra {

/// Combinatorial graph Laplacian L = D - A with unit edge weights.
/// Symmetric, rows sum to exactly zero, positive semi-definite.
struct LaplacianMatrix {
  Eigen::SparseMatrix<double> matrix;

  Eigen::Index dimension() const { return matrix.rows(); }
};

LaplacianMatrix build_laplacian(const MeshGraph& graph);

/// Content hash of the Laplacian (dimension + compressed structure),
/// used to key basis cache files.
std::uint64_t content_hash(const LaplacianMatrix& laplacian);

enum class BasisMode { full, partial };

/// Eigenvalues (ascending) and column-orthonormal eigenvectors of a
/// Laplacian; the columns are the graph Fourier basis, low frequency
/// first. Signs are fixed so each column's largest-magnitude entry
/// (lowest index on ties) is positive.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  BasisMode mode = BasisMode::full;

  /// Number of graph vertices.
  Eigen::Index dimension() const { return eigenvectors.rows(); }
  /// Number of retained eigenpairs (== dimension when full).
  Eigen::Index size() const { return eigenvalues.size(); }
};

/// Per-frequency x/y/z coefficients of a vertex signal, row f holding
/// U_f^T x. Units follow the signal (mm for vertex positions).
struct SpectralCoefficients {
  Eigen::MatrixX3d values;
};

/// Inclusive frequency index range.
struct Band {
  int lo = 0;
  int hi = 0;
};

struct DenseSolveOptions {
  Eigen::Index ceiling = 4096;
  bool allow_large = false;
};

/// Full eigendecomposition. Dimensions above the ceiling are refused with
/// ResourceError (carrying the memory estimate) unless allow_large is set,
/// in which case a warning goes to stderr and the solve proceeds.
SpectralBasis eigendecompose_dense(const LaplacianMatrix& laplacian,
                                   const DenseSolveOptions& options = {});

/// k algebraically smallest eigenpairs via Lanczos with full
/// reorthogonalization and deflated restarts. Deterministic for a fixed
/// seed. Throws NumericalError (with the residual) on non-convergence.
SpectralBasis eigendecompose_partial(const LaplacianMatrix& laplacian, int k,
                                     std::uint64_t seed);

/// Forward graph Fourier transform U^T x. Partial bases project.
SpectralCoefficients gft(const SpectralBasis& basis,
                         const Eigen::MatrixX3d& signal);

/// Inverse transform U c. With a partial basis this reconstructs the
/// projection onto the retained subspace.
Eigen::MatrixX3d igft(const SpectralBasis& basis,
                      const SpectralCoefficients& coefficients);

/// Sum over the band of U_f (U_f^T x): the signal's component in the
/// given frequency range. The basis must cover the band.
Eigen::MatrixX3d band_component(const SpectralBasis& basis,
                                const Eigen::MatrixX3d& signal, Band band);

/// Reconstructions over [0, cuts[j]] for strictly ascending cuts.
std::vector<Eigen::MatrixX3d> cumulative_reconstruction(
    const SpectralBasis& basis, const Eigen::MatrixX3d& signal,
    const std::vector<int>& cuts);

struct SpectrumRow {
  int freq_index = 0;
  double eigenvalue = 0.0;
  double amplitude_mm = 0.0;
  double log10_amplitude = 0.0;
};

/// Per-frequency amplitude profile: amplitude is the Euclidean norm of
/// coefficient row f, logged as log10(amplitude + 1e-12).
std::vector<SpectrumRow> spectrum_profile(const SpectralBasis& basis,
                                          const Eigen::MatrixX3d& signal);

}  // namespace meshspectra
