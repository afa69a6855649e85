#include <cmath>
#include <string>

#include "meshspectra/errors.hpp"
#include "meshspectra/kernels.hpp"
#include "meshspectra/spectral.hpp"

namespace meshspectra {
namespace {

void check_band(const SpectralBasis& basis, Band band) {
  if (band.lo < 0 || band.lo > band.hi) {
    throw ArgumentError("invalid band [" + std::to_string(band.lo) + ", " +
                        std::to_string(band.hi) + "]");
  }
  if (band.hi >= basis.size()) {
    throw ArgumentError(
        "band [" + std::to_string(band.lo) + ", " + std::to_string(band.hi) +
        "] not covered by a basis of " + std::to_string(basis.size()) +
        " frequencies");
  }
}

void check_signal(const SpectralBasis& basis, const Eigen::MatrixX3d& signal) {
  if (signal.rows() != basis.dimension()) {
    throw ArgumentError("signal has " + std::to_string(signal.rows()) +
                        " rows, basis expects " +
                        std::to_string(basis.dimension()));
  }
}

}  // namespace

SpectralCoefficients gft(const SpectralBasis& basis,
                         const Eigen::MatrixX3d& signal) {
  check_signal(basis, signal);
  SpectralCoefficients coefficients;
  coefficients.values.noalias() = basis.eigenvectors.transpose() * signal;
  return coefficients;
}

Eigen::MatrixX3d igft(const SpectralBasis& basis,
                      const SpectralCoefficients& coefficients) {
  if (coefficients.values.rows() != basis.size()) {
    throw ArgumentError("coefficient rows (" +
                        std::to_string(coefficients.values.rows()) +
                        ") must match basis size (" +
                        std::to_string(basis.size()) + ")");
  }
  return basis.eigenvectors * coefficients.values;
}

Eigen::MatrixX3d band_component(const SpectralBasis& basis,
                                const Eigen::MatrixX3d& signal, Band band) {
  check_band(basis, band);
  check_signal(basis, signal);
  const auto block = basis.eigenvectors.middleCols(band.lo, band.hi - band.lo + 1);
  return block * (block.transpose() * signal);
}

std::vector<Eigen::MatrixX3d> cumulative_reconstruction(
    const SpectralBasis& basis, const Eigen::MatrixX3d& signal,
    const std::vector<int>& cuts) {
  if (basis.mode != BasisMode::full) {
    throw ArgumentError("cumulative reconstruction requires a full basis");
  }
  check_signal(basis, signal);
  if (cuts.empty()) throw ArgumentError("no cuts given");
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (i > 0 && cuts[i] <= cuts[i - 1]) {
      throw ArgumentError("cuts must be strictly ascending");
    }
  }
  if (cuts.front() < 0 || cuts.back() >= basis.size()) {
    throw ArgumentError("cuts must lie in [0, " +
                        std::to_string(basis.size() - 1) + "]");
  }

  std::vector<Eigen::MatrixX3d> reconstructions;
  reconstructions.reserve(cuts.size());
  Eigen::MatrixX3d running = Eigen::MatrixX3d::Zero(signal.rows(), 3);
  int next_lo = 0;
  for (const int cut : cuts) {
    running += band_component(basis, signal, Band{next_lo, cut});
    next_lo = cut + 1;
    reconstructions.push_back(running);
  }
  return reconstructions;
}

std::vector<SpectrumRow> spectrum_profile(const SpectralBasis& basis,
                                          const Eigen::MatrixX3d& signal) {
  if (basis.mode != BasisMode::full) {
    throw ArgumentError("spectrum profile requires a full basis");
  }
  const SpectralCoefficients coefficients = gft(basis, signal);
  const Eigen::Index f = coefficients.values.rows();

  Eigen::VectorXd amplitudes(f);
  kernels::norms3(coefficients.values.col(0).data(),
                  coefficients.values.col(1).data(),
                  coefficients.values.col(2).data(),
                  static_cast<std::size_t>(f), amplitudes.data());

  std::vector<SpectrumRow> rows(static_cast<std::size_t>(f));
  for (Eigen::Index i = 0; i < f; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    row.freq_index = static_cast<int>(i);
    row.eigenvalue = basis.eigenvalues[i];
    row.amplitude_mm = amplitudes[i];
    // +1e-12 floor keeps exact zeros out of -inf on the log axis.
    row.log10_amplitude = std::log10(amplitudes[i] + 1e-12);
  }
  return rows;
}

}  // namespace meshspectra
