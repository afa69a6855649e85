#include "meshspectra/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "meshspectra/errors.hpp"
#include "meshspectra/hash.hpp"
#include "meshspectra/kernels.hpp"
#include "meshspectra/metrics.hpp"
#include "meshspectra/obj_io.hpp"
#include "meshspectra/text_format.hpp"

namespace meshspectra {
namespace {

// Canonical octave edges for the 12337-frequency study; band k is
// [edge[k], edge[k+1] - 1].
constexpr int kCanonicalEdges[9] = {60,   120,  240,  480, 960,
                                    1920, 3840, 7680, 12337};
constexpr int kCanonicalSize = 12337;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t band_index,
                            std::uint64_t amplitude_index,
                            std::uint64_t trial_index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (band_index + 1));
  h = splitmix64(h ^ (amplitude_index + 1));
  h = splitmix64(h ^ (trial_index + 1));
  return h;
}

}  // namespace

OctaveBands make_octave_bands(int basis_size) {
  if (basis_size < 120) {
    throw ArgumentError("octave bands need at least 120 frequencies, got " +
                        std::to_string(basis_size));
  }

  OctaveBands result;
  if (basis_size >= kCanonicalSize) {
    result.canonical = true;
    for (int k = 0; k < 8; ++k) {
      result.bands.push_back({kCanonicalEdges[k], kCanonicalEdges[k + 1] - 1});
    }
    return result;
  }

  // Scale the edges proportionally, then force them strictly increasing so
  // no band collapses at small sizes.
  result.canonical = false;
  int edges[9];
  for (int k = 0; k < 8; ++k) {
    edges[k] = static_cast<int>(std::lround(
        static_cast<double>(kCanonicalEdges[k]) * basis_size / kCanonicalSize));
  }
  edges[8] = basis_size;
  edges[0] = std::max(edges[0], 1);
  for (int k = 1; k < 9; ++k) edges[k] = std::max(edges[k], edges[k - 1] + 1);
  if (edges[8] != basis_size) {
    throw ArgumentError("basis of " + std::to_string(basis_size) +
                        " frequencies is too small for eight octave bands");
  }
  for (int k = 0; k < 8; ++k) result.bands.push_back({edges[k], edges[k + 1] - 1});
  return result;
}

namespace {

void check_noise_spec(const NoiseSpec& spec, Eigen::Index basis_size) {
  if (spec.max_amplitude < 0.0) {
    throw ArgumentError("noise amplitude must be non-negative");
  }
  if (spec.band.lo < 0 || spec.band.lo > spec.band.hi ||
      spec.band.hi >= basis_size) {
    throw ArgumentError("noise band [" + std::to_string(spec.band.lo) + ", " +
                        std::to_string(spec.band.hi) +
                        "] exceeds a basis of " + std::to_string(basis_size) +
                        " frequencies");
  }
}

// Canonical 53-bit uniform in [-a, a); row-major draw order.
Eigen::MatrixX3d uniform_draws(Eigen::Index rows, double amplitude,
                               std::uint64_t seed) {
  Eigen::MatrixX3d draws(rows, 3);
  std::mt19937_64 rng(seed);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (int axis = 0; axis < 3; ++axis) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      draws(r, axis) = amplitude * (2.0 * u - 1.0);
    }
  }
  return draws;
}

}  // namespace

Eigen::MatrixX3d make_noise_coefficients(Eigen::Index basis_size,
                                         const NoiseSpec& spec) {
  check_noise_spec(spec, basis_size);
  const int width = spec.band.hi - spec.band.lo + 1;
  Eigen::MatrixX3d delta = Eigen::MatrixX3d::Zero(basis_size, 3);
  delta.middleRows(spec.band.lo, width) =
      uniform_draws(width, spec.max_amplitude, spec.seed);
  return delta;
}

TriangleMesh inject_band_noise(const SpectralBasis& basis,
                               const TriangleMesh& mesh,
                               const NoiseSpec& spec) {
  if (basis.mode != BasisMode::full ||
      basis.dimension() != mesh.vertex_count()) {
    throw ArgumentError(
        "band noise needs a full basis matching the mesh vertex count");
  }
  check_noise_spec(spec, basis.size());
  if (spec.max_amplitude == 0.0) {
    return mesh;  // identity, bit for bit
  }

  const int width = spec.band.hi - spec.band.lo + 1;
  const auto band_block = basis.eigenvectors.middleCols(spec.band.lo, width);

  // The band's coefficient perturbation, by either model.
  Eigen::MatrixX3d delta_band;
  if (spec.model == NoiseModel::spectral) {
    delta_band = uniform_draws(width, spec.max_amplitude, spec.seed);
  } else {
    // Per-vertex spatial draws, band-pass filtered: only the projection
    // onto the band survives, so the perturbation stays exactly
    // band-limited.
    delta_band = band_block.transpose() *
                 uniform_draws(mesh.vertex_count(), spec.max_amplitude, spec.seed);
  }

  TriangleMesh noisy;
  noisy.faces = mesh.faces;
  // x + U_band * delta_band: adding the displacement (rather than round-
  // tripping the whole signal) keeps coefficients outside the band exact.
  noisy.vertices = mesh.vertices + band_block * delta_band;
  return noisy;
}

NoiseSweepReport run_noise_sweep(const TriangleMesh& mesh,
                                 const SpectralBasis& basis,
                                 const std::vector<Band>& bands,
                                 const std::vector<double>& amplitudes,
                                 int trials, std::uint64_t seed,
                                 NoiseModel model) {
  if (bands.empty() || amplitudes.empty()) {
    throw ArgumentError("noise sweep needs bands and amplitudes");
  }
  if (trials < 1) throw ArgumentError("noise sweep needs at least one trial");

  NoiseSweepReport report;
  report.seed = seed;
  report.mesh_hash = hash_hex(content_hash(mesh));
  report.rows.reserve(bands.size() * amplitudes.size());

  for (std::size_t bi = 0; bi < bands.size(); ++bi) {
    for (std::size_t ai = 0; ai < amplitudes.size(); ++ai) {
      double mpve_sum = 0.0;
      double msnr_sum = 0.0;
      for (int t = 0; t < trials; ++t) {
        NoiseSpec spec{bands[bi], amplitudes[ai],
                       derive_stream(seed, bi, ai, static_cast<std::uint64_t>(t)),
                       model};
        const TriangleMesh noisy = inject_band_noise(basis, mesh, spec);
        mpve_sum += per_vertex_error(noisy.vertices, mesh.vertices);
        msnr_sum += msnr(basis, noisy.vertices, mesh.vertices).mean;
      }
      report.rows.push_back({bands[bi], amplitudes[ai], trials,
                             mpve_sum / trials, msnr_sum / trials});
    }
  }
  return report;
}

std::string noise_sweep_csv(const NoiseSweepReport& report) {
  std::string csv =
      "band_lo,band_hi,max_amplitude_mm,trials,mean_mpve_mm,mean_msnr\n";
  for (const auto& row : report.rows) {
    csv += std::to_string(row.band.lo) + ',' + std::to_string(row.band.hi) +
           ',' + format_double(row.max_amplitude) + ',' +
           std::to_string(row.trials) + ',' + format_double(row.mean_mpve) +
           ',' + format_double(row.mean_msnr) + '\n';
  }
  return csv;
}

void export_spectrum(const TriangleMesh& mesh, const SpectralBasis& basis,
                     const std::filesystem::path& csv_path) {
  const auto rows = spectrum_profile(basis, mesh.vertices);
  std::string csv = "freq_index,eigenvalue,amplitude_mm,log10_amplitude\n";
  for (const auto& row : rows) {
    csv += std::to_string(row.freq_index) + ',' +
           format_double(row.eigenvalue) + ',' +
           format_double(row.amplitude_mm) + ',' +
           format_double(row.log10_amplitude) + '\n';
  }
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + csv_path.string());
  out << csv;
  if (!out) throw IoError("write failed: " + csv_path.string());
}

std::vector<std::filesystem::path> export_cumulative_series(
    const TriangleMesh& mesh, const SpectralBasis& basis,
    const std::vector<int>& cuts, const std::filesystem::path& out_dir) {
  const auto reconstructions =
      cumulative_reconstruction(basis, mesh.vertices, cuts);

  std::vector<std::filesystem::path> written;
  std::filesystem::create_directories(out_dir);
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    char name[32];
    std::snprintf(name, sizeof(name), "cumulative_%05d.obj", cuts[j]);
    TriangleMesh slice;
    slice.vertices = reconstructions[j];
    slice.faces = mesh.faces;
    const auto path = out_dir / name;
    save_obj(slice, path);
    written.push_back(path);
  }

  // Residuals from coefficient suffix sums (Parseval): adding nonnegative
  // terms keeps the column monotone even in floating point.
  const SpectralCoefficients coefficients = gft(basis, mesh.vertices);
  const Eigen::Index n = coefficients.values.rows();
  Eigen::VectorXd amp_sq(n);
  kernels::norms3(coefficients.values.col(0).data(),
                  coefficients.values.col(1).data(),
                  coefficients.values.col(2).data(),
                  static_cast<std::size_t>(n), amp_sq.data());
  amp_sq = amp_sq.cwiseProduct(amp_sq);

  std::string csv = "cut,residual_frobenius_mm\n";
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    double tail = 0.0;
    for (Eigen::Index f = n - 1; f > cuts[j]; --f) tail += amp_sq[f];
    csv += std::to_string(cuts[j]) + ',' + format_double(std::sqrt(tail)) + '\n';
  }
  const auto csv_path = out_dir / "residuals.csv";
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + csv_path.string());
  out << csv;
  if (!out) throw IoError("write failed: " + csv_path.string());
  written.push_back(csv_path);
  return written;
}

}  // namespace meshspectra
