#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "meshspectra/mesh.hpp"
#include "meshspectra/spectral.hpp"

namespace meshspectra {

/// How band-limited noise is drawn. `spectral` (the default) draws one
/// uniform value per coefficient per axis inside the band.
/// `spatial_filtered` draws uniform per-vertex displacements and keeps
/// only their projection onto the band. Both are exactly band-limited.
enum class NoiseModel { spectral, spatial_filtered };

/// Band-limited noise: uniform draws in [-max_amplitude, +max_amplitude]
/// (per coefficient or per vertex, see NoiseModel), added to the GFT
/// coefficients. Seeded and fully deterministic.
struct NoiseSpec {
  Band band;
  double max_amplitude = 0.0;  // mm
  std::uint64_t seed = 0;
  NoiseModel model = NoiseModel::spectral;
};

struct OctaveBands {
  std::vector<Band> bands;
  bool canonical = false;
};

/// The eight octave bands of the noise-sensitivity study. For a basis of
/// 12337 or more frequencies this is the canonical set
/// [60,119] ... [7680,12336]; smaller bases get the same octave ladder
/// scaled proportionally (flagged non-canonical). Fewer than 120
/// frequencies cannot hold eight bands and raise ArgumentError.
OctaveBands make_octave_bands(int basis_size);

/// The spectral-domain perturbation drawn by a spectral-model NoiseSpec:
/// an N x 3 coefficient matrix, exactly zero outside the band.
Eigen::MatrixX3d make_noise_coefficients(Eigen::Index basis_size,
                                         const NoiseSpec& spec);

/// Adds the drawn perturbation to the mesh through the inverse transform.
/// Connectivity is untouched; coefficients outside the band are not.
TriangleMesh inject_band_noise(const SpectralBasis& basis,
                               const TriangleMesh& mesh,
                               const NoiseSpec& spec);

struct NoiseSweepRow {
  Band band;
  double max_amplitude = 0.0;
  int trials = 0;
  double mean_mpve = 0.0;
  double mean_msnr = 0.0;
};

struct NoiseSweepReport {
  std::vector<NoiseSweepRow> rows;  // band-major, then amplitude
  std::uint64_t seed = 0;
  std::string mesh_hash;
};

/// Full band x amplitude grid, averaging MPVE and MSNR over `trials`
/// independently seeded injections per cell. Per-cell RNG streams are
/// derived from (seed, band index, amplitude index, trial index), so the
/// grid is reproducible cell by cell.
NoiseSweepReport run_noise_sweep(const TriangleMesh& mesh,
                                 const SpectralBasis& basis,
                                 const std::vector<Band>& bands,
                                 const std::vector<double>& amplitudes,
                                 int trials, std::uint64_t seed,
                                 NoiseModel model = NoiseModel::spectral);

std::string noise_sweep_csv(const NoiseSweepReport& report);

/// Spectrum profile CSV: freq_index,eigenvalue,amplitude_mm,log10_amplitude.
void export_spectrum(const TriangleMesh& mesh, const SpectralBasis& basis,
                     const std::filesystem::path& csv_path);

/// One OBJ per cut (band-limited reconstruction, source connectivity)
/// plus residuals.csv with cut,residual_frobenius_mm, non-increasing.
/// Returns the paths written, OBJs first.
std::vector<std::filesystem::path> export_cumulative_series(
    const TriangleMesh& mesh, const SpectralBasis& basis,
    const std::vector<int>& cuts, const std::filesystem::path& out_dir);

}  // namespace meshspectra
