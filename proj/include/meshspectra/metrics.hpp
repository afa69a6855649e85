#pragma once

#include <array>
#include <vector>

#include "meshspectra/mesh.hpp"
#include "meshspectra/spectral.hpp"

namespace meshspectra {

/// Logarithm used by the frequency-decomposition loss. The mesh SNR
/// metric always uses log10 (its cap of 8 comes from epsilon = 1e-8).
enum class LogBase { natural, base10 };

/// Mean per-vertex Euclidean error (MPVE), mm.
double per_vertex_error(const Eigen::MatrixX3d& predicted,
                        const Eigen::MatrixX3d& ground_truth);

/// Mean per-joint position error (MPJPE), mm.
double mpjpe(const Eigen::MatrixX3d& predicted_joints,
             const Eigen::MatrixX3d& ground_truth_joints);

enum class ChamferMode { vertex_to_vertex, vertex_to_surface };

/// Symmetric Chamfer distance: mean nearest-neighbor distance in both
/// directions, halved. Surface mode measures point-to-triangle distances
/// instead of point-to-point.
double chamfer_distance(const TriangleMesh& a, const TriangleMesh& b,
                        ChamferMode mode = ChamferMode::vertex_to_vertex);

/// Frequency-decomposition loss: mean over all N frequencies of
/// log(|c_pred - c_gt|^2 / (|c_pred| |c_gt| + eps) + 1), eps = 1e-8.
/// Requires a full basis. Zero iff predicted == ground truth.
double frequency_loss(const SpectralBasis& basis,
                      const Eigen::MatrixX3d& predicted,
                      const Eigen::MatrixX3d& ground_truth,
                      LogBase base = LogBase::natural);

/// Exact analytic gradient of frequency_loss with respect to the
/// prediction. Matches central finite differences to 1e-5 relative.
Eigen::MatrixX3d frequency_loss_gradient(const SpectralBasis& basis,
                                         const Eigen::MatrixX3d& predicted,
                                         const Eigen::MatrixX3d& ground_truth,
                                         LogBase base = LogBase::natural);

struct LossWeights {
  double lambda_j = 1.0;
  std::array<double, 3> lambda_v = {1.0, 1.0, 1.0};
  std::array<double, 3> lambda_f = {60.0, 60.0, 100.0};
};

struct LevelData {
  Eigen::MatrixX3d predicted;
  Eigen::MatrixX3d ground_truth;
  const SpectralBasis* basis = nullptr;
};

struct TotalLossBreakdown {
  double total = 0.0;
  double joint_term = 0.0;
  std::array<double, 3> vertex_terms = {0.0, 0.0, 0.0};
  std::array<double, 3> frequency_terms = {0.0, 0.0, 0.0};
};

/// Weighted total: lambda_J * L_J + sum over the three resolution levels
/// of lambda_v[l] * L_v[l] + lambda_F[l] * L_F[l]. All three levels must
/// be present. The breakdown reports each weighted addend.
TotalLossBreakdown total_loss(const std::vector<LevelData>& levels,
                              const Eigen::MatrixX3d& predicted_joints,
                              const Eigen::MatrixX3d& ground_truth_joints,
                              const LossWeights& weights,
                              LogBase base = LogBase::natural);

struct MsnrReport {
  double mean = 0.0;
  std::vector<double> per_frequency;
  int clamp_count = 0;
};

/// Mean signal-to-noise ratio over frequency components:
/// S_f = log10(|c_pred| / (|c_pred - c_gt| + eps)), eps = 1e-8, clamped
/// into [-8, 8]. A component with exactly zero error sits at the cap, so
/// msnr(V, V) is exactly 8.
MsnrReport msnr(const SpectralBasis& basis, const Eigen::MatrixX3d& predicted,
                const Eigen::MatrixX3d& ground_truth);

}  // namespace meshspectra
