#include "meshspectra/metrics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "meshspectra/errors.hpp"
#include "meshspectra/kernels.hpp"
#include "meshspectra/surface.hpp"

namespace meshspectra {
namespace {

constexpr double kEpsilon = 1e-8;
constexpr double kSnrCap = 8.0;  // = -log10(kEpsilon)

void check_same_shape(const Eigen::MatrixX3d& a, const Eigen::MatrixX3d& b,
                      const char* what) {
  if (a.rows() != b.rows()) {
    throw ArgumentError(std::string(what) + ": shapes differ (" +
                        std::to_string(a.rows()) + " vs " +
                        std::to_string(b.rows()) + " rows)");
  }
}

double mean_row_distance(const Eigen::MatrixX3d& a, const Eigen::MatrixX3d& b) {
  const auto n = static_cast<std::size_t>(a.rows());
  Eigen::VectorXd distances(a.rows());
  kernels::norms3_diff(a.col(0).data(), a.col(1).data(), a.col(2).data(),
                       b.col(0).data(), b.col(1).data(), b.col(2).data(), n,
                       distances.data());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < distances.size(); ++i) sum += distances[i];
  return sum / static_cast<double>(n);
}

void require_full_basis(const SpectralBasis& basis, const char* what) {
  if (basis.mode != BasisMode::full) {
    throw ArgumentError(std::string(what) +
                        " sums over all frequency components and needs a "
                        "full basis");
  }
}

struct FrequencyNorms {
  Eigen::MatrixX3d pred_coeffs;
  Eigen::MatrixX3d gt_coeffs;
  Eigen::VectorXd pred_norm;
  Eigen::VectorXd gt_norm;
  Eigen::VectorXd diff_norm;
};

FrequencyNorms frequency_norms(const SpectralBasis& basis,
                               const Eigen::MatrixX3d& predicted,
                               const Eigen::MatrixX3d& ground_truth) {
  FrequencyNorms out;
  out.pred_coeffs = gft(basis, predicted).values;
  out.gt_coeffs = gft(basis, ground_truth).values;
  const auto f = static_cast<std::size_t>(out.pred_coeffs.rows());
  out.pred_norm.resize(out.pred_coeffs.rows());
  out.gt_norm.resize(out.pred_coeffs.rows());
  out.diff_norm.resize(out.pred_coeffs.rows());
  kernels::norms3(out.pred_coeffs.col(0).data(), out.pred_coeffs.col(1).data(),
                  out.pred_coeffs.col(2).data(), f, out.pred_norm.data());
  kernels::norms3(out.gt_coeffs.col(0).data(), out.gt_coeffs.col(1).data(),
                  out.gt_coeffs.col(2).data(), f, out.gt_norm.data());
  kernels::norms3_diff(out.pred_coeffs.col(0).data(),
                       out.pred_coeffs.col(1).data(),
                       out.pred_coeffs.col(2).data(),
                       out.gt_coeffs.col(0).data(), out.gt_coeffs.col(1).data(),
                       out.gt_coeffs.col(2).data(), f, out.diff_norm.data());
  return out;
}

}  // namespace

double per_vertex_error(const Eigen::MatrixX3d& predicted,
                        const Eigen::MatrixX3d& ground_truth) {
  check_same_shape(predicted, ground_truth, "per_vertex_error");
  if (predicted.rows() == 0) throw ArgumentError("per_vertex_error: empty input");
  return mean_row_distance(predicted, ground_truth);
}

double mpjpe(const Eigen::MatrixX3d& predicted_joints,
             const Eigen::MatrixX3d& ground_truth_joints) {
  check_same_shape(predicted_joints, ground_truth_joints, "mpjpe");
  if (predicted_joints.rows() == 0) throw ArgumentError("mpjpe: empty input");
  return mean_row_distance(predicted_joints, ground_truth_joints);
}

double chamfer_distance(const TriangleMesh& a, const TriangleMesh& b,
                        ChamferMode mode) {
  if (a.vertex_count() == 0 || b.vertex_count() == 0) {
    throw ArgumentError("chamfer_distance: empty vertex set");
  }

  auto one_sided_vertex = [](const TriangleMesh& from, const TriangleMesh& to) {
    const auto n_to = static_cast<std::size_t>(to.vertex_count());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < from.vertex_count(); ++i) {
      const auto hit = kernels::nearest_point(
          to.vertices.col(0).data(), to.vertices.col(1).data(),
          to.vertices.col(2).data(), n_to, from.vertices(i, 0),
          from.vertices(i, 1), from.vertices(i, 2));
      sum += std::sqrt(hit.dist_sq);
    }
    return sum / static_cast<double>(from.vertex_count());
  };

  if (mode == ChamferMode::vertex_to_vertex) {
    return 0.5 * (one_sided_vertex(a, b) + one_sided_vertex(b, a));
  }

  if (a.face_count() == 0 || b.face_count() == 0) {
    throw ArgumentError("chamfer_distance: surface mode needs faces on both meshes");
  }
  const SurfaceIndex index_b(b);
  const SurfaceIndex index_a(a);
  auto one_sided_surface = [](const TriangleMesh& from,
                              const SurfaceIndex& to) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < from.vertex_count(); ++i) {
      sum += to.closest(from.vertices.row(i).transpose()).distance;
    }
    return sum / static_cast<double>(from.vertex_count());
  };
  return 0.5 * (one_sided_surface(a, index_b) + one_sided_surface(b, index_a));
}

double frequency_loss(const SpectralBasis& basis,
                      const Eigen::MatrixX3d& predicted,
                      const Eigen::MatrixX3d& ground_truth, LogBase base) {
  require_full_basis(basis, "frequency_loss");
  check_same_shape(predicted, ground_truth, "frequency_loss");
  const FrequencyNorms norms = frequency_norms(basis, predicted, ground_truth);

  const Eigen::Index f_count = norms.pred_norm.size();
  double sum = 0.0;
  for (Eigen::Index f = 0; f < f_count; ++f) {
    const double numerator = norms.diff_norm[f] * norms.diff_norm[f];
    const double denominator =
        norms.pred_norm[f] * norms.gt_norm[f] + kEpsilon;
    sum += std::log1p(numerator / denominator);
  }
  if (base == LogBase::base10) sum /= std::numbers::ln10;
  return sum / static_cast<double>(f_count);
}

Eigen::MatrixX3d frequency_loss_gradient(const SpectralBasis& basis,
                                         const Eigen::MatrixX3d& predicted,
                                         const Eigen::MatrixX3d& ground_truth,
                                         LogBase base) {
  require_full_basis(basis, "frequency_loss_gradient");
  check_same_shape(predicted, ground_truth, "frequency_loss_gradient");
  const FrequencyNorms norms = frequency_norms(basis, predicted, ground_truth);

  const Eigen::Index f_count = norms.pred_norm.size();
  double prefactor = 1.0 / static_cast<double>(f_count);
  if (base == LogBase::base10) prefactor /= std::numbers::ln10;

  // Per-frequency chain rule. With e = c_pred - c_gt, D = |c_pred||c_gt| + eps
  // and r = |e|^2 / D:
  //   d term / d c_pred = (2 e D - |e|^2 |c_gt| c_pred / |c_pred|) / D^2
  //                       * 1 / (r + 1)
  // The |c_pred| = 0 point is non-differentiable; its direction term is
  // dropped there (a subgradient choice).
  Eigen::MatrixX3d coeff_grad(f_count, 3);
  for (Eigen::Index f = 0; f < f_count; ++f) {
    const Eigen::RowVector3d e =
        norms.pred_coeffs.row(f) - norms.gt_coeffs.row(f);
    const double na = norms.pred_norm[f];
    const double nb = norms.gt_norm[f];
    const double err_sq = norms.diff_norm[f] * norms.diff_norm[f];
    const double denom = na * nb + kEpsilon;
    const double ratio = err_sq / denom;

    Eigen::RowVector3d d_ratio = 2.0 * e / denom;
    if (na > 0.0) {
      d_ratio -= (err_sq * nb / (denom * denom * na)) * norms.pred_coeffs.row(f);
    }
    coeff_grad.row(f) = (prefactor / (ratio + 1.0)) * d_ratio;
  }
  return basis.eigenvectors * coeff_grad;
}

TotalLossBreakdown total_loss(const std::vector<LevelData>& levels,
                              const Eigen::MatrixX3d& predicted_joints,
                              const Eigen::MatrixX3d& ground_truth_joints,
                              const LossWeights& weights, LogBase base) {
  if (levels.size() != 3) {
    throw ArgumentError("total_loss needs exactly 3 resolution levels, got " +
                        std::to_string(levels.size()));
  }
  for (double w : {weights.lambda_j, weights.lambda_v[0], weights.lambda_v[1],
                   weights.lambda_v[2], weights.lambda_f[0], weights.lambda_f[1],
                   weights.lambda_f[2]}) {
    if (w < 0.0) throw ArgumentError("loss weights must be non-negative");
  }

  TotalLossBreakdown breakdown;
  breakdown.joint_term =
      weights.lambda_j * mpjpe(predicted_joints, ground_truth_joints);
  breakdown.total = breakdown.joint_term;
  for (std::size_t l = 0; l < 3; ++l) {
    const LevelData& level = levels[l];
    if (level.basis == nullptr) {
      throw ArgumentError("total_loss: level " + std::to_string(l + 1) +
                          " has no basis");
    }
    breakdown.vertex_terms[l] =
        weights.lambda_v[l] *
        per_vertex_error(level.predicted, level.ground_truth);
    breakdown.frequency_terms[l] =
        weights.lambda_f[l] *
        frequency_loss(*level.basis, level.predicted, level.ground_truth, base);
    breakdown.total += breakdown.vertex_terms[l] + breakdown.frequency_terms[l];
  }
  return breakdown;
}

MsnrReport msnr(const SpectralBasis& basis, const Eigen::MatrixX3d& predicted,
                const Eigen::MatrixX3d& ground_truth) {
  require_full_basis(basis, "msnr");
  check_same_shape(predicted, ground_truth, "msnr");
  const FrequencyNorms norms = frequency_norms(basis, predicted, ground_truth);

  const Eigen::Index f_count = norms.pred_norm.size();
  MsnrReport report;
  report.per_frequency.resize(static_cast<std::size_t>(f_count));
  double sum = 0.0;
  for (Eigen::Index f = 0; f < f_count; ++f) {
    double s;
    if (norms.diff_norm[f] == 0.0) {
      // Exact-zero error is infinite SNR; it sits at the cap, which keeps
      // msnr(V, V) at exactly 8 regardless of per-component amplitude.
      s = kSnrCap;
      ++report.clamp_count;
    } else {
      s = std::log10(norms.pred_norm[f] / (norms.diff_norm[f] + kEpsilon));
      if (s >= kSnrCap) {
        s = kSnrCap;
        ++report.clamp_count;
      } else if (s < -kSnrCap) {
        s = -kSnrCap;  // zero-signal floor
      }
    }
    report.per_frequency[static_cast<std::size_t>(f)] = s;
    sum += s;
  }
  report.mean = sum / static_cast<double>(f_count);
  return report;
}

}  // namespace meshspectra
