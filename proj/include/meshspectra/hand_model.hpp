#pragma once

#include <filesystem>
#include <vector>

#include "meshspectra/mesh.hpp"

namespace meshspectra {

/// Generic parametric hand model: rest-pose template, per-joint skinning
/// weights, linear shape / pose blendshape fields, a per-vertex residual
/// displacement field, and a joint hierarchy. Holds any MANO-like asset;
/// tests use synthetic rigs.
struct HandModel {
  TriangleMesh template_mesh;
  Eigen::MatrixXd skinning_weights;             // joints x vertices
  std::vector<Eigen::MatrixX3d> shape_basis;    // per-coefficient N x 3 fields
  std::vector<Eigen::MatrixX3d> pose_basis;
  Eigen::MatrixX3d residual;                    // N x 3, mm
  Eigen::MatrixX3d joint_rest_positions;        // J x 3, mm
  std::vector<int> joint_parents;               // -1 marks the root

  Eigen::Index joint_count() const { return joint_rest_positions.rows(); }
  Eigen::Index vertex_count() const { return template_mesh.vertex_count(); }
};

struct Pose {
  std::vector<Eigen::Matrix3d> joint_rotations;  // one per joint, local
  Eigen::Vector3d root_translation = Eigen::Vector3d::Zero();
  std::vector<double> shape_coeffs;
  std::vector<double> pose_coeffs;
};

/// Checks every HandModel invariant: dimensions line up, skinning-weight
/// columns are non-negative and sum to 1 within 1e-9, the parent graph is
/// a rooted forest. Throws ArgumentError.
void validate_model(const HandModel& model);

/// Subdivides the template `levels` times, transferring all parameter
/// matrices through the same operator at each level. The residual field
/// restarts as zeros at the new resolution; joints are untouched.
HandModel subdivide_model(const HandModel& model, int levels);

/// Rest vertices = template + shape/pose blends + residual, then linear
/// blend skinning by the weight-blended forward-kinematic transforms.
/// Identity rotations with zero coefficients and zero residual reproduce
/// the template exactly.
TriangleMesh pose_model(const HandModel& model, const Pose& pose);

/// JSON container round-trip. template_obj may embed OBJ text (any string
/// containing a newline) or name a path relative to the JSON file.
HandModel load_model_json(const std::filesystem::path& path);
void save_model_json(const HandModel& model, const std::filesystem::path& path);

}  // namespace meshspectra
