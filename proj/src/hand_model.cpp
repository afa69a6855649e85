#include "meshspectra/hand_model.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "meshspectra/errors.hpp"
#include "meshspectra/obj_io.hpp"
#include "meshspectra/subdivision.hpp"

namespace meshspectra {

void validate_model(const HandModel& model) {
  check_mesh(model.template_mesh);
  const Eigen::Index n = model.vertex_count();
  const Eigen::Index j = model.joint_count();

  if (model.skinning_weights.rows() != j || model.skinning_weights.cols() != n) {
    throw ArgumentError("skinning weights must be joints x vertices (" +
                        std::to_string(j) + " x " + std::to_string(n) + ")");
  }
  for (Eigen::Index col = 0; col < n; ++col) {
    double sum = 0.0;
    for (Eigen::Index row = 0; row < j; ++row) {
      const double w = model.skinning_weights(row, col);
      if (w < 0.0) {
        throw ArgumentError("negative skinning weight at joint " +
                            std::to_string(row) + ", vertex " +
                            std::to_string(col));
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ArgumentError("skinning weights of vertex " + std::to_string(col) +
                          " sum to " + std::to_string(sum) + ", expected 1");
    }
  }

  for (std::size_t s = 0; s < model.shape_basis.size(); ++s) {
    if (model.shape_basis[s].rows() != n) {
      throw ArgumentError("shape basis field " + std::to_string(s) +
                          " does not match the template vertex count");
    }
  }
  for (std::size_t p = 0; p < model.pose_basis.size(); ++p) {
    if (model.pose_basis[p].rows() != n) {
      throw ArgumentError("pose basis field " + std::to_string(p) +
                          " does not match the template vertex count");
    }
  }
  if (model.residual.rows() != n) {
    throw ArgumentError("residual field does not match the template vertex count");
  }

  if (static_cast<Eigen::Index>(model.joint_parents.size()) != j) {
    throw ArgumentError("joint_parents length must equal the joint count");
  }
  for (Eigen::Index joint = 0; joint < j; ++joint) {
    const int parent = model.joint_parents[static_cast<std::size_t>(joint)];
    if (parent == static_cast<int>(joint) || parent >= static_cast<int>(j) ||
        parent < -1) {
      throw ArgumentError("joint " + std::to_string(joint) +
                          " has invalid parent " + std::to_string(parent));
    }
  }
  // Cycle check: follow parents; a chain longer than J means a loop.
  for (Eigen::Index joint = 0; joint < j; ++joint) {
    int cursor = static_cast<int>(joint);
    for (Eigen::Index steps = 0; cursor != -1; ++steps) {
      if (steps > j) {
        throw ArgumentError("joint hierarchy contains a cycle through joint " +
                            std::to_string(joint));
      }
      cursor = model.joint_parents[static_cast<std::size_t>(cursor)];
    }
  }
}

HandModel subdivide_model(const HandModel& model, int levels) {
  if (levels < 1) throw ArgumentError("subdivision levels must be >= 1");
  validate_model(model);

  HandModel current = model;
  for (int level = 0; level < levels; ++level) {
    const SubdivisionOperator op = build_subdivision_operator(current.template_mesh);
    HandModel next;
    next.template_mesh = apply_subdivision(op, current.template_mesh);
    next.skinning_weights = transfer_parameters(op, current.skinning_weights);
    next.shape_basis.reserve(current.shape_basis.size());
    for (const auto& field : current.shape_basis) {
      next.shape_basis.push_back(transfer_field(op, field));
    }
    next.pose_basis.reserve(current.pose_basis.size());
    for (const auto& field : current.pose_basis) {
      next.pose_basis.push_back(transfer_field(op, field));
    }
    next.residual = Eigen::MatrixX3d::Zero(next.template_mesh.vertex_count(), 3);
    next.joint_rest_positions = current.joint_rest_positions;
    next.joint_parents = current.joint_parents;
    current = std::move(next);
  }
  return current;
}

TriangleMesh pose_model(const HandModel& model, const Pose& pose) {
  validate_model(model);
  const Eigen::Index n = model.vertex_count();
  const Eigen::Index joint_count = model.joint_count();

  if (static_cast<Eigen::Index>(pose.joint_rotations.size()) != joint_count) {
    throw ArgumentError("pose carries " +
                        std::to_string(pose.joint_rotations.size()) +
                        " rotations for " + std::to_string(joint_count) +
                        " joints");
  }
  if (pose.shape_coeffs.size() != model.shape_basis.size()) {
    throw ArgumentError("shape coefficient count does not match the shape basis");
  }
  if (pose.pose_coeffs.size() != model.pose_basis.size()) {
    throw ArgumentError("pose coefficient count does not match the pose basis");
  }
  for (std::size_t j = 0; j < pose.joint_rotations.size(); ++j) {
    const Eigen::Matrix3d& r = pose.joint_rotations[j];
    if ((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() >
            1e-9 ||
        std::abs(r.determinant() - 1.0) > 1e-9) {
      throw ArgumentError("rotation of joint " + std::to_string(j) +
                          " is not a proper orthonormal matrix");
    }
  }

  // Rest-pose vertices with blendshapes and residual applied.
  Eigen::MatrixX3d rest = model.template_mesh.vertices;
  for (std::size_t s = 0; s < model.shape_basis.size(); ++s) {
    rest += pose.shape_coeffs[s] * model.shape_basis[s];
  }
  for (std::size_t p = 0; p < model.pose_basis.size(); ++p) {
    rest += pose.pose_coeffs[p] * model.pose_basis[p];
  }
  rest += model.residual;

  // Forward kinematics. Each joint's world rotation chains through its
  // parents; its posed position keeps the rest offset from the parent.
  std::vector<Eigen::Matrix3d> world_rotation(
      static_cast<std::size_t>(joint_count));
  std::vector<Eigen::Vector3d> posed_position(
      static_cast<std::size_t>(joint_count));
  std::vector<bool> ready(static_cast<std::size_t>(joint_count), false);

  auto resolve = [&](auto&& self, Eigen::Index j) -> void {
    if (ready[static_cast<std::size_t>(j)]) return;
    const int parent = model.joint_parents[static_cast<std::size_t>(j)];
    const Eigen::Vector3d rest_pos = model.joint_rest_positions.row(j);
    if (parent < 0) {
      world_rotation[static_cast<std::size_t>(j)] =
          pose.joint_rotations[static_cast<std::size_t>(j)];
      posed_position[static_cast<std::size_t>(j)] =
          rest_pos + pose.root_translation;
    } else {
      self(self, parent);
      const Eigen::Vector3d parent_rest =
          model.joint_rest_positions.row(parent);
      world_rotation[static_cast<std::size_t>(j)] =
          world_rotation[static_cast<std::size_t>(parent)] *
          pose.joint_rotations[static_cast<std::size_t>(j)];
      posed_position[static_cast<std::size_t>(j)] =
          posed_position[static_cast<std::size_t>(parent)] +
          world_rotation[static_cast<std::size_t>(parent)] *
              (rest_pos - parent_rest);
    }
    ready[static_cast<std::size_t>(j)] = true;
  };
  for (Eigen::Index j = 0; j < joint_count; ++j) resolve(resolve, j);

  // Linear blend skinning: v' = sum_j w_jv (R_j (v - joint_rest_j) + p_j).
  TriangleMesh posed;
  posed.faces = model.template_mesh.faces;
  posed.vertices.resize(n, 3);
  for (Eigen::Index v = 0; v < n; ++v) {
    const Eigen::Vector3d rest_vertex = rest.row(v);
    Eigen::Vector3d blended = Eigen::Vector3d::Zero();
    for (Eigen::Index j = 0; j < joint_count; ++j) {
      const double w = model.skinning_weights(j, v);
      if (w == 0.0) continue;
      const Eigen::Vector3d rest_joint = model.joint_rest_positions.row(j);
      blended += w * (world_rotation[static_cast<std::size_t>(j)] *
                          (rest_vertex - rest_joint) +
                      posed_position[static_cast<std::size_t>(j)]);
    }
    posed.vertices.row(v) = blended;
  }
  return posed;
}

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index cols_expected,
                                 const std::string& what) {
  if (!rows.is_array()) throw ParseError(what + " must be an array of rows");
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(r, cols_expected >= 0 && r == 0 ? cols_expected : 0);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw ParseError(what + " row is not an array");
    if (i == 0) {
      const auto c = static_cast<Eigen::Index>(row.size());
      if (cols_expected >= 0 && c != cols_expected) {
        throw ParseError(what + " rows must have " +
                         std::to_string(cols_expected) + " entries");
      }
      m.resize(r, c);
    }
    if (static_cast<Eigen::Index>(row.size()) != m.cols()) {
      throw ParseError(what + " has ragged rows");
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

}  // namespace

HandModel load_model_json(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) throw IoError("cannot open model JSON: " + path.string());
  json doc;
  try {
    doc = json::parse(stream);
  } catch (const json::parse_error& e) {
    throw ParseError("model JSON: " + std::string(e.what()));
  }

  HandModel model;
  const std::string template_obj = doc.at("template_obj").get<std::string>();
  if (template_obj.find('\n') != std::string::npos) {
    model.template_mesh = parse_obj(template_obj);
  } else {
    model.template_mesh = load_obj(path.parent_path() / template_obj);
  }

  model.skinning_weights =
      matrix_from_json(doc.at("skinning_weights"), -1, "skinning_weights");
  for (const json& field : doc.at("shape_basis")) {
    model.shape_basis.push_back(matrix_from_json(field, 3, "shape_basis field"));
  }
  for (const json& field : doc.at("pose_basis")) {
    model.pose_basis.push_back(matrix_from_json(field, 3, "pose_basis field"));
  }
  model.residual = matrix_from_json(doc.at("residual"), 3, "residual");

  const json& joints = doc.at("joints");
  model.joint_rest_positions =
      matrix_from_json(joints.at("positions"), 3, "joints.positions");
  for (const json& parent : joints.at("parents")) {
    model.joint_parents.push_back(parent.is_null() ? -1 : parent.get<int>());
  }

  validate_model(model);
  return model;
}

void save_model_json(const HandModel& model,
                     const std::filesystem::path& path) {
  validate_model(model);
  json doc;
  doc["template_obj"] = write_obj(model.template_mesh);
  doc["skinning_weights"] = matrix_to_json(model.skinning_weights);
  doc["shape_basis"] = json::array();
  for (const auto& field : model.shape_basis) {
    doc["shape_basis"].push_back(matrix_to_json(field));
  }
  doc["pose_basis"] = json::array();
  for (const auto& field : model.pose_basis) {
    doc["pose_basis"].push_back(matrix_to_json(field));
  }
  doc["residual"] = matrix_to_json(model.residual);
  doc["joints"]["positions"] = matrix_to_json(model.joint_rest_positions);
  doc["joints"]["parents"] = model.joint_parents;

  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for writing: " + path.string());
  stream << doc.dump(1) << '\n';
  if (!stream) throw IoError("write failed: " + path.string());
}

}  // namespace meshspectra
