#pragma once

#include <Eigen/SparseCore>

#include "meshspectra/mesh.hpp"

namespace meshspectra {

/// Loop subdivision expressed as a sparse linear map from n coarse
/// vertices to n + m subdivided vertices (m = coarse edge count). Rows
/// sum to 1, so subdivision commutes with affine maps; the same operator
/// transfers per-vertex model parameters (skinning weights, blendshape
/// fields) to the refined resolution.
struct SubdivisionOperator {
  Eigen::SparseMatrix<double> matrix;  // (n + m) x n
  Eigen::Index coarse_face_count = 0;
  Eigen::MatrixX3i refined_faces;      // 4 x coarse_face_count triples

  Eigen::Index coarse_vertex_count() const { return matrix.cols(); }
  Eigen::Index refined_vertex_count() const { return matrix.rows(); }
};

/// Classic Loop weights. Interior edge vertex (3/8, 3/8, 1/8, 1/8);
/// boundary edge vertex (1/2, 1/2); interior even vertex 1 - k*beta self
/// plus beta per neighbor with beta = (1/k)(5/8 - (3/8 + cos(2*pi/k)/4)^2);
/// boundary even vertex 3/4 self, 1/8 per boundary neighbor. Edges with
/// more than two incident faces raise StructuralError.
SubdivisionOperator build_subdivision_operator(const TriangleMesh& mesh);

/// vertices' = operator * vertices, faces' = refined connectivity.
TriangleMesh apply_subdivision(const SubdivisionOperator& op,
                               const TriangleMesh& mesh);

/// Row-parameter transfer: params is x-by-N, result is x-by-(N+m),
/// computed as params * op^T.
Eigen::MatrixXd transfer_parameters(const SubdivisionOperator& op,
                                    const Eigen::MatrixXd& params);

/// Column-field transfer for N-by-3 displacement fields: op * field.
Eigen::MatrixX3d transfer_field(const SubdivisionOperator& op,
                                const Eigen::MatrixX3d& field);

}  // namespace meshspectra
