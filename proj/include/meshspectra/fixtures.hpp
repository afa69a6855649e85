#pragma once

#include "meshspectra/mesh.hpp"

namespace meshspectra {

/// Closed triangulated sphere. Level 0 is the icosahedron (12 vertices,
/// 20 faces); each level quadruples the face count and projects back to
/// the radius. Levels above 5 raise ResourceError.
TriangleMesh make_icosphere(int subdivision_level, double radius_mm);

/// Deterministic disc-topology triangulation with exactly the requested
/// vertex / face / boundary-edge counts. Feasibility requires
/// faces == 2*vertices - boundary - 2 with boundary >= 3 and
/// vertices >= boundary; anything else raises ArgumentError.
///
/// The geometry is a gently domed disc: boundary on a circle, interior
/// relaxed to an even layout, so all three coordinate signals are smooth
/// and non-trivial. Stands in for licensed hand-template assets such as the
/// 778-vertex MANO template (778, 1538, 16).
TriangleMesh make_disc_fixture(int target_vertices, int target_faces,
                               int target_boundary);

}  // namespace meshspectra
