#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "meshspectra/mesh.hpp"

namespace meshspectra {

/// ASCII OBJ reader. Accepts `v` lines with exactly three coordinates and
/// `f` lines with three or more 1-based (optionally slash-qualified,
/// possibly negative) vertex references; polygons are fan-triangulated
/// from their first vertex. Texture and normal references are ignored, as
/// are unrelated directives. Malformed lines raise ParseError with the
/// line number; out-of-range or repeated indices raise StructuralError.
TriangleMesh parse_obj(std::istream& input);
TriangleMesh parse_obj(const std::string& text);
TriangleMesh load_obj(const std::filesystem::path& path);

/// ASCII OBJ writer, 1-based indices, shortest round-trip float
/// formatting. parse_obj(write_obj(m)) reproduces m exactly.
std::string write_obj(const TriangleMesh& mesh);
void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace meshspectra
