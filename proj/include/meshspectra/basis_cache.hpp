#pragma once

#include <cstdint>
#include <filesystem>

#include "meshspectra/spectral.hpp"

namespace meshspectra {

/// Versioned binary dump of a SpectralBasis. Round-trips bit-exactly and
/// embeds the content hash of the source Laplacian so a cache entry can
/// never be applied to the wrong graph.
void save_basis(const SpectralBasis& basis, std::uint64_t laplacian_hash,
                const std::filesystem::path& path);

/// Loads a basis, checking magic, version and the expected Laplacian
/// hash. Throws IoError / ParseError on mismatch.
SpectralBasis load_basis(const std::filesystem::path& path,
                         std::uint64_t expected_laplacian_hash);

}  // namespace meshspectra
