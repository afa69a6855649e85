#include "meshspectra/basis_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "meshspectra/errors.hpp"

namespace meshspectra {
namespace {

constexpr std::array<char, 8> kMagic = {'M', 'S', 'P', 'E', 'C', 'B', '0', '1'};

template <typename T>
void write_value(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_value(std::istream& in, const char* what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParseError(std::string("basis cache truncated reading ") + what);
  return value;
}

}  // namespace

void save_basis(const SpectralBasis& basis, std::uint64_t laplacian_hash,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open basis cache for writing: " + path.string());

  out.write(kMagic.data(), kMagic.size());
  write_value(out, laplacian_hash);
  write_value(out, static_cast<std::int64_t>(basis.dimension()));
  write_value(out, static_cast<std::int64_t>(basis.size()));
  write_value(out,
              static_cast<std::int32_t>(basis.mode == BasisMode::full ? 0 : 1));
  out.write(reinterpret_cast<const char*>(basis.eigenvalues.data()),
            static_cast<std::streamsize>(sizeof(double) * basis.size()));
  out.write(reinterpret_cast<const char*>(basis.eigenvectors.data()),
            static_cast<std::streamsize>(sizeof(double) * basis.dimension() *
                                         basis.size()));
  if (!out) throw IoError("basis cache write failed: " + path.string());
}

SpectralBasis load_basis(const std::filesystem::path& path,
                         std::uint64_t expected_laplacian_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open basis cache: " + path.string());

  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || std::memcmp(magic.data(), kMagic.data(), magic.size()) != 0) {
    throw ParseError("not a meshspectra basis cache (bad magic): " +
                     path.string());
  }

  const auto hash = read_value<std::uint64_t>(in, "laplacian hash");
  if (hash != expected_laplacian_hash) {
    throw ParseError("basis cache was built from a different Laplacian: " +
                     path.string());
  }

  const auto dimension = read_value<std::int64_t>(in, "dimension");
  const auto size = read_value<std::int64_t>(in, "size");
  const auto mode = read_value<std::int32_t>(in, "mode");
  if (dimension <= 0 || size <= 0 || size > dimension ||
      (mode != 0 && mode != 1) || (mode == 0 && size != dimension)) {
    throw ParseError("basis cache header is inconsistent: " + path.string());
  }

  SpectralBasis basis;
  basis.mode = mode == 0 ? BasisMode::full : BasisMode::partial;
  basis.eigenvalues.resize(size);
  basis.eigenvectors.resize(dimension, size);
  in.read(reinterpret_cast<char*>(basis.eigenvalues.data()),
          static_cast<std::streamsize>(sizeof(double) * size));
  in.read(reinterpret_cast<char*>(basis.eigenvectors.data()),
          static_cast<std::streamsize>(sizeof(double) * dimension * size));
  if (!in) throw ParseError("basis cache truncated: " + path.string());
  return basis;
}

}  // namespace meshspectra
