#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "meshspectra/basis_cache.hpp"
#include "meshspectra/errors.hpp"
#include "meshspectra/fixtures.hpp"

using namespace meshspectra;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const char* name) : path(fs::temp_directory_path() / name) {}
  ~TempFile() {
    std::error_code ec;
    fs::remove(path, ec);
  }
};

}  // namespace

TEST_CASE("basis cache round-trips bit-exactly") {
  const TriangleMesh mesh = make_icosphere(1, 10.0);
  const LaplacianMatrix laplacian = build_laplacian(build_graph(mesh));
  const SpectralBasis basis = eigendecompose_dense(laplacian);
  const std::uint64_t hash = content_hash(laplacian);

  TempFile file("meshspectra_cache_test.basis");
  save_basis(basis, hash, file.path);
  const SpectralBasis loaded = load_basis(file.path, hash);

  CHECK(loaded.mode == basis.mode);
  REQUIRE(loaded.size() == basis.size());
  REQUIRE(loaded.dimension() == basis.dimension());
  CHECK((loaded.eigenvalues - basis.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.eigenvectors - basis.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("basis cache refuses a different Laplacian") {
  const TriangleMesh mesh = make_icosphere(0, 10.0);
  const LaplacianMatrix laplacian = build_laplacian(build_graph(mesh));
  const SpectralBasis basis = eigendecompose_dense(laplacian);

  TempFile file("meshspectra_cache_mismatch.basis");
  save_basis(basis, content_hash(laplacian), file.path);
  CHECK_THROWS_AS(load_basis(file.path, content_hash(laplacian) ^ 1),
                  ParseError);
}

TEST_CASE("basis cache detects corruption") {
  TempFile file("meshspectra_cache_bad.basis");
  {
    std::ofstream out(file.path, std::ios::binary);
    out << "not a cache";
  }
  CHECK_THROWS_AS(load_basis(file.path, 0), ParseError);
  CHECK_THROWS_AS(load_basis(fs::path("/does/not/exist.basis"), 0), IoError);
}
