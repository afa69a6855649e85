// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. argv[1] names the CLI binary (used by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "meshspectra/fixtures.hpp"
#include "meshspectra/metrics.hpp"
#include "meshspectra/noise.hpp"
#include "meshspectra/obj_io.hpp"
#include "meshspectra/spectral.hpp"
#include "meshspectra/subdivision.hpp"
#include "meshspectra/surface.hpp"

namespace {

using namespace meshspectra;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void run_criterion(int number, const std::string& name, double budget_seconds,
                   const std::function<void(Check&)>& body) {
  Check check;
  const auto start = Clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - start).count();
  if (budget_seconds > 0.0) {
    check.require(elapsed < budget_seconds,
                  "runtime " + std::to_string(elapsed) + " s exceeds budget " +
                      std::to_string(budget_seconds) + " s");
  }
  std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n",
              check.ok ? "PASS" : "FAIL", number, name.c_str(), elapsed,
              check.ok ? "" : " -- ", check.ok ? "" : check.detail.c_str());
  std::fflush(stdout);
  if (!check.ok) ++failures;
}

SpectralBasis dense_basis(const TriangleMesh& mesh) {
  DenseSolveOptions options;
  options.allow_large = true;
  return eigendecompose_dense(build_laplacian(build_graph(mesh)), options);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, b); }

// ---------------------------------------------------------------------------

void criterion_subdivision_chain(Check& check) {
  TriangleMesh mesh = make_disc_fixture(778, 1538, 16);
  mesh = apply_subdivision(build_subdivision_operator(mesh), mesh);
  check.require(mesh.vertex_count() == 3093,
                "level-1 vertices: " + std::to_string(mesh.vertex_count()));
  check.require(mesh.face_count() == 6152,
                "level-1 faces: " + std::to_string(mesh.face_count()));
  mesh = apply_subdivision(build_subdivision_operator(mesh), mesh);
  check.require(mesh.vertex_count() == 12337,
                "level-2 vertices: " + std::to_string(mesh.vertex_count()));
  check.require(mesh.face_count() == 24608,
                "level-2 faces: " + std::to_string(mesh.face_count()));
}

void criterion_spectral_soundness(Check& check) {
  const TriangleMesh fixtures[] = {
      make_icosphere(0, 100.0),
      make_icosphere(1, 100.0),
      make_icosphere(2, 100.0),
      make_disc_fixture(778, 1538, 16),
  };
  for (const TriangleMesh& mesh : fixtures) {
    const LaplacianMatrix laplacian = build_laplacian(build_graph(mesh));
    const SpectralBasis basis = eigendecompose_dense(laplacian);
    const Eigen::Index n = basis.size();

    for (Eigen::Index i = 0; i < n; ++i) {
      const double residual = (laplacian.matrix * basis.eigenvectors.col(i) -
                               basis.eigenvalues[i] * basis.eigenvectors.col(i))
                                  .norm();
      check.require(residual <= 1e-8, "eigenpair residual " +
                                          std::to_string(residual) + " at " +
                                          std::to_string(i));
    }

    const double ortho =
        (basis.eigenvectors.transpose() * basis.eigenvectors -
         Eigen::MatrixXd::Identity(n, n))
            .cwiseAbs()
            .maxCoeff();
    check.require(ortho <= 1e-8, "orthonormality " + std::to_string(ortho));

    const Eigen::MatrixX3d& signal = mesh.vertices;
    const SpectralCoefficients coefficients = gft(basis, signal);
    const double roundtrip =
        (igft(basis, coefficients) - signal).norm() / signal.norm();
    check.require(roundtrip <= 1e-9, "round-trip " + std::to_string(roundtrip));

    const double parseval =
        std::abs(coefficients.values.norm() - signal.norm()) / signal.norm();
    check.require(parseval <= 1e-9, "Parseval " + std::to_string(parseval));

    Eigen::MatrixX3d sum = Eigen::MatrixX3d::Zero(signal.rows(), 3);
    int lo = 0;
    const int last = static_cast<int>(n) - 1;
    for (int hi : {last / 7, last / 3, last / 2, last}) {
      if (hi < lo) continue;
      sum += band_component(basis, signal, Band{lo, hi});
      lo = hi + 1;
    }
    const double reassembly = (sum - signal).norm() / signal.norm();
    check.require(reassembly <= 1e-9, "band reassembly " + std::to_string(reassembly));
  }
}

void criterion_partial_vs_dense(Check& check) {
  const TriangleMesh fixtures[] = {
      make_icosphere(0, 100.0),
      make_icosphere(1, 100.0),
      make_icosphere(2, 100.0),
      make_disc_fixture(150, 280, 18),
      make_disc_fixture(500, 978, 20),
  };
  for (const TriangleMesh& mesh : fixtures) {
    const LaplacianMatrix laplacian = build_laplacian(build_graph(mesh));
    const SpectralBasis dense = eigendecompose_dense(laplacian);
    const int k =
        std::min<int>(40, static_cast<int>(laplacian.dimension()) - 1);
    const SpectralBasis partial = eigendecompose_partial(laplacian, k, 2024);
    for (int i = 0; i < k; ++i) {
      const double gap = std::abs(partial.eigenvalues[i] - dense.eigenvalues[i]);
      check.require(gap <= 1e-6, "eigenvalue " + std::to_string(i) +
                                     " differs by " + std::to_string(gap) +
                                     " on a " +
                                     std::to_string(mesh.vertex_count()) +
                                     "-vertex fixture");
    }
  }
}

void criterion_frequency_loss(Check& check) {
  const TriangleMesh mesh = make_disc_fixture(60, 100, 18);
  const SpectralBasis basis = dense_basis(mesh);

  check.require(frequency_loss(basis, mesh.vertices, mesh.vertices) == 0.0,
                "loss at pred == gt is nonzero");

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-0.8, 0.8);
  Eigen::MatrixX3d pred = mesh.vertices;
  for (Eigen::Index i = 0; i < pred.rows(); ++i) {
    for (int c = 0; c < 3; ++c) pred(i, c) += dist(rng);
  }
  const double base = frequency_loss(basis, pred, mesh.vertices);
  for (double s : {3.0, 0.2}) {
    const double scaled = frequency_loss(basis, s * pred, s * mesh.vertices);
    check.require(rel(scaled, base) <= 1e-6,
                  "scale invariance broke at s=" + std::to_string(s));
  }

  for (std::uint64_t seed : {11ull, 22ull, 33ull}) {
    const TriangleMesh fixture = make_disc_fixture(30, 52, 6);
    const SpectralBasis fb = dense_basis(fixture);
    std::mt19937_64 grng(seed);
    std::uniform_real_distribution<double> gdist(-1.0, 1.0);
    Eigen::MatrixX3d gpred = fixture.vertices;
    Eigen::MatrixX3d ggt = fixture.vertices;
    for (Eigen::Index i = 0; i < 30; ++i) {
      for (int c = 0; c < 3; ++c) {
        gpred(i, c) += gdist(grng);
        ggt(i, c) += 0.25 * gdist(grng);
      }
    }
    const Eigen::MatrixX3d analytic = frequency_loss_gradient(fb, gpred, ggt);
    Eigen::MatrixX3d numeric(30, 3);
    const double step = 1e-5;
    for (Eigen::Index i = 0; i < 30; ++i) {
      for (int c = 0; c < 3; ++c) {
        const double saved = gpred(i, c);
        gpred(i, c) = saved + step;
        const double up = frequency_loss(fb, gpred, ggt);
        gpred(i, c) = saved - step;
        const double down = frequency_loss(fb, gpred, ggt);
        gpred(i, c) = saved;
        numeric(i, c) = (up - down) / (2.0 * step);
      }
    }
    const double err = (analytic - numeric).norm() / numeric.norm();
    check.require(err <= 1e-5, "gradient check seed " + std::to_string(seed) +
                                   ": rel error " + std::to_string(err));
  }
}

void criterion_msnr(Check& check) {
  const TriangleMesh mesh = make_disc_fixture(120, 220, 18);
  const SpectralBasis basis = dense_basis(mesh);

  const MsnrReport self = msnr(basis, mesh.vertices, mesh.vertices);
  check.require(self.mean == 8.0, "MSNR(V, V) = " + std::to_string(self.mean));

  // Doubling one component's error, prediction (the S_f numerator) fixed.
  const int target = 17;
  const Eigen::RowVector3d error(0.4, 0.1, -0.2);
  const Eigen::MatrixX3d gt1 =
      mesh.vertices - basis.eigenvectors.col(target) * error;
  const Eigen::MatrixX3d gt2 =
      mesh.vertices - basis.eigenvectors.col(target) * (2.0 * error);
  const double s1 = msnr(basis, mesh.vertices, gt1).per_frequency[target];
  const double s2 = msnr(basis, mesh.vertices, gt2).per_frequency[target];
  check.require(s1 < 8.0 && s2 < 8.0, "doubling test accidentally clamped");
  const double drop = s1 - s2;
  check.require(std::abs(drop - std::log10(2.0)) <= 1e-6,
                "S_f drop " + std::to_string(drop) + " vs log10(2)");
}

void criterion_noise_sweep(Check& check) {
  const TriangleMesh mesh = make_disc_fixture(778, 1538, 16);
  const SpectralBasis basis = dense_basis(mesh);
  const OctaveBands bands = make_octave_bands(778);

  std::vector<double> amplitudes;
  for (int i = 0; i < 10; ++i) amplitudes.push_back(0.6 * i / 9.0);
  const NoiseSweepReport report =
      run_noise_sweep(mesh, basis, bands.bands, amplitudes, 20, 20250811);

  for (std::size_t bi = 0; bi < bands.bands.size(); ++bi) {
    int inversions = 0;
    for (std::size_t ai = 0; ai < amplitudes.size(); ++ai) {
      const NoiseSweepRow& row = report.rows[bi * amplitudes.size() + ai];
      if (ai == 0) {
        check.require(row.mean_mpve == 0.0 && row.mean_msnr == 8.0,
                      "zero-amplitude cell of band " + std::to_string(bi) +
                          " is not exact");
      } else if (row.mean_msnr >
                 report.rows[bi * amplitudes.size() + ai - 1].mean_msnr) {
        ++inversions;
      }
    }
    check.require(inversions <= 1, "band " + std::to_string(bi) + " has " +
                                       std::to_string(inversions) +
                                       " MSNR inversions");
  }

  const double degradation_bottom =
      8.0 - report.rows[amplitudes.size() - 1].mean_msnr;
  const double degradation_top =
      8.0 - report.rows.back().mean_msnr;
  check.require(degradation_top > degradation_bottom,
                "top-band degradation " + std::to_string(degradation_top) +
                    " not above bottom-band " +
                    std::to_string(degradation_bottom));
}

void criterion_chamfer_and_closest_point(Check& check) {
  // Chamfer against the O(n^2) oracle, bit for bit.
  auto brute = [](const TriangleMesh& a, const TriangleMesh& b) {
    auto one = [](const TriangleMesh& from, const TriangleMesh& to) {
      double total = 0.0;
      for (Eigen::Index i = 0; i < from.vertex_count(); ++i) {
        double best = 0.0;
        for (Eigen::Index j = 0; j < to.vertex_count(); ++j) {
          const double dx = to.vertices(j, 0) - from.vertices(i, 0);
          const double dy = to.vertices(j, 1) - from.vertices(i, 1);
          const double dz = to.vertices(j, 2) - from.vertices(i, 2);
          const double d2 = dx * dx + dy * dy + dz * dz;
          if (j == 0 || d2 < best) best = d2;
        }
        total += std::sqrt(best);
      }
      return total / static_cast<double>(from.vertex_count());
    };
    return 0.5 * (one(a, b) + one(b, a));
  };

  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> dist(-40.0, 40.0);
  auto cloud = [&](int n) {
    TriangleMesh mesh;
    mesh.vertices.resize(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      mesh.vertices.row(i) << dist(rng), dist(rng), dist(rng);
    }
    mesh.faces.resize(0, 3);
    return mesh;
  };
  for (int instance = 0; instance < 20; ++instance) {
    const TriangleMesh a = cloud(50);
    const TriangleMesh b = cloud(50);
    check.require(chamfer_distance(a, b) == brute(a, b),
                  "chamfer differs from the brute-force oracle on instance " +
                      std::to_string(instance));
  }

  // Closest-point queries against the exhaustive triangle scan.
  const TriangleMesh surface = make_icosphere(2, 60.0);
  const SurfaceIndex index(surface);
  for (int q = 0; q < 100; ++q) {
    const Eigen::Vector3d query(dist(rng), dist(rng), dist(rng));
    const auto fast = index.closest(query);
    double best = std::numeric_limits<double>::max();
    for (Eigen::Index f = 0; f < surface.face_count(); ++f) {
      const Eigen::Vector3d p = closest_point_on_triangle(
          query, surface.vertices.row(surface.faces(f, 0)).transpose(),
          surface.vertices.row(surface.faces(f, 1)).transpose(),
          surface.vertices.row(surface.faces(f, 2)).transpose());
      best = std::min(best, (query - p).norm());
    }
    check.require(std::abs(fast.distance - best) <= 1e-9,
                  "closest-point query " + std::to_string(q) + " off by " +
                      std::to_string(std::abs(fast.distance - best)));
  }
}

void criterion_cumulative_reconstruction(Check& check) {
  for (const TriangleMesh& mesh :
       {make_icosphere(2, 100.0), make_disc_fixture(200, 382, 16)}) {
    const SpectralBasis basis = dense_basis(mesh);
    const int n = static_cast<int>(basis.size());
    const std::vector<int> cuts = {0, n / 16, n / 8, n / 4, n / 2, n - 1};
    const auto series = cumulative_reconstruction(basis, mesh.vertices, cuts);
    double previous = std::numeric_limits<double>::max();
    for (const auto& entry : series) {
      const double residual = (mesh.vertices - entry).norm();
      check.require(residual <= previous, "residual increased along the cuts");
      previous = residual;
    }
    check.require(
        (series.back() - mesh.vertices).cwiseAbs().maxCoeff() <= 1e-6,
        "final cut deviates by more than 1e-6 mm");
  }
}

void criterion_spectrum_decay(Check& check) {
  const TriangleMesh mesh = make_icosphere(2, 100.0);
  const SpectralBasis basis = dense_basis(mesh);
  const auto rows = spectrum_profile(basis, mesh.vertices);
  const std::size_t decile = rows.size() / 10;
  double low = 0.0, high = 0.0;
  for (std::size_t i = 0; i < decile; ++i) {
    low += rows[i].log10_amplitude;
    high += rows[rows.size() - 1 - i].log10_amplitude;
  }
  const double gap = (low - high) / static_cast<double>(decile);
  check.require(gap >= 1.0,
                "lowest-decile minus highest-decile mean log10 amplitude is " +
                    std::to_string(gap));
}

// ---------------------------------------------------------------------------
// CLI determinism

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable:" + path.string() + ">";
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// stdout plus every artifact under the out directory, keyed by name.
std::map<std::string, std::string> snapshot(const fs::path& stdout_file,
                                            const fs::path& out_dir) {
  std::map<std::string, std::string> state;
  state["<stdout>"] = slurp(stdout_file);
  if (fs::exists(out_dir)) {
    for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
      if (entry.is_regular_file()) {
        state[fs::relative(entry.path(), out_dir).string()] =
            slurp(entry.path());
      }
    }
  }
  return state;
}

void criterion_cli_determinism(Check& check, const std::string& cli,
                               const fs::path& work) {
  if (cli.empty()) {
    check.require(false, "CLI binary path not given (argv[1])");
    return;
  }

  const fs::path mesh_path = work / "fixture.obj";
  save_obj(make_disc_fixture(200, 382, 16), mesh_path);
  const fs::path noisy_path = work / "noisy.obj";
  {
    const TriangleMesh mesh = load_obj(mesh_path);
    const SpectralBasis basis = dense_basis(mesh);
    save_obj(inject_band_noise(basis, mesh, NoiseSpec{Band{10, 40}, 0.4, 5}),
             noisy_path);
  }

  struct Command {
    std::string name;
    std::string args;  // with {out} placeholder
  };
  const Command commands[] = {
      {"subdivide", "subdivide " + mesh_path.string() + " --levels 1 --out {out}"},
      {"decompose", "decompose " + mesh_path.string() +
                        " --spectrum --cuts 0,20,80,199 --out {out}"},
      {"metrics", "metrics " + noisy_path.string() + " " + mesh_path.string() +
                      " --weights "
                      "'{\"lambda_J\":1,\"lambda_v\":[1,1,1],\"lambda_F\":[60,"
                      "60,100]}' --per-frequency-csv {out}/sf.csv --out {out}"},
      {"noise-sweep", "noise-sweep " + mesh_path.string() +
                          " --trials 3 --amplitudes 0,0.2,0.4 --seed 7 "
                          "--out {out}"},
      {"gradcheck", "gradcheck --seed 9 --size 24 --out {out}"},
  };

  for (const Command& command : commands) {
    const fs::path out_dir = work / ("cli_" + command.name);
    fs::create_directories(out_dir);
    std::string args = command.args;
    for (std::string::size_type pos;
         (pos = args.find("{out}")) != std::string::npos;) {
      args.replace(pos, 5, out_dir.string());
    }
    const fs::path stdout_file = work / (command.name + ".stdout");
    const std::string invocation = cli + " " + args + " > " +
                                   stdout_file.string() + " 2> /dev/null";

    std::map<std::string, std::string> first, second;
    for (int run = 0; run < 2; ++run) {
      const int status = std::system(invocation.c_str());
      if (status != 0) {
        check.require(false, command.name + " exited with status " +
                                 std::to_string(status));
        return;
      }
      (run == 0 ? first : second) = snapshot(stdout_file, out_dir);
    }
    if (first != second) {
      for (const auto& [name, bytes] : first) {
        const auto found = second.find(name);
        if (found == second.end() || found->second != bytes) {
          check.require(false, command.name + ": " + name +
                                   " changed between identical runs");
          return;
        }
      }
      check.require(false, command.name + " produced differing artifacts");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path work =
      fs::temp_directory_path() /
      ("meshspectra_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);

  run_criterion(1, "subdivision chain 778 -> 3093 -> 12337", 5.0,
                criterion_subdivision_chain);
  run_criterion(2, "spectral soundness on fixtures <= 1000 vertices", 60.0,
                criterion_spectral_soundness);
  run_criterion(3, "partial eigensolver agrees with dense", 0.0,
                criterion_partial_vs_dense);
  run_criterion(4, "frequency loss: zero, scale invariance, gradient", 10.0,
                criterion_frequency_loss);
  run_criterion(5, "MSNR cap and log10(2) error doubling", 0.0, criterion_msnr);
  run_criterion(6, "noise sweep: exact zeros, monotone MSNR, band contrast",
                600.0, criterion_noise_sweep);
  run_criterion(7, "chamfer and closest-point oracles", 0.0,
                criterion_chamfer_and_closest_point);
  run_criterion(8, "cumulative reconstruction residuals", 0.0,
                criterion_cumulative_reconstruction);
  run_criterion(9, "spectrum decay on the level-2 icosphere", 0.0,
                criterion_spectrum_decay);
  run_criterion(10, "CLI determinism across reruns", 0.0,
                [&](Check& check) { criterion_cli_determinism(check, cli, work); });

  std::error_code ec;
  fs::remove_all(work, ec);

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
