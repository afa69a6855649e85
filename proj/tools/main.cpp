// meshspectra CLI: graph-spectral decomposition, metrics, Loop subdivision,
// and the band-noise sensitivity sweep, wired into reproducible pipelines.
//
// Exit codes: 0 success, 1 parse/validation/argument errors, 2 numerical or
// resource errors, 3 I/O errors. Machine-readable output goes to stdout,
// diagnostics to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "meshspectra/basis_cache.hpp"
#include "meshspectra/errors.hpp"
#include "meshspectra/fixtures.hpp"
#include "meshspectra/hand_model.hpp"
#include "meshspectra/hash.hpp"
#include "meshspectra/metrics.hpp"
#include "meshspectra/noise.hpp"
#include "meshspectra/obj_io.hpp"
#include "meshspectra/serialize.hpp"
#include "meshspectra/spectral.hpp"
#include "meshspectra/subdivision.hpp"
#include "meshspectra/text_format.hpp"
#include "meshspectra/version.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace meshspectra;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string out = ".";
  bool allow_large = false;
  long dense_ceiling = 4096;
  std::string log_base = "e";
  std::string bands = "auto";
  int trials = 20;
  std::vector<double> amplitudes;
  std::string noise_model = "spectral";
};

LogBase parse_log_base(const std::string& name) {
  if (name == "e") return LogBase::natural;
  if (name == "10") return LogBase::base10;
  throw ArgumentError("--log-base must be 'e' or '10', got '" + name + "'");
}

// --config file.json provides defaults that explicit flags override. The
// file is applied before CLI11 parses, so it is pre-scanned from argv.
void apply_config_file(const std::string& path, GlobalOptions& opts) {
  std::ifstream stream(path);
  if (!stream) throw IoError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(stream);
  } catch (const json::parse_error& e) {
    throw ParseError("config file: " + std::string(e.what()));
  }
  if (doc.contains("seed")) opts.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("out")) opts.out = doc.at("out").get<std::string>();
  if (doc.contains("allow_large")) opts.allow_large = doc.at("allow_large").get<bool>();
  if (doc.contains("dense_ceiling")) opts.dense_ceiling = doc.at("dense_ceiling").get<long>();
  if (doc.contains("log_base")) opts.log_base = doc.at("log_base").get<std::string>();
  if (doc.contains("bands")) opts.bands = doc.at("bands").get<std::string>();
  if (doc.contains("trials")) opts.trials = doc.at("trials").get<int>();
  if (doc.contains("noise_model")) opts.noise_model = doc.at("noise_model").get<std::string>();
  if (doc.contains("amplitudes")) opts.amplitudes = doc.at("amplitudes").get<std::vector<double>>();
}

fs::path cache_directory(const GlobalOptions& opts) {
  if (const char* env = std::getenv("MESHSPECTRA_CACHE")) return fs::path(env);
  return fs::path(opts.out) / "basis_cache";
}

// Advisory lock around a cache entry; stale locks are ignored after the
// timeout so a crashed writer cannot wedge later runs.
class CacheLock {
public:
  explicit CacheLock(const fs::path& target) : lock_path_(target.string() + ".lock") {
    for (int attempt = 0; attempt < 200; ++attempt) {
      std::FILE* f = std::fopen(lock_path_.c_str(), "wx");
      if (f) {
        std::fclose(f);
        owned_ = true;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    std::fprintf(stderr, "warning: stale basis-cache lock %s, proceeding\n",
                 lock_path_.c_str());
  }
  ~CacheLock() {
    if (owned_) std::remove(lock_path_.c_str());
  }

private:
  std::string lock_path_;
  bool owned_ = false;
};

// Full basis for the mesh, reusing the on-disk cache when the Laplacian
// hash matches.
SpectralBasis full_basis_for(const TriangleMesh& mesh,
                             const GlobalOptions& opts) {
  const LaplacianMatrix laplacian = build_laplacian(build_graph(mesh));
  const std::uint64_t hash = content_hash(laplacian);
  const fs::path dir = cache_directory(opts);
  const fs::path entry = dir / (hash_hex(hash) + ".basis");

  if (fs::exists(entry)) {
    try {
      SpectralBasis basis = load_basis(entry, hash);
      std::fprintf(stderr, "basis cache hit: %s\n", entry.string().c_str());
      return basis;
    } catch (const Error& e) {
      std::fprintf(stderr, "warning: ignoring unusable cache entry: %s\n",
                   e.what());
    }
  }

  DenseSolveOptions solve;
  solve.ceiling = opts.dense_ceiling;
  solve.allow_large = opts.allow_large;
  SpectralBasis basis = eigendecompose_dense(laplacian, solve);

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!ec) {
    CacheLock lock(entry);
    const fs::path tmp = entry.string() + ".tmp";
    try {
      save_basis(basis, hash, tmp);
      fs::rename(tmp, entry);
    } catch (const Error& e) {
      std::fprintf(stderr, "warning: could not write basis cache: %s\n",
                   e.what());
    }
  }
  return basis;
}

void write_provenance(const fs::path& out_dir, const TriangleMesh& mesh,
                      std::uint64_t seed) {
  json doc;
  doc["tool_version"] = kToolVersion;
  doc["mesh_hash"] = hash_hex(content_hash(mesh));
  doc["seed"] = seed;
  std::ofstream out(out_dir / "provenance.json", std::ios::binary);
  if (!out) throw IoError("cannot write provenance.json in " + out_dir.string());
  out << doc.dump(2) << '\n';
}

void emit(const json& doc) { std::cout << doc.dump(2) << '\n'; }

// ---------------------------------------------------------------------------
// decompose

int cmd_decompose(const std::string& mesh_path, const std::vector<int>& cuts,
                  bool spectrum, const GlobalOptions& opts) {
  const TriangleMesh mesh = load_obj(mesh_path);
  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);

  const SpectralBasis basis = full_basis_for(mesh, opts);

  json result;
  result["tool_version"] = kToolVersion;
  result["mesh_hash"] = hash_hex(content_hash(mesh));
  json outputs = json::array();

  if (spectrum) {
    const fs::path csv = out_dir / "spectrum.csv";
    export_spectrum(mesh, basis, csv);
    outputs.push_back(csv.string());
  }
  if (!cuts.empty()) {
    for (const auto& path : export_cumulative_series(mesh, basis, cuts, out_dir)) {
      outputs.push_back(path.string());
    }
  }
  write_provenance(out_dir, mesh, opts.seed);
  outputs.push_back((out_dir / "provenance.json").string());

  result["outputs"] = outputs;
  emit(result);
  return 0;
}

// ---------------------------------------------------------------------------
// metrics

Eigen::MatrixX3d load_joints(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw IoError("cannot open joints file: " + path);
  json doc;
  try {
    doc = json::parse(stream);
  } catch (const json::parse_error& e) {
    throw ParseError("joints JSON: " + std::string(e.what()));
  }
  if (!doc.is_array()) throw ParseError("joints file must be a JSON array of [x,y,z]");
  Eigen::MatrixX3d joints(static_cast<Eigen::Index>(doc.size()), 3);
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto row = doc[i].get<std::vector<double>>();
    if (row.size() != 3) throw ParseError("joints entries must be [x,y,z]");
    joints.row(static_cast<Eigen::Index>(i)) << row[0], row[1], row[2];
  }
  return joints;
}

int cmd_metrics(const std::string& pred_path, const std::string& gt_path,
                const std::string& mode_name, const std::string& weights_json,
                const std::string& joints_pred_path,
                const std::string& joints_gt_path,
                const std::string& per_frequency_csv, bool chamfer_only,
                int level, const GlobalOptions& opts) {
  const TriangleMesh pred = load_obj(pred_path);
  const TriangleMesh gt = load_obj(gt_path);
  const LogBase base = parse_log_base(opts.log_base);

  ChamferMode mode;
  if (mode_name == "vertex") {
    mode = ChamferMode::vertex_to_vertex;
  } else if (mode_name == "surface") {
    mode = ChamferMode::vertex_to_surface;
  } else {
    throw ArgumentError("--mode must be 'vertex' or 'surface'");
  }

  json report;
  report["tool_version"] = kToolVersion;
  report["chamfer_mm"] = chamfer_distance(pred, gt, mode);

  std::optional<MsnrReport> msnr_report;
  if (!chamfer_only) {
    if (pred.vertex_count() != gt.vertex_count()) {
      throw ArgumentError(
          "spectral metrics need equal vertex counts (" +
          std::to_string(pred.vertex_count()) + " vs " +
          std::to_string(gt.vertex_count()) +
          "); bring both meshes to the same resolution first, e.g. "
          "`meshspectra subdivide`, or pass --chamfer-only");
    }
    const SpectralBasis basis = full_basis_for(gt, opts);
    report["mpve_mm"] = per_vertex_error(pred.vertices, gt.vertices);
    msnr_report = msnr(basis, pred.vertices, gt.vertices);
    report["msnr"] = *msnr_report;
    report["frequency_loss"] =
        frequency_loss(basis, pred.vertices, gt.vertices, base);
  }

  if (!joints_pred_path.empty() || !joints_gt_path.empty()) {
    if (joints_pred_path.empty() || joints_gt_path.empty()) {
      throw ArgumentError("--joints-pred and --joints-gt must be given together");
    }
    report["mpjpe_mm"] =
        mpjpe(load_joints(joints_pred_path), load_joints(joints_gt_path));
  }

  if (!weights_json.empty()) {
    json weights_doc;
    try {
      weights_doc = json::parse(weights_json);
    } catch (const json::parse_error& e) {
      throw ParseError("--weights: " + std::string(e.what()));
    }
    const LossWeights weights = loss_weights_from_json(weights_doc);
    if (level < 1 || level > 3) throw ArgumentError("--level must be 1, 2 or 3");

    // Weighted single-level breakdown: the terms of the total loss this
    // mesh pair contributes at its resolution level, with the weights
    // echoed. The full three-level sum lives in the library.
    json breakdown;
    breakdown["weights"] = weights;
    breakdown["level"] = level;
    double total = 0.0;
    if (report.contains("mpjpe_mm")) {
      const double joint_term = weights.lambda_j * report["mpjpe_mm"].get<double>();
      breakdown["joint_term"] = joint_term;
      total += joint_term;
    }
    if (report.contains("mpve_mm")) {
      const double vertex_term =
          weights.lambda_v[static_cast<std::size_t>(level - 1)] *
          report["mpve_mm"].get<double>();
      const double frequency_term =
          weights.lambda_f[static_cast<std::size_t>(level - 1)] *
          report["frequency_loss"].get<double>();
      breakdown["vertex_term"] = vertex_term;
      breakdown["frequency_term"] = frequency_term;
      total += vertex_term + frequency_term;
    }
    breakdown["total"] = total;
    report["loss_breakdown"] = breakdown;
  }

  if (!per_frequency_csv.empty()) {
    if (!msnr_report) {
      throw ArgumentError("--per-frequency-csv needs the spectral metrics");
    }
    std::string csv = "freq_index,s_f\n";
    for (std::size_t f = 0; f < msnr_report->per_frequency.size(); ++f) {
      csv += std::to_string(f) + ',' +
             format_double(msnr_report->per_frequency[f]) + '\n';
    }
    std::ofstream out(per_frequency_csv, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + per_frequency_csv);
    out << csv;
  }

  emit(report);
  return 0;
}

// ---------------------------------------------------------------------------
// subdivide

int cmd_subdivide(const std::string& input_path, int levels,
                  const GlobalOptions& opts) {
  if (levels < 1) throw ArgumentError("--levels must be at least 1");
  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);

  json result;
  result["tool_version"] = kToolVersion;

  const fs::path input(input_path);
  if (input.extension() == ".json") {
    const HandModel model = load_model_json(input);
    const HandModel refined = subdivide_model(model, levels);
    const fs::path out_path = out_dir / "subdivided_model.json";
    save_model_json(refined, out_path);
    write_provenance(out_dir, refined.template_mesh, opts.seed);
    result["outputs"] = {out_path.string(),
                         (out_dir / "provenance.json").string()};
    result["vertices"] = refined.template_mesh.vertex_count();
    result["faces"] = refined.template_mesh.face_count();
  } else {
    TriangleMesh mesh = load_obj(input);
    for (int level = 0; level < levels; ++level) {
      mesh = apply_subdivision(build_subdivision_operator(mesh), mesh);
    }
    const fs::path out_path = out_dir / "subdivided.obj";
    save_obj(mesh, out_path);
    write_provenance(out_dir, mesh, opts.seed);
    result["outputs"] = {out_path.string(),
                         (out_dir / "provenance.json").string()};
    result["vertices"] = mesh.vertex_count();
    result["faces"] = mesh.face_count();
  }
  emit(result);
  return 0;
}

// ---------------------------------------------------------------------------
// noise-sweep

int cmd_noise_sweep(const std::string& mesh_path, const GlobalOptions& opts) {
  const TriangleMesh mesh = load_obj(mesh_path);
  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);

  const SpectralBasis basis = full_basis_for(mesh, opts);

  const int basis_size = static_cast<int>(basis.size());
  OctaveBands bands = make_octave_bands(basis_size);
  if (opts.bands == "canonical" && !bands.canonical) {
    throw ArgumentError("canonical bands need at least 12337 frequencies; "
                        "this mesh has " + std::to_string(basis_size) +
                        " (use --bands auto)");
  } else if (opts.bands != "canonical" && opts.bands != "auto") {
    throw ArgumentError("--bands must be 'canonical' or 'auto'");
  }

  NoiseModel model;
  if (opts.noise_model == "spectral") {
    model = NoiseModel::spectral;
  } else if (opts.noise_model == "spatial") {
    model = NoiseModel::spatial_filtered;
  } else {
    throw ArgumentError("--noise-model must be 'spectral' or 'spatial'");
  }

  std::vector<double> amplitudes = opts.amplitudes;
  if (amplitudes.empty()) {
    // Default grid: 10 levels linearly spaced from 0 to 0.6 mm.
    for (int i = 0; i < 10; ++i) amplitudes.push_back(0.6 * i / 9.0);
  }

  const NoiseSweepReport report = run_noise_sweep(
      mesh, basis, bands.bands, amplitudes, opts.trials, opts.seed, model);

  const fs::path csv_path = out_dir / "noise_sweep.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw IoError("cannot open for writing: " + csv_path.string());
  csv << noise_sweep_csv(report);
  csv.close();
  write_provenance(out_dir, mesh, opts.seed);

  json result;
  result["tool_version"] = kToolVersion;
  result["mesh_hash"] = report.mesh_hash;
  result["canonical_bands"] = bands.canonical;
  result["noise_model"] = opts.noise_model;
  result["outputs"] = {csv_path.string(), (out_dir / "provenance.json").string()};
  emit(result);
  return 0;
}

// ---------------------------------------------------------------------------
// gradcheck

int cmd_gradcheck(int size, bool corrupt, const GlobalOptions& opts) {
  if (size < 12 || size > 200) {
    throw ArgumentError("--size must lie in [12, 200]");
  }
  const LogBase base = parse_log_base(opts.log_base);

  const int boundary = 6;
  const TriangleMesh mesh = make_disc_fixture(size, 2 * size - boundary - 2, boundary);
  const SpectralBasis basis =
      eigendecompose_dense(build_laplacian(build_graph(mesh)));

  std::mt19937_64 rng(opts.seed);
  auto noise = [&](double scale) {
    Eigen::MatrixX3d m(mesh.vertex_count(), 3);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (int c = 0; c < 3; ++c) {
        m(i, c) = scale * (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
      }
    }
    return m;
  };
  const Eigen::MatrixX3d gt = mesh.vertices + noise(0.5);
  Eigen::MatrixX3d pred = mesh.vertices + noise(2.0);

  Eigen::MatrixX3d analytic = frequency_loss_gradient(basis, pred, gt, base);
  if (corrupt) analytic *= 1.001;  // negative-control hook

  const double step = 1e-5;
  Eigen::MatrixX3d numeric(pred.rows(), 3);
  for (Eigen::Index i = 0; i < pred.rows(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const double saved = pred(i, c);
      pred(i, c) = saved + step;
      const double up = frequency_loss(basis, pred, gt, base);
      pred(i, c) = saved - step;
      const double down = frequency_loss(basis, pred, gt, base);
      pred(i, c) = saved;
      numeric(i, c) = (up - down) / (2.0 * step);
    }
  }

  const double rel_error =
      (analytic - numeric).norm() / std::max(numeric.norm(), 1e-300);
  const bool pass = rel_error <= 1e-5;

  json result;
  result["tool_version"] = kToolVersion;
  result["size"] = size;
  result["seed"] = opts.seed;
  result["relative_error"] = rel_error;
  result["tolerance"] = 1e-5;
  result["pass"] = pass;
  emit(result);

  if (!pass) {
    throw NumericalError("analytic gradient deviates from central differences",
                         rel_error);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOptions opts;

  // Pre-scan for --config so explicit flags still win.
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        apply_config_file(argv[i + 1], opts);
      } else if (arg.rfind("--config=", 0) == 0) {
        apply_config_file(arg.substr(9), opts);
      }
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  CLI::App app{"meshspectra: graph-spectral toolkit for triangle meshes"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file providing defaults; flags override");
  app.add_option("--seed", opts.seed, "RNG seed for stochastic commands");
  app.add_option("--out", opts.out, "output directory");
  app.add_flag("--allow-large", opts.allow_large,
               "permit dense decomposition above the ceiling");
  app.add_option("--dense-ceiling", opts.dense_ceiling,
                 "max vertex count for unconfirmed dense decomposition");
  app.add_option("--log-base", opts.log_base,
                 "logarithm base for the frequency loss: e or 10");
  app.add_option("--bands", opts.bands, "octave band set: canonical or auto");
  app.add_option("--trials", opts.trials, "noise trials per sweep cell");
  app.add_option("--amplitudes", opts.amplitudes,
                 "noise amplitude grid in mm (comma separated)")
      ->delimiter(',');
  app.add_option("--noise-model", opts.noise_model,
                 "noise draw model: spectral (per coefficient) or spatial "
                 "(per vertex, band-pass filtered)");

  // decompose
  auto* decompose = app.add_subcommand(
      "decompose", "spectrum profile and cumulative reconstructions");
  std::string decompose_mesh;
  std::vector<int> cuts;
  bool spectrum = false;
  decompose->add_option("mesh", decompose_mesh, "input OBJ")->required();
  decompose->add_option("--cuts", cuts, "ascending frequency cut indices")
      ->delimiter(',');
  decompose->add_flag("--spectrum", spectrum, "write the spectrum CSV");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "metric report for a mesh pair");
  std::string pred_path, gt_path, mode_name = "vertex", weights_json;
  std::string joints_pred_path, joints_gt_path, per_frequency_csv;
  bool chamfer_only = false;
  int level = 3;
  metrics_cmd->add_option("pred", pred_path, "predicted OBJ")->required();
  metrics_cmd->add_option("gt", gt_path, "ground-truth OBJ")->required();
  metrics_cmd->add_option("--mode", mode_name, "chamfer mode: vertex or surface");
  metrics_cmd->add_option("--weights", weights_json,
                          "loss weights JSON, echoed in the breakdown");
  metrics_cmd->add_option("--joints-pred", joints_pred_path, "predicted joints JSON");
  metrics_cmd->add_option("--joints-gt", joints_gt_path, "ground-truth joints JSON");
  metrics_cmd->add_option("--per-frequency-csv", per_frequency_csv,
                          "write per-frequency S_f values here");
  metrics_cmd->add_flag("--chamfer-only", chamfer_only,
                        "skip spectral metrics (different resolutions)");
  metrics_cmd->add_option("--level", level, "resolution level for the breakdown");

  // subdivide
  auto* subdivide = app.add_subcommand("subdivide", "Loop-subdivide a mesh or model");
  std::string subdivide_input;
  int levels = 0;
  subdivide->add_option("input", subdivide_input, "OBJ mesh or model JSON")->required();
  subdivide->add_option("--levels", levels, "subdivision levels (>= 1)")->required();

  // noise-sweep
  auto* sweep = app.add_subcommand("noise-sweep", "band-noise sensitivity grid");
  std::string sweep_mesh;
  sweep->add_option("mesh", sweep_mesh, "input OBJ")->required();

  // gradcheck
  auto* gradcheck = app.add_subcommand(
      "gradcheck", "frequency-loss gradient vs central differences");
  int gradcheck_size = 30;
  bool corrupt = false;
  gradcheck->add_option("--size", gradcheck_size, "fixture vertex count (<= 200)");
  gradcheck->add_flag("--corrupt", corrupt, "test hook: corrupt the gradient")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*decompose) {
      if (cuts.empty() && !spectrum) {
        throw ArgumentError("decompose needs --cuts and/or --spectrum");
      }
      return cmd_decompose(decompose_mesh, cuts, spectrum, opts);
    }
    if (*metrics_cmd) {
      return cmd_metrics(pred_path, gt_path, mode_name, weights_json,
                         joints_pred_path, joints_gt_path, per_frequency_csv,
                         chamfer_only, level, opts);
    }
    if (*subdivide) return cmd_subdivide(subdivide_input, levels, opts);
    if (*sweep) return cmd_noise_sweep(sweep_mesh, opts);
    if (*gradcheck) return cmd_gradcheck(gradcheck_size, corrupt, opts);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
