#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "rirsim/audio_io.hpp"
#include "rirsim/diffuse.hpp"
#include "rirsim/error.hpp"
#include "rirsim/pipeline.hpp"
#include "rirsim/scene.hpp"

namespace rirsim::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum class OutputFormat { kWav, kRaw };

struct CommonOptions {
  std::string scene;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  unsigned threads = 0;
};

void add_common(CLI::App& cmd, CommonOptions& opts) {
  cmd.add_option("--scene", opts.scene, "Scene file (YAML)")->required();
  cmd.add_option("--seed", opts.seed, "Override the diffuse-tail seed");
  cmd.add_option("--mode", opts.mode, "Render path")
      ->check(CLI::IsMember({"direct32", "lut", "half16"}));
  cmd.add_option("--threads", opts.threads, "Worker cap, 0 = all cores");
}

Scene load_with_overrides(const CommonOptions& opts) {
  Scene scene = load_scene(opts.scene);
  if (opts.seed) scene.sim.seed = *opts.seed;
  if (opts.mode) scene.sim.mode = parse_render_path(*opts.mode);
  return scene;
}

void write_signal(const fs::path& path, const MultichannelSignal& signal, OutputFormat format) {
  if (format == OutputFormat::kWav) {
    write_wav_float(path, signal);
  } else {
    write_raw_float(path, signal);
  }
}

MultichannelSignal read_signal(const fs::path& path) {
  auto ext = path.extension().string();
  std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".wav") return read_wav(path);
  return read_raw_float(path);
}

json point_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

json scene_json(const ResolvedScene& r, const Scene& scene) {
  json room = {{"size", point_json(r.room.size)},
               {"beta", r.room.beta},
               {"t60", r.t60 ? json(*r.t60) : json(nullptr)}};
  if (scene.room.t60) room["t60_target"] = *scene.room.t60;
  json receivers = json::array();
  for (const auto& rcv : r.receivers) {
    receivers.push_back({{"pos", point_json(rcv.pos)},
                         {"pattern", std::string(to_string(rcv.pattern))},
                         {"orientation", point_json(rcv.orientation)}});
  }
  return {{"room", room},
          {"receivers", receivers},
          {"fs", r.config.fs},
          {"c", r.config.speed_of_sound},
          {"mode", std::string(to_string(r.config.mode.path))},
          {"seed", r.config.seed},
          {"duration", r.config.t_max},
          {"t_diff", r.config.t_diff}};
}

json simulation_json(const SimulationResult& sim) {
  json envelopes = json::array();
  for (const auto& e : sim.envelopes) envelopes.push_back(e.amplitude);
  return {{"grid", {sim.grid.nx, sim.grid.ny, sim.grid.nz}},
          {"n_images", sim.grid.size()},
          {"n_samples", sim.rirs.n_samples()},
          {"tail_t60", sim.t60 ? json(*sim.t60) : json(nullptr)},
          {"tail_amplitudes", envelopes},
          {"timings_ms",
           {{"image_sources", sim.timings.image_sources_ms},
            {"render", sim.timings.render_ms},
            {"diffuse", sim.timings.diffuse_ms}}}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void write_decay_csv(const fs::path& path, const RirTensor& rirs) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  std::vector<std::vector<double>> curves;
  out << "time_s";
  for (std::size_t s = 0; s < rirs.n_sources(); ++s) {
    for (std::size_t r = 0; r < rirs.n_receivers(); ++r) {
      out << ",s" << s << "_r" << r << "_db";
      curves.push_back(schroeder_decay_db(rirs.channel(s, r)));
    }
  }
  out << "\n" << std::setprecision(9);
  for (std::size_t k = 0; k < rirs.n_samples(); ++k) {
    out << static_cast<double>(k) / rirs.fs();
    for (const auto& c : curves) out << "," << c[k];
    out << "\n";
  }
}

// simulate ------------------------------------------------------------------

struct SimulateOptions {
  CommonOptions common;
  std::string out;
  std::string format = "wav";
  std::string decay_csv;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out) {
  const Scene scene = load_with_overrides(opts.common);
  if (scene.sources.empty()) throw InvalidArgument("scene defines no sources");
  const ResolvedScene r = resolve_scene(scene);
  const auto sim = simulate_rirs(r.room, r.sources, r.receivers, r.config, r.grid,
                                 opts.common.threads);

  const fs::path dir(opts.out);
  fs::create_directories(dir);
  const auto format = opts.format == "raw" ? OutputFormat::kRaw : OutputFormat::kWav;
  json files = json::array();
  for (std::size_t s = 0; s < sim.rirs.n_sources(); ++s) {
    MultichannelSignal signal(sim.rirs.n_receivers(), sim.rirs.n_samples(), sim.rirs.fs());
    for (std::size_t rc = 0; rc < sim.rirs.n_receivers(); ++rc) {
      std::ranges::copy(sim.rirs.channel(s, rc), signal.channel(rc).begin());
    }
    const auto name = "source_" + std::to_string(s) + (format == OutputFormat::kWav ? ".wav" : ".raw");
    write_signal(dir / name, signal, format);
    files.push_back(name);
  }
  if (!opts.decay_csv.empty()) write_decay_csv(opts.decay_csv, sim.rirs);

  json manifest = scene_json(r, scene);
  manifest["command"] = "simulate";
  json sources = json::array();
  for (const auto& p : r.sources) sources.push_back(point_json(p));
  manifest["sources"] = sources;
  manifest.update(simulation_json(sim));
  manifest["files"] = files;
  write_json(dir / "manifest.json", manifest);
  out << "wrote " << files.size() << " file(s) to " << dir.string() << "\n";
  return kExitOk;
}

// trajectory ----------------------------------------------------------------

struct TrajectoryOptions {
  CommonOptions common;
  std::string input;
  std::string out;
  std::string format = "wav";
};

int cmd_trajectory(const TrajectoryOptions& opts, std::ostream& out) {
  const Scene scene = load_with_overrides(opts.common);
  if (scene.trajectory.empty()) throw InvalidArgument("scene defines no trajectory");
  const MultichannelSignal input = read_signal(opts.input);
  if (input.n_channels() != 1) {
    throw InvalidArgument("trajectory input must be mono, got " +
                          std::to_string(input.n_channels()) + " channels");
  }
  const ResolvedScene r = resolve_scene(scene);
  if (input.fs() != r.config.fs) {
    throw InvalidArgument("input sample rate does not match the scene's fs");
  }
  const auto result = simulate_moving_source(input.channel(0), r.room, r.trajectory, r.receivers,
                                             r.config, r.grid, opts.common.threads);
  const auto format = opts.format == "raw" ? OutputFormat::kRaw : OutputFormat::kWav;
  write_signal(opts.out, result.output, format);
  out << "wrote " << result.output.n_channels() << " channel(s), " << result.output.n_samples()
      << " samples to " << opts.out << "\n";
  return kExitOk;
}

// bench ---------------------------------------------------------------------

struct BenchOptions {
  CommonOptions common;
  std::string sweep;
  std::vector<std::string> modes{"direct32", "lut"};
  std::vector<unsigned> thread_counts{1};
  unsigned repeat = 1;
  std::string out;
};

struct Sweep {
  std::string param;
  std::vector<double> values;
};

Sweep parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw InvalidArgument("sweep must look like name=v1,v2,...");
  Sweep sweep{spec.substr(0, eq), {}};
  if (sweep.param != "msrc" && sweep.param != "t60") {
    throw InvalidArgument("sweep parameter must be 'msrc' or 't60'");
  }
  std::stringstream ss(spec.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !(v > 0.0)) {
      throw InvalidArgument("bad sweep value '" + item + "'");
    }
    if (sweep.param == "msrc" && v != std::floor(v)) {
      throw InvalidArgument("msrc values must be integers");
    }
    sweep.values.push_back(v);
  }
  if (sweep.values.empty()) throw InvalidArgument("sweep has no values");
  return sweep;
}

// Deterministic source positions for the #RIR sweep.
std::vector<Point3> bench_sources(const Point3& size, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point3> sources;
  for (std::size_t i = 0; i < count; ++i) {
    Point3 p;
    for (int a = 0; a < 3; ++a) {
      p[a] = std::uniform_real_distribution<double>(0.1 * size[a], 0.9 * size[a])(rng);
    }
    sources.push_back(p);
  }
  return sources;
}

int cmd_bench(const BenchOptions& opts, std::ostream& out) {
  const Scene base = load_with_overrides(opts.common);
  const Sweep sweep = parse_sweep(opts.sweep);
  std::vector<RenderPath> modes;
  for (const auto& m : opts.modes) modes.push_back(parse_render_path(m));
  if (opts.repeat < 1) throw InvalidArgument("repeat must be >= 1");

  std::ofstream file;
  if (!opts.out.empty()) {
    file.open(opts.out);
    if (!file) throw Error("cannot write " + opts.out);
  }
  std::ostream& csv = opts.out.empty() ? out : file;
  csv << "param,value,mode,threads,wall_ms\n";

  for (double value : sweep.values) {
    Scene scene = base;
    if (sweep.param == "t60") {
      scene.room.beta.reset();
      scene.room.t60 = value;
    } else {
      scene.sources = bench_sources(scene.room.size, static_cast<std::size_t>(value),
                                    scene.sim.seed.value_or(kDefaultSeed));
    }
    if (scene.sources.empty()) throw InvalidArgument("scene defines no sources");
    for (RenderPath mode : modes) {
      scene.sim.mode = mode;
      const ResolvedScene r = resolve_scene(scene);
      for (unsigned threads : opts.thread_counts) {
        double best = std::numeric_limits<double>::infinity();
        for (unsigned rep = 0; rep < opts.repeat; ++rep) {
          const auto start = std::chrono::steady_clock::now();
          const auto sim = simulate_rirs(r.room, r.sources, r.receivers, r.config, r.grid, threads);
          const auto stop = std::chrono::steady_clock::now();
          best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
        }
        csv << sweep.param << "," << value << "," << to_string(mode) << "," << threads << ","
            << std::fixed << std::setprecision(3) << best << std::defaultfloat << "\n";
      }
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Room impulse response simulator", "rirsim"};
  app.require_subcommand(1);

  SimulateOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Render RIRs for every source/receiver pair");
  add_common(*simulate, sim_opts.common);
  simulate->add_option("--out", sim_opts.out, "Output directory")->required();
  simulate->add_option("--format", sim_opts.format, "Audio format")
      ->check(CLI::IsMember({"wav", "raw"}));
  simulate->add_option("--decay-csv", sim_opts.decay_csv, "Write Schroeder decay curves (dB)");

  TrajectoryOptions traj_opts;
  auto* trajectory = app.add_subcommand("trajectory", "Filter a mono signal along a source path");
  add_common(*trajectory, traj_opts.common);
  trajectory->add_option("--input", traj_opts.input, "Mono input (WAV or raw+sidecar)")->required();
  trajectory->add_option("--out", traj_opts.out, "Output file")->required();
  trajectory->add_option("--format", traj_opts.format, "Audio format")
      ->check(CLI::IsMember({"wav", "raw"}));

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Time the pipeline over a parameter sweep");
  bench->add_option("--scene", bench_opts.common.scene, "Scene file (YAML)")->required();
  bench->add_option("--seed", bench_opts.common.seed, "Override the seed");
  bench->add_option("--sweep", bench_opts.sweep, "msrc=1,16,128 or t60=0.3,0.7,1.1")->required();
  bench->add_option("--modes", bench_opts.modes, "Render paths")
      ->delimiter(',')
      ->check(CLI::IsMember({"direct32", "lut", "half16"}));
  bench->add_option("--threads", bench_opts.thread_counts, "Thread counts")->delimiter(',');
  bench->add_option("--repeat", bench_opts.repeat, "Runs per row, best time reported");
  bench->add_option("--out", bench_opts.out, "CSV file, stdout when omitted");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*simulate) return cmd_simulate(sim_opts, out);
    if (*trajectory) return cmd_trajectory(traj_opts, out);
    return cmd_bench(bench_opts, out);
  } catch (const InfeasibleTarget& e) {
    err << "rirsim: infeasible configuration: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NonFiniteT60& e) {
    err << "rirsim: infeasible configuration: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const CapacityError& e) {
    err << "rirsim: infeasible configuration: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InvalidArgument& e) {
    err << "rirsim: error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const DegenerateGeometry& e) {
    err << "rirsim: error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InsufficientData& e) {
    err << "rirsim: error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "rirsim: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace rirsim::cli
