#include "rirsim/scene.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rirsim/diffuse.hpp"

namespace rirsim {

SceneError::SceneError(const std::string& origin, int line, const std::string& message)
    : InvalidArgument(line > 0 ? origin + ":" + std::to_string(line) + ": " + message
                               : origin + ": " + message),
      line_(line) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    const int line = node.IsDefined() && node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
    throw SceneError(origin_, line, message);
  }

  void require_map(const YAML::Node& node, const std::string& what,
                   std::initializer_list<const char*> allowed) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!keys.contains(key)) fail(kv.first, "unknown key '" + key + "' in " + what);
    }
  }

  double number(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a number");
    try {
      const double v = node.as<double>();
      if (!std::isfinite(v)) fail(node, what + " must be finite");
      return v;
    } catch (const YAML::BadConversion&) {
      fail(node, what + " must be a number");
    }
  }

  double positive(const YAML::Node& node, const std::string& what) const {
    const double v = number(node, what);
    if (!(v > 0.0)) fail(node, what + " must be positive");
    return v;
  }

  double non_negative(const YAML::Node& node, const std::string& what) const {
    const double v = number(node, what);
    if (!(v >= 0.0)) fail(node, what + " must be non-negative");
    return v;
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& what,
                              std::size_t count) const {
    if (!node.IsSequence() || node.size() != count) {
      fail(node, what + " must be a list of " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const auto& item : node) out.push_back(number(item, what));
    return out;
  }

  Point3 point(const YAML::Node& node, const std::string& what) const {
    const auto v = numbers(node, what, 3);
    return {v[0], v[1], v[2]};
  }

  std::string text(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a string");
    return node.as<std::string>();
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

Point3 parse_position_entry(const Parser& p, const YAML::Node& entry, const std::string& what,
                            const Scene::Room& room) {
  p.require_map(entry, what, {"pos"});
  if (!entry["pos"]) p.fail(entry, what + " needs 'pos'");
  const Point3 pos = p.point(entry["pos"], what + ".pos");
  if (!RoomSpec{room.size, {}}.contains(pos)) p.fail(entry["pos"], what + " lies outside the room");
  return pos;
}

}  // namespace

Scene parse_scene(std::string_view text, const std::string& origin) {
  const Parser p(origin);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw SceneError(origin, e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
  }
  p.require_map(root, "scene", {"room", "sources", "receivers", "trajectory", "sim"});
  Scene scene;

  // room
  const YAML::Node room = root["room"];
  if (!room) p.fail(root, "scene needs a 'room' section");
  p.require_map(room, "room", {"size", "beta", "t60", "beta_sign"});
  if (!room["size"]) p.fail(room, "room needs 'size'");
  scene.room.size = p.point(room["size"], "room.size");
  for (int a = 0; a < 3; ++a) {
    if (!(scene.room.size[a] > 0.0)) p.fail(room["size"], "room.size entries must be positive");
  }
  if (static_cast<bool>(room["beta"]) == static_cast<bool>(room["t60"])) {
    p.fail(room, "room needs exactly one of 'beta' or 't60'");
  }
  if (room["beta"]) {
    const auto b = p.numbers(room["beta"], "room.beta", 6);
    std::array<double, 6> beta;
    for (int w = 0; w < 6; ++w) {
      if (std::abs(b[w]) > 1.0) p.fail(room["beta"], "room.beta entries must satisfy |beta| <= 1");
      beta[w] = b[w];
    }
    scene.room.beta = beta;
    if (room["beta_sign"]) p.fail(room["beta_sign"], "room.beta_sign only applies with 't60'");
  } else {
    scene.room.t60 = p.positive(room["t60"], "room.t60");
  }
  if (room["beta_sign"]) {
    const auto sign = p.text(room["beta_sign"], "room.beta_sign");
    if (sign == "negative") {
      scene.room.beta_sign = BetaSign::kNegative;
    } else if (sign == "positive") {
      scene.room.beta_sign = BetaSign::kPositive;
    } else {
      p.fail(room["beta_sign"], "room.beta_sign must be 'negative' or 'positive'");
    }
  }

  // sources / trajectory
  const YAML::Node sources = root["sources"];
  if (sources) {
    if (!sources.IsSequence()) p.fail(sources, "sources must be a list");
    for (std::size_t i = 0; i < sources.size(); ++i) {
      scene.sources.push_back(
          parse_position_entry(p, sources[i], "sources[" + std::to_string(i) + "]", scene.room));
    }
  }
  const YAML::Node trajectory = root["trajectory"];
  if (trajectory) {
    if (!trajectory.IsSequence()) p.fail(trajectory, "trajectory must be a list");
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      scene.trajectory.push_back(parse_position_entry(
          p, trajectory[i], "trajectory[" + std::to_string(i) + "]", scene.room));
    }
  }
  if (scene.sources.empty() && scene.trajectory.empty()) {
    p.fail(root, "scene needs at least one source or a trajectory");
  }

  // receivers
  const YAML::Node receivers = root["receivers"];
  if (!receivers || !receivers.IsSequence() || receivers.size() == 0) {
    p.fail(receivers ? receivers : root, "scene needs a non-empty 'receivers' list");
  }
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    const std::string what = "receivers[" + std::to_string(i) + "]";
    const YAML::Node r = receivers[i];
    p.require_map(r, what, {"pos", "pattern", "orientation"});
    if (!r["pos"]) p.fail(r, what + " needs 'pos'");
    Receiver rcv;
    rcv.pos = p.point(r["pos"], what + ".pos");
    if (!RoomSpec{scene.room.size, {}}.contains(rcv.pos)) {
      p.fail(r["pos"], what + " lies outside the room");
    }
    if (r["pattern"]) {
      try {
        rcv.pattern = parse_polar_pattern(p.text(r["pattern"], what + ".pattern"));
      } catch (const InvalidArgument& e) {
        p.fail(r["pattern"], e.what());
      }
    }
    if (r["orientation"]) {
      rcv.orientation = p.point(r["orientation"], what + ".orientation");
      if (std::abs(norm(rcv.orientation) - 1.0) > kUnitNormTolerance) {
        p.fail(r["orientation"], what + ".orientation must be a unit vector");
      }
    }
    scene.receivers.push_back(rcv);
  }

  // sim
  const YAML::Node sim = root["sim"];
  if (!sim) p.fail(root, "scene needs a 'sim' section");
  p.require_map(sim, "sim",
                {"fs", "duration", "att_max_db", "t_diff", "att_diff_db", "c", "mode", "seed", "grid"});
  if (!sim["fs"]) p.fail(sim, "sim needs 'fs'");
  scene.sim.fs = p.positive(sim["fs"], "sim.fs");
  if (sim["duration"] && sim["att_max_db"]) {
    p.fail(sim["att_max_db"], "sim takes at most one of 'duration' and 'att_max_db'");
  }
  if (sim["t_diff"] && sim["att_diff_db"]) {
    p.fail(sim["att_diff_db"], "sim takes at most one of 't_diff' and 'att_diff_db'");
  }
  if (sim["duration"]) scene.sim.duration = p.positive(sim["duration"], "sim.duration");
  if (sim["att_max_db"]) scene.sim.att_max_db = p.positive(sim["att_max_db"], "sim.att_max_db");
  if (sim["t_diff"]) scene.sim.t_diff = p.positive(sim["t_diff"], "sim.t_diff");
  if (sim["att_diff_db"]) scene.sim.att_diff_db = p.positive(sim["att_diff_db"], "sim.att_diff_db");
  if (scene.sim.duration && scene.sim.t_diff && *scene.sim.t_diff > *scene.sim.duration) {
    p.fail(sim["t_diff"], "sim.t_diff must not exceed sim.duration");
  }
  if (sim["c"]) scene.sim.c = p.positive(sim["c"], "sim.c");
  if (sim["mode"]) {
    try {
      scene.sim.mode = parse_render_path(p.text(sim["mode"], "sim.mode"));
    } catch (const InvalidArgument& e) {
      p.fail(sim["mode"], e.what());
    }
  }
  if (sim["seed"]) {
    try {
      scene.sim.seed = sim["seed"].as<std::uint64_t>();
    } catch (const YAML::BadConversion&) {
      p.fail(sim["seed"], "sim.seed must be a non-negative integer");
    }
  }
  if (sim["grid"]) {
    const auto g = p.numbers(sim["grid"], "sim.grid", 3);
    int counts[3];
    for (int a = 0; a < 3; ++a) {
      if (!(g[a] >= 1.0 && g[a] == std::floor(g[a]) && g[a] < 1e6)) {
        p.fail(sim["grid"], "sim.grid entries must be positive integers");
      }
      counts[a] = static_cast<int>(g[a]);
    }
    scene.sim.grid = ImageGrid{counts[0], counts[1], counts[2]};
  }
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SceneError(path.string(), 0, "cannot open scene file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), path.string());
}

namespace {

void emit_point(YAML::Emitter& out, const Point3& p) {
  out << YAML::Flow << YAML::BeginSeq << p.x << p.y << p.z << YAML::EndSeq;
}

void emit_positions(YAML::Emitter& out, const char* key, const std::vector<Point3>& points) {
  if (points.empty()) return;
  out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
  for (const auto& p : points) {
    out << YAML::BeginMap << YAML::Key << "pos" << YAML::Value;
    emit_point(out, p);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
}

}  // namespace

std::string serialize_scene(const Scene& scene) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "room" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "size" << YAML::Value;
  emit_point(out, scene.room.size);
  if (scene.room.beta) {
    out << YAML::Key << "beta" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double b : *scene.room.beta) out << b;
    out << YAML::EndSeq;
  } else {
    out << YAML::Key << "t60" << YAML::Value << *scene.room.t60;
    out << YAML::Key << "beta_sign" << YAML::Value
        << (scene.room.beta_sign == BetaSign::kNegative ? "negative" : "positive");
  }
  out << YAML::EndMap;

  emit_positions(out, "sources", scene.sources);
  emit_positions(out, "trajectory", scene.trajectory);

  out << YAML::Key << "receivers" << YAML::Value << YAML::BeginSeq;
  for (const auto& r : scene.receivers) {
    out << YAML::BeginMap;
    out << YAML::Key << "pos" << YAML::Value;
    emit_point(out, r.pos);
    out << YAML::Key << "pattern" << YAML::Value << std::string(to_string(r.pattern));
    out << YAML::Key << "orientation" << YAML::Value;
    emit_point(out, r.orientation);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  const auto& sim = scene.sim;
  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fs" << YAML::Value << sim.fs;
  if (sim.duration) out << YAML::Key << "duration" << YAML::Value << *sim.duration;
  if (sim.att_max_db) out << YAML::Key << "att_max_db" << YAML::Value << *sim.att_max_db;
  if (sim.t_diff) out << YAML::Key << "t_diff" << YAML::Value << *sim.t_diff;
  if (sim.att_diff_db) out << YAML::Key << "att_diff_db" << YAML::Value << *sim.att_diff_db;
  out << YAML::Key << "c" << YAML::Value << sim.c;
  out << YAML::Key << "mode" << YAML::Value << std::string(to_string(sim.mode));
  if (sim.seed) out << YAML::Key << "seed" << YAML::Value << *sim.seed;
  if (sim.grid) {
    out << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginSeq << sim.grid->nx
        << sim.grid->ny << sim.grid->nz << YAML::EndSeq;
  }
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

ResolvedScene resolve_scene(const Scene& scene) {
  ResolvedScene r;
  r.room.size = scene.room.size;
  r.room.beta = scene.room.beta ? *scene.room.beta
                                : beta_from_t60(scene.room.size, *scene.room.t60, scene.room.beta_sign);
  try {
    r.t60 = sabine_t60(r.room);
  } catch (const NonFiniteT60&) {
    r.t60.reset();
  }
  // Durations follow the requested T60 when one is given.
  const std::optional<double> decay_t60 = scene.room.t60 ? scene.room.t60 : r.t60;
  const auto need_t60 = [&]() -> double {
    if (!decay_t60) {
      throw NonFiniteT60("attenuation-based durations need a finite T60, but every wall is "
                         "perfectly reflective");
    }
    return *decay_t60;
  };

  SimConfig& cfg = r.config;
  cfg.fs = scene.sim.fs;
  cfg.speed_of_sound = scene.sim.c;
  cfg.mode.path = scene.sim.mode;
  cfg.seed = scene.sim.seed.value_or(kDefaultSeed);
  cfg.t_max = scene.sim.duration
                  ? *scene.sim.duration
                  : time_to_attenuation(need_t60(), scene.sim.att_max_db.value_or(kDefaultAttMaxDb));
  if (scene.sim.t_diff) {
    cfg.t_diff = *scene.sim.t_diff;
  } else if (scene.sim.att_diff_db || decay_t60) {
    cfg.t_diff = std::min(cfg.t_max, time_to_attenuation(
                                         need_t60(), scene.sim.att_diff_db.value_or(kDefaultAttDiffDb)));
  } else {
    cfg.t_diff = cfg.t_max;  // no finite T60: image sources only
  }
  if (cfg.t_diff > cfg.t_max) {
    throw SceneError("scene", 0, "t_diff exceeds the RIR duration");
  }

  r.sources = scene.sources;
  r.receivers = scene.receivers;
  r.trajectory = scene.trajectory;
  r.grid = scene.sim.grid;
  cfg.validate();
  return r;
}

}  // namespace rirsim
