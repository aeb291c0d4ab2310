#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rirsim/error.hpp"
#include "rirsim/geometry.hpp"
#include "rirsim/image_source.hpp"
#include "rirsim/render.hpp"
#include "rirsim/room_utils.hpp"

namespace rirsim {

// Scene parse or validation failure; line is 1-based, 0 when unknown.
class SceneError : public InvalidArgument {
 public:
  SceneError(const std::string& origin, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

inline constexpr double kDefaultAttMaxDb = 60.0;
inline constexpr double kDefaultAttDiffDb = 15.0;
inline constexpr std::uint64_t kDefaultSeed = 0;

// Scene file contents as written, before defaults and room-utils resolution.
struct Scene {
  struct Room {
    Point3 size;
    std::optional<std::array<double, 6>> beta;
    std::optional<double> t60;
    BetaSign beta_sign = BetaSign::kNegative;
    friend bool operator==(const Room&, const Room&) = default;
  };
  struct Sim {
    double fs = 16000.0;
    std::optional<double> duration;
    std::optional<double> att_max_db;
    std::optional<double> t_diff;
    std::optional<double> att_diff_db;
    double c = kDefaultSpeedOfSound;
    RenderPath mode = RenderPath::kLut;
    std::optional<std::uint64_t> seed;
    std::optional<ImageGrid> grid;
    friend bool operator==(const Sim&, const Sim&) = default;
  };

  Room room;
  std::vector<Point3> sources;
  std::vector<Receiver> receivers;
  std::vector<Point3> trajectory;
  Sim sim;

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Parses and validates a YAML scene document. Throws SceneError.
Scene parse_scene(std::string_view text, const std::string& origin = "scene");
Scene load_scene(const std::filesystem::path& path);
std::string serialize_scene(const Scene& scene);

// Scene with coefficients, durations and defaults resolved.
struct ResolvedScene {
  RoomSpec room;
  std::optional<double> t60;  // Sabine T60 of the resolved room, if finite
  std::vector<Point3> sources;
  std::vector<Receiver> receivers;
  std::vector<Point3> trajectory;
  SimConfig config;
  std::optional<ImageGrid> grid;

  friend bool operator==(const ResolvedScene&, const ResolvedScene&) = default;
};

// Throws InfeasibleTarget for unreachable T60 targets and NonFiniteT60 when
// attenuation-based durations need a T60 the room does not have.
ResolvedScene resolve_scene(const Scene& scene);

}  // namespace rirsim
