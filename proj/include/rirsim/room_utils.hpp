#pragma once

#include <cstdint>

#include "rirsim/geometry.hpp"
#include "rirsim/image_source.hpp"
#include "rirsim/render.hpp"
#include "rirsim/sinc.hpp"

namespace rirsim {

struct SimConfig {
  double fs = 16000.0;
  double speed_of_sound = kDefaultSpeedOfSound;
  double window_length = kDefaultWindowLength;
  double cutoff = 0.0;  // 0 selects fs / 2
  double t_diff = 0.0;  // image-source part ends, diffuse tail starts
  double t_max = 0.0;   // total RIR duration
  RenderMode mode;
  std::uint64_t seed = 0;

  SincWindowParams window() const;
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

enum class BetaSign { kNegative, kPositive };

// Uniform absorption alpha = 0.161 V / (T60 S) on all six walls, returned as
// |beta| = sqrt(1 - alpha). Throws InfeasibleTarget when alpha would exceed 1.
std::array<double, 6> beta_from_t60(const Point3& room_size, double t60,
                                    BetaSign sign = BetaSign::kNegative);

// Time for an exponential decay with the given T60 to drop by `attenuation_db`.
double time_to_attenuation(double t60, double attenuation_db);

// Per axis N = 2 (ceil(c t / L) + 1) + 1: every image with delay <= t is
// inside the grid wherever source and receiver sit in the room.
ImageGrid images_for_time(const Point3& room_size, double t, double speed_of_sound = kDefaultSpeedOfSound);

}  // namespace rirsim
