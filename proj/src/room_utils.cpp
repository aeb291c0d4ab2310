#include "rirsim/room_utils.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rirsim/error.hpp"

namespace rirsim {

SincWindowParams SimConfig::window() const {
  return {window_length, cutoff > 0.0 ? cutoff : fs / 2.0, fs};
}

void SimConfig::validate() const {
  if (!(std::isfinite(fs) && fs > 0.0)) throw InvalidArgument("fs must be positive");
  if (!(std::isfinite(speed_of_sound) && speed_of_sound > 0.0)) {
    throw InvalidArgument("speed of sound must be positive");
  }
  if (!(t_diff > 0.0 && t_diff <= t_max) || !std::isfinite(t_max)) {
    throw InvalidArgument("durations must satisfy 0 < t_diff <= t_max");
  }
  if (mode.block_size < 1) throw InvalidArgument("block size must be >= 1");
  window().validate();
}

std::array<double, 6> beta_from_t60(const Point3& room_size, double t60, BetaSign sign) {
  RoomSpec room{room_size, {}};
  room.validate();
  const double area = room.total_surface();
  const double min_t60 = 0.161 * room.volume() / area;
  if (!(t60 > 0.0) || !std::isfinite(t60)) {
    throw InfeasibleTarget("target T60 must be finite and positive");
  }
  const double alpha = min_t60 / t60;
  if (alpha > 1.0) {
    throw InfeasibleTarget("infeasible target T60 " + std::to_string(t60) +
                           " s: this room cannot decay faster than " + std::to_string(min_t60) +
                           " s");
  }
  const double magnitude = std::sqrt(1.0 - alpha);
  std::array<double, 6> beta;
  beta.fill(sign == BetaSign::kNegative ? -magnitude : magnitude);
  return beta;
}

double time_to_attenuation(double t60, double attenuation_db) {
  if (!(attenuation_db >= 0.0)) throw InvalidArgument("attenuation must be non-negative");
  if (!(t60 > 0.0)) throw InvalidArgument("T60 must be positive");
  return attenuation_db / 60.0 * t60;
}

ImageGrid images_for_time(const Point3& room_size, double t, double speed_of_sound) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("simulation time must be positive");
  if (!(speed_of_sound > 0.0)) throw InvalidArgument("speed of sound must be positive");
  RoomSpec{room_size, {}}.validate();
  int counts[3];
  for (int a = 0; a < 3; ++a) {
    const double per_side = std::ceil(speed_of_sound * t / room_size[a]) + 1.0;
    if (per_side > std::numeric_limits<int>::max() / 4) {
      throw CapacityError("image grid too large");
    }
    counts[a] = 2 * static_cast<int>(per_side) + 1;
  }
  return {counts[0], counts[1], counts[2]};
}

}  // namespace rirsim
