#include "rirsim/image_source.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rirsim/error.hpp"
#include "rirsim/parallel.hpp"

namespace rirsim {

// ---------------------------------------------------------------------------
// Geometry

std::array<double, 6> RoomSpec::wall_areas() const {
  const double yz = size.y * size.z;
  const double xz = size.x * size.z;
  const double xy = size.x * size.y;
  return {yz, yz, xz, xz, xy, xy};
}

double RoomSpec::total_surface() const {
  double total = 0.0;
  for (double s : wall_areas()) total += s;
  return total;
}

bool RoomSpec::contains(const Point3& p) const {
  for (int a = 0; a < 3; ++a) {
    if (!(p[a] >= 0.0 && p[a] <= size[a])) return false;
  }
  return true;
}

void RoomSpec::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (!(std::isfinite(size[a]) && size[a] > 0.0)) {
      throw InvalidArgument("room size must be finite and strictly positive");
    }
  }
  for (double b : beta) {
    if (!(std::isfinite(b) && std::abs(b) <= 1.0)) {
      throw InvalidArgument("reflection coefficients must satisfy |beta| <= 1, got " +
                            std::to_string(b));
    }
  }
}

std::string_view to_string(PolarPattern pattern) {
  switch (pattern) {
    case PolarPattern::kOmni: return "omni";
    case PolarPattern::kSubcardioid: return "subcardioid";
    case PolarPattern::kCardioid: return "cardioid";
    case PolarPattern::kHypercardioid: return "hypercardioid";
    case PolarPattern::kBidirectional: return "bidirectional";
  }
  return "omni";
}

PolarPattern parse_polar_pattern(std::string_view name) {
  for (auto p : {PolarPattern::kOmni, PolarPattern::kSubcardioid, PolarPattern::kCardioid,
                 PolarPattern::kHypercardioid, PolarPattern::kBidirectional}) {
    if (name == to_string(p)) return p;
  }
  throw InvalidArgument("unknown polar pattern '" + std::string(name) + "'");
}

double pattern_constant(PolarPattern pattern) {
  switch (pattern) {
    case PolarPattern::kOmni: return 1.0;
    case PolarPattern::kSubcardioid: return 0.75;
    case PolarPattern::kCardioid: return 0.5;
    case PolarPattern::kHypercardioid: return 0.25;
    case PolarPattern::kBidirectional: return 0.0;
  }
  return 1.0;
}

namespace {

void require_unit(const Point3& v, const char* what) {
  if (!is_finite(v) || std::abs(norm(v) - 1.0) > kUnitNormTolerance) {
    throw InvalidArgument(std::string(what) + " must be a unit vector");
  }
}

}  // namespace

void Receiver::validate() const {
  if (!is_finite(pos)) throw InvalidArgument("receiver position must be finite");
  require_unit(orientation, "receiver orientation");
}

// ---------------------------------------------------------------------------
// Image sources

std::vector<GridIndex> grid_indices(const ImageGrid& grid) {
  if (grid.nx < 1 || grid.ny < 1 || grid.nz < 1) {
    throw InvalidArgument("image grid counts must be >= 1");
  }
  std::vector<GridIndex> out;
  out.reserve(grid.size());
  for (int z = grid_first_index(grid.nz); z < grid_end_index(grid.nz); ++z) {
    for (int y = grid_first_index(grid.ny); y < grid_end_index(grid.ny); ++y) {
      for (int x = grid_first_index(grid.nx); x < grid_end_index(grid.nx); ++x) {
        out.push_back({x, y, z});
      }
    }
  }
  return out;
}

namespace {

// Unfolded coordinate of image index n along one axis.
double image_coordinate(int n, double length, double s) {
  if (n % 2 == 0) return n * length + s;
  return (n + 1) * length - s;
}

int floor_half(int n) { return n >= 0 ? n / 2 : -((-n + 1) / 2); }
int ceil_half(int n) { return n >= 0 ? (n + 1) / 2 : -((-n) / 2); }

}  // namespace

Point3 image_position(const GridIndex& n, const RoomSpec& room, const Point3& src) {
  if (!is_finite(src) || !room.contains(src)) {
    throw InvalidArgument("source must lie inside the room");
  }
  return {image_coordinate(n.x, room.size.x, src.x),
          image_coordinate(n.y, room.size.y, src.y),
          image_coordinate(n.z, room.size.z, src.z)};
}

std::array<int, 6> wall_crossings(const GridIndex& n) {
  std::array<int, 6> c{};
  for (int a = 0; a < 3; ++a) {
    c[2 * a] = std::abs(floor_half(n[a]));
    c[2 * a + 1] = std::abs(ceil_half(n[a]));
  }
  return c;
}

double reflection_product(const GridIndex& n, const RoomSpec& room) {
  const auto crossings = wall_crossings(n);
  double product = 1.0;
  for (int w = 0; w < 6; ++w) {
    for (int i = 0; i < crossings[w]; ++i) product *= room.beta[w];
  }
  return product;
}

double directivity_gain(PolarPattern pattern, const Point3& orientation,
                        const Point3& direction) {
  require_unit(orientation, "orientation");
  require_unit(direction, "direction");
  const double a = pattern_constant(pattern);
  if (a == 1.0) return 1.0;
  return a + (1.0 - a) * dot(orientation, direction);
}

namespace {

// Unchecked core shared by image_amp_tau and compute_image_set.
AmpTau amp_tau(const GridIndex& n, const RoomSpec& room, const Point3& src,
               const Receiver& rcv, double inv_c) {
  const Point3 image{image_coordinate(n.x, room.size.x, src.x),
                     image_coordinate(n.y, room.size.y, src.y),
                     image_coordinate(n.z, room.size.z, src.z)};
  const Point3 offset = image - rcv.pos;
  const double d = norm(offset);
  if (!(d > 0.0)) {
    throw DegenerateGeometry("image source coincides with a receiver");
  }
  double gain = 1.0;
  if (rcv.pattern != PolarPattern::kOmni) {
    const double a = pattern_constant(rcv.pattern);
    gain = a + (1.0 - a) * dot(rcv.orientation, offset) / d;
  }
  const double beta = reflection_product(n, room);
  return {beta * gain / (4.0 * std::numbers::pi * d), d * inv_c};
}

void check_speed(double c) {
  if (!(std::isfinite(c) && c > 0.0)) {
    throw InvalidArgument("speed of sound must be finite and positive");
  }
}

}  // namespace

AmpTau image_amp_tau(const GridIndex& n, const RoomSpec& room, const Point3& src,
                     const Receiver& rcv, double speed_of_sound) {
  room.validate();
  check_speed(speed_of_sound);
  rcv.validate();
  if (!is_finite(src) || !room.contains(src)) {
    throw InvalidArgument("source must lie inside the room");
  }
  if (!room.contains(rcv.pos)) throw InvalidArgument("receiver must lie inside the room");
  return amp_tau(n, room, src, rcv, 1.0 / speed_of_sound);
}

ImageSourceSet::ImageSourceSet(std::size_t n_sources, std::size_t n_receivers,
                               std::size_t n_images)
    : n_sources_(n_sources),
      n_receivers_(n_receivers),
      n_images_(n_images),
      amplitude_(n_sources * n_receivers * n_images),
      delay_(n_sources * n_receivers * n_images) {}

std::span<double> ImageSourceSet::amplitudes(std::size_t pair) {
  return std::span(amplitude_).subspan(pair * n_images_, n_images_);
}
std::span<const double> ImageSourceSet::amplitudes(std::size_t pair) const {
  return std::span(amplitude_).subspan(pair * n_images_, n_images_);
}
std::span<double> ImageSourceSet::delays(std::size_t pair) {
  return std::span(delay_).subspan(pair * n_images_, n_images_);
}
std::span<const double> ImageSourceSet::delays(std::size_t pair) const {
  return std::span(delay_).subspan(pair * n_images_, n_images_);
}

ImageSourceSet compute_image_set(const RoomSpec& room, std::span<const Point3> sources,
                                 std::span<const Receiver> receivers,
                                 const ImageGrid& grid, double speed_of_sound,
                                 unsigned threads) {
  room.validate();
  check_speed(speed_of_sound);
  for (const auto& s : sources) {
    if (!is_finite(s) || !room.contains(s)) {
      throw InvalidArgument("source must lie inside the room");
    }
  }
  for (const auto& r : receivers) {
    r.validate();
    if (!room.contains(r.pos)) throw InvalidArgument("receiver must lie inside the room");
  }
  const auto indices = grid_indices(grid);
  ImageSourceSet set(sources.size(), receivers.size(), indices.size());
  const double inv_c = 1.0 / speed_of_sound;

  parallel_for(set.n_pairs(), threads, [&](std::size_t pair, unsigned) {
    const Point3& src = sources[pair / receivers.size()];
    const Receiver& rcv = receivers[pair % receivers.size()];
    auto amp = set.amplitudes(pair);
    auto tau = set.delays(pair);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      const AmpTau at = amp_tau(indices[i], room, src, rcv, inv_c);
      amp[i] = at.amplitude;
      tau[i] = at.delay;
    }
  });
  return set;
}

}  // namespace rirsim
