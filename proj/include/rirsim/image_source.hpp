#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "rirsim/geometry.hpp"

namespace rirsim {

inline constexpr double kDefaultSpeedOfSound = 343.0;

struct GridIndex {
  int x = 0;
  int y = 0;
  int z = 0;

  int operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

// Number of images per axis. Axis a spans ceil(-N/2) .. ceil(N/2) - 1.
struct ImageGrid {
  int nx = 1;
  int ny = 1;
  int nz = 1;

  int count(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;
};

// First index of an axis with n images, i.e. ceil(-n/2).
constexpr int grid_first_index(int n) { return -(n / 2); }
// One past the last index, i.e. ceil(n/2).
constexpr int grid_end_index(int n) { return (n + 1) / 2; }

// All grid triples, x varying fastest, then y, then z.
std::vector<GridIndex> grid_indices(const ImageGrid& grid);

Point3 image_position(const GridIndex& n, const RoomSpec& room, const Point3& src);

// Number of times the path from image n to the receiver hits each wall,
// in Wall order.
std::array<int, 6> wall_crossings(const GridIndex& n);

// Product of beta over all wall hits, signs included.
double reflection_product(const GridIndex& n, const RoomSpec& room);

// Receiver gain a + (1 - a) cos(theta) for a unit arrival direction.
double directivity_gain(PolarPattern pattern, const Point3& orientation,
                        const Point3& direction);

struct AmpTau {
  double amplitude = 0.0;
  double delay = 0.0;  // seconds
};

AmpTau image_amp_tau(const GridIndex& n, const RoomSpec& room, const Point3& src,
                     const Receiver& rcv, double speed_of_sound);

// Amplitudes and delays of every image for every (source, receiver) pair.
// Pair p = source * n_receivers + receiver; image order is grid_indices order.
class ImageSourceSet {
 public:
  ImageSourceSet() = default;
  ImageSourceSet(std::size_t n_sources, std::size_t n_receivers, std::size_t n_images);

  std::size_t n_sources() const { return n_sources_; }
  std::size_t n_receivers() const { return n_receivers_; }
  std::size_t n_pairs() const { return n_sources_ * n_receivers_; }
  std::size_t n_images() const { return n_images_; }

  std::span<double> amplitudes(std::size_t pair);
  std::span<const double> amplitudes(std::size_t pair) const;
  std::span<double> delays(std::size_t pair);
  std::span<const double> delays(std::size_t pair) const;

  friend bool operator==(const ImageSourceSet&, const ImageSourceSet&) = default;

 private:
  std::size_t n_sources_ = 0;
  std::size_t n_receivers_ = 0;
  std::size_t n_images_ = 0;
  std::vector<double> amplitude_;
  std::vector<double> delay_;
};

ImageSourceSet compute_image_set(const RoomSpec& room, std::span<const Point3> sources,
                                 std::span<const Receiver> receivers,
                                 const ImageGrid& grid,
                                 double speed_of_sound = kDefaultSpeedOfSound,
                                 unsigned threads = 0);

}  // namespace rirsim
