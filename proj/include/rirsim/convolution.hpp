#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rirsim/geometry.hpp"
#include "rirsim/render.hpp"

namespace rirsim {

// Channel-major sample buffer [channel][time].
class MultichannelSignal {
 public:
  MultichannelSignal() = default;
  MultichannelSignal(std::size_t n_channels, std::size_t n_samples, double fs);

  std::size_t n_channels() const { return n_channels_; }
  std::size_t n_samples() const { return n_samples_; }
  double fs() const { return fs_; }

  std::span<float> channel(std::size_t c) {
    return std::span(data_).subspan(c * n_samples_, n_samples_);
  }
  std::span<const float> channel(std::size_t c) const {
    return std::span(data_).subspan(c * n_samples_, n_samples_);
  }

  friend bool operator==(const MultichannelSignal&, const MultichannelSignal&) = default;

 private:
  std::size_t n_channels_ = 0;
  std::size_t n_samples_ = 0;
  double fs_ = 0.0;
  std::vector<float> data_;
};

// Source positions along a path. Point i drives signal samples
// [bounds[i], bounds[i + 1]).
struct Trajectory {
  std::vector<Point3> points;
  std::vector<std::size_t> bounds;  // points.size() + 1 entries

  // Equal contiguous segments, the remainder going to the last one.
  static Trajectory split_evenly(std::vector<Point3> points, std::size_t n_samples);
  // Throws InvalidArgument unless the segments partition [0, n_samples).
  void validate(std::size_t n_samples) const;
};

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

// Filters a mono signal through every receiver RIR of `source`, by FFT
// overlap-add with blocks of block_size samples (0 picks one). Output has
// one channel per receiver and signal + RIR - 1 samples.
MultichannelSignal overlap_add_filter(std::span<const float> signal, const RirTensor& rirs,
                                      std::size_t source = 0, std::size_t block_size = 0,
                                      unsigned threads = 0);

// Moving source: segment i of the signal is filtered by the RIRs of source
// i of `rirs` (one source per trajectory point) and the filtered segments,
// tails included, are summed.
MultichannelSignal simulate_trajectory(std::span<const float> signal, const RirTensor& rirs,
                                       const Trajectory& trajectory, std::size_t block_size = 0,
                                       unsigned threads = 0);

}  // namespace rirsim
