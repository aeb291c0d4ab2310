#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rirsim/convolution.hpp"
#include "rirsim/diffuse.hpp"
#include "rirsim/image_source.hpp"
#include "rirsim/render.hpp"
#include "rirsim/room_utils.hpp"

namespace rirsim {

struct StageTimings {
  double image_sources_ms = 0.0;
  double render_ms = 0.0;
  double diffuse_ms = 0.0;
};

struct SimulationResult {
  RirTensor rirs;
  ImageGrid grid;
  std::optional<double> t60;  // set when a diffuse tail was synthesized
  std::vector<EnvelopeModel> envelopes;
  StageTimings timings;
};

// Image sources up to config.t_diff, rendered with config.mode, followed by
// a diffuse tail from t_diff to t_max when t_diff < t_max. The grid defaults
// to images_for_time(room, t_diff).
SimulationResult simulate_rirs(const RoomSpec& room, std::span<const Point3> sources,
                               std::span<const Receiver> receivers, const SimConfig& config,
                               std::optional<ImageGrid> grid = std::nullopt, unsigned threads = 0);

struct TrajectoryResult {
  MultichannelSignal output;
  SimulationResult simulation;  // one source per trajectory point
  Trajectory trajectory;
};

// RIRs for every trajectory point, then segment-wise overlap-add filtering.
TrajectoryResult simulate_moving_source(std::span<const float> signal, const RoomSpec& room,
                                        std::vector<Point3> points,
                                        std::span<const Receiver> receivers,
                                        const SimConfig& config,
                                        std::optional<ImageGrid> grid = std::nullopt,
                                        unsigned threads = 0);

}  // namespace rirsim
