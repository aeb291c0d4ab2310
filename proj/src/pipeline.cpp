#include "rirsim/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rirsim/error.hpp"

namespace rirsim {

namespace {

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

}  // namespace

SimulationResult simulate_rirs(const RoomSpec& room, std::span<const Point3> sources,
                               std::span<const Receiver> receivers, const SimConfig& config,
                               std::optional<ImageGrid> grid, unsigned threads) {
  config.validate();
  room.validate();
  if (sources.empty() || receivers.empty()) {
    throw InvalidArgument("need at least one source and one receiver");
  }
  const double total = std::ceil(config.t_max * config.fs);
  if (!(total <= static_cast<double>(kMaxTensorSamples))) {
    throw CapacityError("RIR duration exceeds the buffer limit");
  }
  const auto n_total = std::max<std::size_t>(1, static_cast<std::size_t>(total));
  const std::size_t tail_start = first_tail_sample(config.t_diff, config.fs);
  const bool with_tail = tail_start < n_total;

  SimulationResult result;
  if (with_tail) result.t60 = sabine_t60(room);
  result.grid = grid.value_or(images_for_time(room.size, config.t_diff, config.speed_of_sound));

  Stopwatch ism_clock;
  const ImageSourceSet set = compute_image_set(room, sources, receivers, result.grid,
                                               config.speed_of_sound, threads);
  result.timings.image_sources_ms = ism_clock.elapsed_ms();

  Stopwatch render_clock;
  const std::size_t n_early = with_tail ? tail_start : n_total;
  const RirTensor early = render_rir_samples(set, n_early, config.window(), config.mode, threads);
  result.timings.render_ms = render_clock.elapsed_ms();

  if (!with_tail) {
    result.rirs = early;
    return result;
  }

  Stopwatch tail_clock;
  result.rirs = RirTensor(sources.size(), receivers.size(), n_total, config.fs);
  for (std::size_t c = 0; c < early.n_channels(); ++c) {
    std::ranges::copy(early.channel(c), result.rirs.channel(c).begin());
  }
  result.envelopes = predict_envelopes(early, config.t_diff, *result.t60);
  apply_diffuse_tail(result.rirs, result.envelopes, config.seed, threads);
  result.timings.diffuse_ms = tail_clock.elapsed_ms();
  return result;
}

TrajectoryResult simulate_moving_source(std::span<const float> signal, const RoomSpec& room,
                                        std::vector<Point3> points,
                                        std::span<const Receiver> receivers,
                                        const SimConfig& config, std::optional<ImageGrid> grid,
                                        unsigned threads) {
  if (signal.empty()) throw InvalidArgument("input signal is empty");
  if (points.empty()) throw InvalidArgument("trajectory has no points");
  TrajectoryResult result;
  result.simulation = simulate_rirs(room, points, receivers, config, grid, threads);
  result.trajectory = Trajectory::split_evenly(std::move(points), signal.size());
  result.output = simulate_trajectory(signal, result.simulation.rirs, result.trajectory, 0, threads);
  return result;
}

}  // namespace rirsim
