#include "rirsim/diffuse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "rirsim/error.hpp"
#include "rirsim/parallel.hpp"

namespace rirsim {

double sabine_t60(const RoomSpec& room) {
  room.validate();
  const auto areas = room.wall_areas();
  double absorption = 0.0;
  for (int w = 0; w < 6; ++w) absorption += areas[w] * (1.0 - room.beta[w] * room.beta[w]);
  if (!(absorption > 0.0)) {
    throw NonFiniteT60("every wall is perfectly reflective; T60 is infinite");
  }
  return 0.161 * room.volume() / absorption;
}

void EnvelopeModel::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw InvalidArgument("envelope amplitude must be finite and non-negative");
  }
  if (!(t60 > 0.0)) throw InvalidArgument("envelope T60 must be positive");
  if (!(t0 >= 0.0)) throw InvalidArgument("envelope t0 must be non-negative");
}

double EnvelopeModel::power(double t) const {
  if (!(t > t0)) return 0.0;
  return amplitude * std::pow(10.0, -6.0 * (t - t0) / t60);
}

std::vector<float> logistic_noise(std::size_t count, const NoiseSpec& spec) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(spec.stream),
                    static_cast<std::uint32_t>(spec.stream >> 32)};
  std::mt19937_64 engine(seq);
  const double scale = std::sqrt(3.0) / std::numbers::pi;
  std::vector<float> out(count);
  for (auto& x : out) {
    // 53 random bits, offset by half an ulp so u is strictly inside (0, 1).
    const double u = (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
    x = static_cast<float>(scale * std::log(u / (1.0 - u)));
  }
  return out;
}

std::size_t first_tail_sample(double t0, double fs) {
  return static_cast<std::size_t>(std::floor(t0 * fs)) + 1;
}

double estimate_tail_amplitude(std::span<const float> early, double fs, double t0, double t60) {
  if (!(fs > 0.0)) throw InvalidArgument("sampling rate must be positive");
  if (!(t60 > 0.0)) throw InvalidArgument("T60 must be positive");
  if (!(t0 >= 0.0)) throw InvalidArgument("t0 must be non-negative");
  // Samples k with k / fs <= t0 that exist in `early`.
  const std::size_t end = std::min(first_tail_sample(t0, fs), early.size());
  const auto wanted = static_cast<std::size_t>(std::lround(kTailEstimationWindow * fs));
  const auto minimum = static_cast<std::size_t>(std::lround(kMinEstimationWindow * fs));
  const std::size_t count = std::min(wanted, end);
  if (count < std::max<std::size_t>(1, minimum)) {
    throw InsufficientData("need at least 1 ms of early response before t0 to estimate the tail");
  }
  double power = 0.0;
  double shape = 0.0;
  for (std::size_t k = end - count; k < end; ++k) {
    const double h = early[k];
    power += h * h;
    shape += std::pow(10.0, -6.0 * (static_cast<double>(k) / fs - t0) / t60);
  }
  return power / shape;
}

std::vector<EnvelopeModel> predict_envelopes(const RirTensor& rir, double t0, double t60) {
  std::vector<EnvelopeModel> out(rir.n_channels());
  for (std::size_t c = 0; c < rir.n_channels(); ++c) {
    out[c] = {estimate_tail_amplitude(rir.channel(c), rir.fs(), t0, t60), t0, t60};
  }
  return out;
}

void apply_diffuse_tail(RirTensor& rir, std::span<const EnvelopeModel> envelopes,
                        std::uint64_t seed, unsigned threads) {
  if (envelopes.size() != rir.n_channels()) {
    throw InvalidArgument("need one envelope per RIR channel");
  }
  const double fs = rir.fs();
  const double duration = static_cast<double>(rir.n_samples()) / fs;
  for (const EnvelopeModel& env : envelopes) {
    env.validate();
    if (env.t0 > duration) {
      throw InvalidArgument("diffuse start t0 = " + std::to_string(env.t0) +
                            " s lies beyond the RIR end");
    }
  }
  parallel_for(rir.n_channels(), threads, [&](std::size_t c, unsigned) {
    const EnvelopeModel& env = envelopes[c];
    const std::size_t first = std::min(first_tail_sample(env.t0, fs), rir.n_samples());
    const auto noise = logistic_noise(rir.n_samples() - first, {seed, c});
    auto h = rir.channel(c);
    const double decay = -6.0 / env.t60 * std::numbers::ln10 / 2.0;  // ln of sqrt(P) per second
    const double root_a = std::sqrt(env.amplitude);
    for (std::size_t k = first; k < h.size(); ++k) {
      const double dt = static_cast<double>(k) / fs - env.t0;
      h[k] = static_cast<float>(noise[k - first] * root_a * std::exp(decay * dt));
    }
  });
}

void apply_diffuse_tail(RirTensor& rir, const EnvelopeModel& envelope, std::uint64_t seed,
                        unsigned threads) {
  const std::vector<EnvelopeModel> all(rir.n_channels(), envelope);
  apply_diffuse_tail(rir, all, seed, threads);
}

std::vector<double> schroeder_decay_db(std::span<const float> h) {
  std::vector<double> energy(h.size());
  double acc = 0.0;
  for (std::size_t i = h.size(); i-- > 0;) {
    acc += static_cast<double>(h[i]) * h[i];
    energy[i] = acc;
  }
  const double total = h.empty() ? 0.0 : energy.front();
  for (auto& e : energy) {
    e = total > 0.0 && e > 0.0 ? 10.0 * std::log10(e / total) : -std::numeric_limits<double>::infinity();
  }
  return energy;
}

double decay_slope_db_per_s(std::span<const float> h, double fs, std::size_t first,
                            std::size_t last) {
  if (!(first < last && last <= h.size()) || last - first < 2) {
    throw InvalidArgument("decay fit range is empty");
  }
  const auto edc = schroeder_decay_db(h.subspan(first));
  const std::size_t n = last - first;
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st += static_cast<double>(i);
    sy += edc[i];
  }
  const double mt = st / n, my = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i) - mt;
    num += dt * (edc[i] - my);
    den += dt * dt;
  }
  return num / den * fs;
}

}  // namespace rirsim
