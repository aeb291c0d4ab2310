#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rirsim/geometry.hpp"
#include "rirsim/render.hpp"

namespace rirsim {

// T60 = 0.161 V / sum(S_i (1 - beta_i^2)). Throws NonFiniteT60 when every
// wall is perfectly reflective.
double sabine_t60(const RoomSpec& room);

// Power envelope P(t) = A 10^(-6 (t - t0) / T60) for t > t0.
struct EnvelopeModel {
  double amplitude = 0.0;  // A, power at t0
  double t0 = 0.0;         // seconds
  double t60 = 1.0;        // seconds

  void validate() const;
  double power(double t) const;
};

// Logistic noise, zero mean and unit variance. Each stream is an
// independent mt19937_64 seeded through std::seed_seq{seed, stream}.
struct NoiseSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

std::vector<float> logistic_noise(std::size_t count, const NoiseSpec& spec);

inline constexpr double kTailEstimationWindow = 5e-3;   // seconds
inline constexpr double kMinEstimationWindow = 1e-3;    // seconds

// Power amplitude A such that the envelope matches, in expectation, the
// power of `early` over the last 5 ms up to t0. `early` starts at t = 0.
double estimate_tail_amplitude(std::span<const float> early, double fs, double t0, double t60);

// One envelope per channel of `rir`, estimated from its samples up to t0.
std::vector<EnvelopeModel> predict_envelopes(const RirTensor& rir, double t0, double t60);

// Replaces every sample with t > t0 by noise * sqrt(P(t)). Channel c uses
// the noise stream {seed, c}.
void apply_diffuse_tail(RirTensor& rir, std::span<const EnvelopeModel> envelopes,
                        std::uint64_t seed, unsigned threads = 1);
void apply_diffuse_tail(RirTensor& rir, const EnvelopeModel& envelope, std::uint64_t seed,
                        unsigned threads = 1);

// Index of the first sample strictly after t0.
std::size_t first_tail_sample(double t0, double fs);

// Schroeder backward-integrated energy decay curve in dB (0 dB at the start).
std::vector<double> schroeder_decay_db(std::span<const float> h);

// Least-squares slope of the Schroeder curve in dB per second over
// samples [first, last).
double decay_slope_db_per_s(std::span<const float> h, double fs, std::size_t first,
                            std::size_t last);

}  // namespace rirsim
