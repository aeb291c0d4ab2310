#pragma once

#include <cstddef>
#include <vector>

#include "rirsim/half.hpp"

namespace rirsim {

inline constexpr double kDefaultWindowLength = 4e-3;  // seconds
inline constexpr int kDefaultLutOversampling = 16;

// Hann-windowed sinc used as a band-limited fractional-delay impulse.
struct SincWindowParams {
  double window_length = kDefaultWindowLength;  // T_w, seconds
  double cutoff = 0.0;                          // f_c, Hz
  double fs = 16000.0;                          // Hz

  // Window length 4 ms, cutoff at Nyquist.
  static SincWindowParams defaults_for(double fs);
  // Throws InvalidArgument unless T_w > 0 and 0 < f_c <= fs / 2.
  void validate() const;
  // Window length in samples, T_w * fs.
  double window_samples() const { return window_length * fs; }
};

// 0.5 (1 + cos(2 pi t / T_w)) sinc(2 pi f_c t) on |t| < T_w / 2, else 0.
double windowed_sinc(double t, const SincWindowParams& params);

// Oversampled table of windowed_sinc, entry n at t = n / (Q fs).
struct SincLut {
  int oversampling = kDefaultLutOversampling;  // Q
  double fs = 0.0;
  double window_length = 0.0;
  std::ptrdiff_t center = 0;   // index of t = 0
  std::vector<float> entries;  // 2 * center + 1 values
};

SincLut build_lut(const SincWindowParams& params, int oversampling = kDefaultLutOversampling);

// Linear interpolation between the two table entries around t (seconds).
float lut_lookup(const SincLut& lut, double t);
// Same lookup with t given in samples (t * fs).
float lut_lookup_samples(const SincLut& lut, float x);

// Polynomial approximations of sin(pi x) and cos(pi x) with binary16-exact
// coefficients, evaluated by Horner's scheme in the arithmetic of T.
//
// sin: reduce x to r in [-0.5, 0.5] with x = k + r, evaluate the odd quintic
// at r, negate when k is odd.
// cos: the even sextic evaluated directly; only meaningful on [-0.5, 0.5].
namespace trig_coeffs {
inline constexpr float kSin1 = 3.140625f;
inline constexpr float kSin3 = -5.14453125f;
inline constexpr float kSin5 = 2.326171875f;
inline constexpr float kCos0 = 1.0f;
inline constexpr float kCos2 = -4.93359375f;
inline constexpr float kCos4 = 4.04296875f;
inline constexpr float kCos6 = -1.2294921875f;
}  // namespace trig_coeffs

float reduced_sin_pi(float x);
float reduced_cos_pi(float x);
Half reduced_sin_pi(Half x);
Half reduced_cos_pi(Half x);

}  // namespace rirsim
