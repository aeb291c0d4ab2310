#include "rirsim/sinc.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>

#include "rirsim/error.hpp"

namespace rirsim {

SincWindowParams SincWindowParams::defaults_for(double fs) {
  return {kDefaultWindowLength, fs / 2.0, fs};
}

void SincWindowParams::validate() const {
  if (!(std::isfinite(fs) && fs > 0.0)) throw InvalidArgument("sampling rate must be positive");
  if (!(std::isfinite(window_length) && window_length > 0.0)) {
    throw InvalidArgument("window length must be positive");
  }
  if (!(cutoff > 0.0 && cutoff <= fs / 2.0)) {
    throw InvalidArgument("cutoff must satisfy 0 < f_c <= fs / 2");
  }
}

double windowed_sinc(double t, const SincWindowParams& params) {
  if (!(std::abs(t) < params.window_length / 2.0)) return 0.0;
  const double window = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * t / params.window_length));
  const double arg = 2.0 * std::numbers::pi * params.cutoff * t;
  const double sinc = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
  return window * sinc;
}

SincLut build_lut(const SincWindowParams& params, int oversampling) {
  params.validate();
  if (oversampling < 1) throw InvalidArgument("LUT oversampling must be >= 1");
  SincLut lut;
  lut.oversampling = oversampling;
  lut.fs = params.fs;
  lut.window_length = params.window_length;
  // Half-width in table steps, rounded up when T_w Q fs is not an even integer.
  const double span = params.window_length * oversampling * params.fs;
  lut.center = static_cast<std::ptrdiff_t>(std::ceil(span / 2.0 - 1e-9));
  lut.entries.resize(static_cast<std::size_t>(2 * lut.center + 1));
  const double step = 1.0 / (oversampling * params.fs);
  for (std::ptrdiff_t n = -lut.center; n <= lut.center; ++n) {
    lut.entries[static_cast<std::size_t>(n + lut.center)] =
        static_cast<float>(windowed_sinc(static_cast<double>(n) * step, params));
  }
  return lut;
}

float lut_lookup_samples(const SincLut& lut, float x) {
  const float u = x * static_cast<float>(lut.oversampling) + static_cast<float>(lut.center);
  if (!(u > 0.0f && u < static_cast<float>(2 * lut.center))) return 0.0f;
  const float base = std::floor(u);
  const auto i = static_cast<std::size_t>(base);
  const float w = u - base;
  return lut.entries[i] + w * (lut.entries[i + 1] - lut.entries[i]);
}

float lut_lookup(const SincLut& lut, double t) {
  if (!(std::abs(t) < lut.window_length / 2.0)) return 0.0f;
  const double u = t * lut.oversampling * lut.fs + static_cast<double>(lut.center);
  const double base = std::floor(u);
  const auto i = static_cast<std::size_t>(base);
  if (i + 1 >= lut.entries.size()) return i < lut.entries.size() ? lut.entries[i] : 0.0f;
  const double w = u - base;
  return static_cast<float>(lut.entries[i] * (1.0 - w) + lut.entries[i + 1] * w);
}

namespace {

template <class T>
T sin_pi_impl(T x) {
  using namespace trig_coeffs;
  const T k = [&] {
    if constexpr (std::is_same_v<T, Half>) {
      return rint(x);
    } else {
      return std::nearbyint(x);
    }
  }();
  const T r = x - k;
  const T r2 = r * r;
  // Horner in r^2: r * (a1 + r^2 (a3 + r^2 a5))
  T p = T(kSin5);
  p = T(kSin3) + p * r2;
  p = T(kSin1) + p * r2;
  p = p * r;
  const float kf = static_cast<float>(k);
  const bool odd = std::fmod(std::abs(kf), 2.0f) == 1.0f;
  return odd ? -p : p;
}

template <class T>
T cos_pi_impl(T x) {
  using namespace trig_coeffs;
  const T x2 = x * x;
  T p = T(kCos6);
  p = T(kCos4) + p * x2;
  p = T(kCos2) + p * x2;
  p = T(kCos0) + p * x2;
  return p;
}

}  // namespace

float reduced_sin_pi(float x) { return sin_pi_impl(x); }
float reduced_cos_pi(float x) { return cos_pi_impl(x); }
Half reduced_sin_pi(Half x) { return sin_pi_impl(x); }
Half reduced_cos_pi(Half x) { return cos_pi_impl(x); }

}  // namespace rirsim
