#include "rirsim/half.hpp"

#include <bit>
#include <cmath>

namespace rirsim {

std::uint16_t Half::float_to_half_bits(float value) {
  const std::uint32_t f = std::bit_cast<std::uint32_t>(value);
  const std::uint16_t sign = static_cast<std::uint16_t>((f >> 16) & 0x8000u);
  const std::uint32_t abs = f & 0x7fffffffu;

  if (abs >= 0x7f800000u) {  // inf or nan
    const std::uint16_t nan_bit = abs > 0x7f800000u ? 0x0200u : 0u;
    return sign | 0x7c00u | nan_bit;
  }
  // 65520 and above round to infinity.
  if (abs >= 0x477ff000u) return sign | 0x7c00u;

  const int exponent = static_cast<int>(abs >> 23) - 127;
  if (exponent >= -14) {
    // Normal half: keep 10 of the 23 mantissa bits.
    std::uint32_t mant = abs & 0x7fffffu;
    std::uint32_t half = (static_cast<std::uint32_t>(exponent + 15) << 10) | (mant >> 13);
    const std::uint32_t rest = mant & 0x1fffu;
    if (rest > 0x1000u || (rest == 0x1000u && (half & 1u))) ++half;  // may carry into exp
    return sign | static_cast<std::uint16_t>(half);
  }
  // Subnormal half (or zero): value = m * 2^-24.
  if (exponent < -25) return sign;
  const std::uint32_t mant = (abs & 0x7fffffu) | 0x800000u;  // 24-bit significand
  const int shift = -exponent - 1;                          // 14 .. 24
  std::uint32_t half = mant >> shift;
  const std::uint32_t rest = mant & ((1u << shift) - 1u);
  const std::uint32_t halfway = 1u << (shift - 1);
  if (rest > halfway || (rest == halfway && (half & 1u))) ++half;
  return sign | static_cast<std::uint16_t>(half);
}

float Half::half_bits_to_float(std::uint16_t bits) {
  const std::uint32_t sign = static_cast<std::uint32_t>(bits & 0x8000u) << 16;
  const std::uint32_t exponent = (bits >> 10) & 0x1fu;
  std::uint32_t mant = bits & 0x3ffu;
  if (exponent == 0x1fu) {
    return std::bit_cast<float>(sign | 0x7f800000u | (mant << 13));
  }
  if (exponent == 0) {
    if (mant == 0) return std::bit_cast<float>(sign);
    // Subnormal: exact as m * 2^-24.
    const float magnitude = std::ldexp(static_cast<float>(mant), -24);
    return sign ? -magnitude : magnitude;
  }
  return std::bit_cast<float>(sign | ((exponent + 112u) << 23) | (mant << 13));
}

Half rint(Half x) { return Half(std::nearbyint(x.to_float())); }

}  // namespace rirsim
