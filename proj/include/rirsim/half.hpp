#pragma once

#include <cstdint>

namespace rirsim {

// IEEE 754 binary16 storage. Arithmetic widens to float, operates, and
// narrows with round-to-nearest-even; float carries 24 significand bits,
// enough that +, -, * and / are correctly rounded binary16 operations.
class Half {
 public:
  Half() = default;
  explicit Half(float value) : bits_(float_to_half_bits(value)) {}

  static Half from_bits(std::uint16_t bits) {
    Half h;
    h.bits_ = bits;
    return h;
  }

  std::uint16_t bits() const { return bits_; }
  explicit operator float() const { return half_bits_to_float(bits_); }
  float to_float() const { return half_bits_to_float(bits_); }

  friend Half operator+(Half a, Half b) { return Half(a.to_float() + b.to_float()); }
  friend Half operator-(Half a, Half b) { return Half(a.to_float() - b.to_float()); }
  friend Half operator*(Half a, Half b) { return Half(a.to_float() * b.to_float()); }
  friend Half operator/(Half a, Half b) { return Half(a.to_float() / b.to_float()); }
  friend Half operator-(Half a) { return from_bits(a.bits_ ^ 0x8000u); }
  Half& operator+=(Half o) { return *this = *this + o; }
  Half& operator*=(Half o) { return *this = *this * o; }

  friend bool operator==(Half a, Half b) { return a.to_float() == b.to_float(); }
  friend bool operator<(Half a, Half b) { return a.to_float() < b.to_float(); }

  static std::uint16_t float_to_half_bits(float value);
  static float half_bits_to_float(std::uint16_t bits);

 private:
  std::uint16_t bits_ = 0;
};

// Round to the nearest integer, ties to even, staying in binary16.
Half rint(Half x);

}  // namespace rirsim
