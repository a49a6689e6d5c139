// Copyright 2026 The fxverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Bit-exact <I,F> two's-complement fixed-point arithmetic.
//
// A format with I integer bits (sign included) and F fractional bits stores
// values as raw * 2^-F with raw a W = I + F bit signed integer, W <= 64.
// Intermediates are computed exactly in 128 bits, then rounded (products
// only) and reduced with the format's overflow policy.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fxv {

using wide_int  = __int128;
using uwide_int = unsigned __int128;

enum class OverflowMode : std::uint8_t
{
  wrap,
  saturate
};

enum class Rounding : std::uint8_t
{
  floor,         // toward -inf
  nearest_even,  // ties to even
};

std::string_view              to_string(OverflowMode mode);
std::string_view              to_string(Rounding rounding);
std::optional<OverflowMode>   parse_overflow_mode(std::string_view text);
std::optional<Rounding>       parse_rounding(std::string_view text);

class FxFormat
{
public:
  static constexpr int kMaxWordBits = 64;

  // Dynamic range defaults to the whole representable range.
  FxFormat(int int_bits, int frac_bits, OverflowMode overflow = OverflowMode::wrap,
           Rounding rounding = Rounding::floor);
  FxFormat(int int_bits, int frac_bits, double dyn_min, double dyn_max,
           OverflowMode overflow = OverflowMode::wrap, Rounding rounding = Rounding::floor);

  int          int_bits() const noexcept { return int_bits_; }
  int          frac_bits() const noexcept { return frac_bits_; }
  int          word_bits() const noexcept { return int_bits_ + frac_bits_; }
  OverflowMode overflow_mode() const noexcept { return overflow_; }
  Rounding     rounding() const noexcept { return rounding_; }
  double       dyn_min() const noexcept { return dyn_min_; }
  double       dyn_max() const noexcept { return dyn_max_; }

  std::int64_t raw_min() const noexcept { return raw_min_; }
  std::int64_t raw_max() const noexcept { return raw_max_; }
  double       resolution() const noexcept;
  double       min_value() const noexcept { return to_real(raw_min_); }
  double       max_value() const noexcept { return to_real(raw_max_); }
  double       to_real(std::int64_t raw) const noexcept;
  bool         contains_raw(wide_int raw) const noexcept
  {
    return raw >= raw_min_ && raw <= raw_max_;
  }

  // Raw bounds of the dynamic range, rounded inward onto the grid.
  std::int64_t dyn_raw_min() const noexcept;
  std::int64_t dyn_raw_max() const noexcept;

  FxFormat with_overflow_mode(OverflowMode mode) const;
  FxFormat with_rounding(Rounding rounding) const;
  FxFormat with_range(double dyn_min, double dyn_max) const;

  // Same grid and same arithmetic policy; the dynamic range is ignored.
  bool same_arithmetic(FxFormat const &other) const noexcept
  {
    return int_bits_ == other.int_bits_ && frac_bits_ == other.frac_bits_ &&
           overflow_ == other.overflow_ && rounding_ == other.rounding_;
  }

  std::string describe() const;

  friend bool operator==(FxFormat const &, FxFormat const &) = default;

private:
  int          int_bits_;
  int          frac_bits_;
  OverflowMode overflow_;
  Rounding     rounding_;
  double       dyn_min_;
  double       dyn_max_;
  std::int64_t raw_min_;
  std::int64_t raw_max_;
};

namespace fx {

struct RawResult
{
  std::int64_t raw;
  bool         overflow;  // exact result was not representable
};

inline std::int64_t wrap_to_width(wide_int exact, int width) noexcept
{
  auto low = static_cast<std::uint64_t>(static_cast<uwide_int>(exact));
  if (width < 64)
  {
    std::uint64_t const mask = (std::uint64_t{1} << width) - 1;
    low &= mask;
    if ((low >> (width - 1)) & 1u)
    {
      low |= ~mask;
    }
  }
  return static_cast<std::int64_t>(low);
}

// Applies the overflow policy to an exact on-grid raw value.
inline RawResult reduce(wide_int exact, FxFormat const &fmt) noexcept
{
  if (fmt.contains_raw(exact))
  {
    return {static_cast<std::int64_t>(exact), false};
  }
  if (fmt.overflow_mode() == OverflowMode::saturate)
  {
    return {exact < 0 ? fmt.raw_min() : fmt.raw_max(), true};
  }
  return {wrap_to_width(exact, fmt.word_bits()), true};
}

// Drops `shift` fractional bits of an exact value using the given rounding.
inline wide_int rescale(wide_int exact, int shift, Rounding rounding) noexcept
{
  if (shift == 0)
  {
    return exact;
  }
  wide_int q = exact >> shift;
  if (rounding == Rounding::nearest_even)
  {
    wide_int const rem  = exact - (q << shift);
    wide_int const half = wide_int{1} << (shift - 1);
    if (rem > half || (rem == half && (q & 1) != 0))
    {
      ++q;
    }
  }
  return q;
}

inline RawResult add(std::int64_t a, std::int64_t b, FxFormat const &fmt) noexcept
{
  return reduce(static_cast<wide_int>(a) + b, fmt);
}

inline RawResult sub(std::int64_t a, std::int64_t b, FxFormat const &fmt) noexcept
{
  return reduce(static_cast<wide_int>(a) - b, fmt);
}

inline RawResult mul(std::int64_t a, std::int64_t b, FxFormat const &fmt) noexcept
{
  wide_int const product = static_cast<wide_int>(a) * b;
  return reduce(rescale(product, fmt.frac_bits(), fmt.rounding()), fmt);
}

// round(x * 2^F) under the format's rounding, then the overflow policy.
// NaN maps to zero and infinities to the range extremes; both are flagged.
RawResult quantize(double x, FxFormat const &fmt) noexcept;

}  // namespace fx

class FxNum
{
public:
  // Throws InvalidFormat when raw does not fit the word width.
  FxNum(std::int64_t raw, FxFormat fmt);

  static FxNum zero(FxFormat fmt)
  {
    return FxNum(0, std::move(fmt));
  }

  std::int64_t    raw() const noexcept { return raw_; }
  double          value() const noexcept { return fmt_.to_real(raw_); }
  FxFormat const &format() const noexcept { return fmt_; }

  friend bool operator==(FxNum const &, FxNum const &) = default;

private:
  std::int64_t raw_;
  FxFormat     fmt_;
};

struct Quantized
{
  FxNum value;
  bool  out_of_range;
};

struct FxResult
{
  FxNum value;
  bool  overflow;
};

Quantized quantize(double x, FxFormat const &fmt);

// Binary operations require operands of the same arithmetic format and throw
// FormatMismatch otherwise. The result carries the left operand's format.
FxResult fx_add(FxNum const &a, FxNum const &b);
FxResult fx_sub(FxNum const &a, FxNum const &b);
FxResult fx_mul(FxNum const &a, FxNum const &b);

}  // namespace fxv
