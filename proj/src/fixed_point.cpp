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

#include "fxv/fixed_point.hpp"

#include "fxv/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fxv {

std::string_view to_string(OverflowMode mode)
{
  return mode == OverflowMode::wrap ? "wrap" : "saturate";
}

std::string_view to_string(Rounding rounding)
{
  return rounding == Rounding::floor ? "floor" : "nearest";
}

std::optional<OverflowMode> parse_overflow_mode(std::string_view text)
{
  if (text == "wrap" || text == "wraparound")
  {
    return OverflowMode::wrap;
  }
  if (text == "saturate")
  {
    return OverflowMode::saturate;
  }
  return std::nullopt;
}

std::optional<Rounding> parse_rounding(std::string_view text)
{
  if (text == "floor")
  {
    return Rounding::floor;
  }
  if (text == "nearest" || text == "nearest-even" || text == "nearest_even")
  {
    return Rounding::nearest_even;
  }
  return std::nullopt;
}

namespace {

void check_bits(int int_bits, int frac_bits)
{
  if (int_bits < 1 || frac_bits < 0 || int_bits + frac_bits > FxFormat::kMaxWordBits)
  {
    std::ostringstream msg;
    msg << "invalid fixed-point format <" << int_bits << "," << frac_bits
        << ">: need I >= 1, F >= 0 and I + F <= " << FxFormat::kMaxWordBits;
    throw InvalidFormat(msg.str());
  }
}

}  // namespace

FxFormat::FxFormat(int int_bits, int frac_bits, OverflowMode overflow, Rounding rounding)
  : int_bits_(int_bits)
  , frac_bits_(frac_bits)
  , overflow_(overflow)
  , rounding_(rounding)
  , dyn_min_(0)
  , dyn_max_(0)
  , raw_min_(0)
  , raw_max_(0)
{
  check_bits(int_bits, frac_bits);
  auto const half = std::uint64_t{1} << (word_bits() - 1);
  raw_max_        = static_cast<std::int64_t>(half - 1);
  raw_min_        = -raw_max_ - 1;
  dyn_min_        = min_value();
  dyn_max_        = max_value();
}

FxFormat::FxFormat(int int_bits, int frac_bits, double dyn_min, double dyn_max,
                   OverflowMode overflow, Rounding rounding)
  : FxFormat(int_bits, frac_bits, overflow, rounding)
{
  *this = with_range(dyn_min, dyn_max);
}

double FxFormat::resolution() const noexcept
{
  return std::ldexp(1.0, -frac_bits_);
}

double FxFormat::to_real(std::int64_t raw) const noexcept
{
  return std::ldexp(static_cast<double>(raw), -frac_bits_);
}

std::int64_t FxFormat::dyn_raw_min() const noexcept
{
  return static_cast<std::int64_t>(std::ceil(std::ldexp(dyn_min_, frac_bits_)));
}

std::int64_t FxFormat::dyn_raw_max() const noexcept
{
  return static_cast<std::int64_t>(std::floor(std::ldexp(dyn_max_, frac_bits_)));
}

FxFormat FxFormat::with_overflow_mode(OverflowMode mode) const
{
  FxFormat copy  = *this;
  copy.overflow_ = mode;
  return copy;
}

FxFormat FxFormat::with_rounding(Rounding rounding) const
{
  FxFormat copy  = *this;
  copy.rounding_ = rounding;
  return copy;
}

FxFormat FxFormat::with_range(double dyn_min, double dyn_max) const
{
  if (!(dyn_min < dyn_max) || !std::isfinite(dyn_min) || !std::isfinite(dyn_max))
  {
    throw InvalidFormat("dynamic range needs finite min < max");
  }
  if (dyn_min < min_value() || dyn_max > max_value())
  {
    std::ostringstream msg;
    msg << "dynamic range [" << dyn_min << ", " << dyn_max << "] exceeds the representable range ["
        << min_value() << ", " << max_value() << "] of <" << int_bits_ << "," << frac_bits_ << ">";
    throw InvalidFormat(msg.str());
  }
  FxFormat copy = *this;
  copy.dyn_min_ = dyn_min;
  copy.dyn_max_ = dyn_max;
  if (copy.dyn_raw_min() > copy.dyn_raw_max())
  {
    throw InvalidFormat("dynamic range contains no representable value");
  }
  return copy;
}

std::string FxFormat::describe() const
{
  std::ostringstream out;
  out << "<" << int_bits_ << "," << frac_bits_ << "> " << to_string(overflow_) << "/"
      << to_string(rounding_) << " range [" << dyn_min_ << ", " << dyn_max_ << "]";
  return out.str();
}

namespace fx {

namespace {

double round_scaled(double scaled, Rounding rounding) noexcept
{
  double const down = std::floor(scaled);
  if (rounding == Rounding::floor)
  {
    return down;
  }
  double const frac = scaled - down;  // exact
  if (frac > 0.5 || (frac == 0.5 && std::fmod(down, 2.0) != 0.0))
  {
    return down + 1.0;
  }
  return down;
}

}  // namespace

RawResult quantize(double x, FxFormat const &fmt) noexcept
{
  if (std::isnan(x))
  {
    return {0, true};
  }
  if (std::isinf(x))
  {
    return {x < 0 ? fmt.raw_min() : fmt.raw_max(), true};
  }
  double const rounded = round_scaled(std::ldexp(x, fmt.frac_bits()), fmt.rounding());
  if (std::isinf(rounded))
  {
    return {rounded < 0 ? fmt.raw_min() : fmt.raw_max(), true};
  }
  constexpr double kWideLimit = 0x1p120;
  if (std::fabs(rounded) < kWideLimit)
  {
    return reduce(static_cast<wide_int>(rounded), fmt);
  }
  if (fmt.overflow_mode() == OverflowMode::saturate)
  {
    return {rounded < 0 ? fmt.raw_min() : fmt.raw_max(), true};
  }
  // Only the low W bits survive wrapping; fmod by a power of two is exact.
  double const low = std::fmod(rounded, std::ldexp(1.0, fmt.word_bits()));
  return {wrap_to_width(static_cast<wide_int>(low), fmt.word_bits()), true};
}

}  // namespace fx

FxNum::FxNum(std::int64_t raw, FxFormat fmt)
  : raw_(raw)
  , fmt_(std::move(fmt))
{
  if (!fmt_.contains_raw(raw_))
  {
    throw InvalidFormat("raw value " + std::to_string(raw) + " does not fit " + fmt_.describe());
  }
}

Quantized quantize(double x, FxFormat const &fmt)
{
  auto const r = fx::quantize(x, fmt);
  return {FxNum(r.raw, fmt), r.overflow};
}

namespace {

void require_same_format(FxNum const &a, FxNum const &b)
{
  if (!a.format().same_arithmetic(b.format()))
  {
    throw FormatMismatch("operands use different formats: " + a.format().describe() + " vs " +
                         b.format().describe());
  }
}

}  // namespace

FxResult fx_add(FxNum const &a, FxNum const &b)
{
  require_same_format(a, b);
  auto const r = fx::add(a.raw(), b.raw(), a.format());
  return {FxNum(r.raw, a.format()), r.overflow};
}

FxResult fx_sub(FxNum const &a, FxNum const &b)
{
  require_same_format(a, b);
  auto const r = fx::sub(a.raw(), b.raw(), a.format());
  return {FxNum(r.raw, a.format()), r.overflow};
}

FxResult fx_mul(FxNum const &a, FxNum const &b)
{
  require_same_format(a, b);
  auto const r = fx::mul(a.raw(), b.raw(), a.format());
  return {FxNum(r.raw, a.format()), r.overflow};
}

}  // namespace fxv
