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

#include "fxv/error.hpp"
#include "fxv/fixed_point.hpp"
#include "fxv/fwl.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fxv;

namespace {

// Wide-integer two's-complement oracles, written without the library's
// reduce/rescale helpers.
std::int64_t oracle_wrap(wide_int exact, int width)
{
  uwide_int const modulus = uwide_int{1} << width;
  uwide_int       low     = static_cast<uwide_int>(exact) % modulus;
  wide_int        value   = static_cast<wide_int>(low);
  if (value >= static_cast<wide_int>(modulus / 2))
  {
    value -= static_cast<wide_int>(modulus);
  }
  return static_cast<std::int64_t>(value);
}

wide_int oracle_floor_div(wide_int p, int shift)
{
  wide_int const d = wide_int{1} << shift;
  wide_int       q = p / d;
  if (p % d != 0 && p < 0)
  {
    --q;
  }
  return q;
}

}  // namespace

TEST_CASE("format validation")
{
  CHECK_THROWS_AS(FxFormat(0, 4), InvalidFormat);
  CHECK_THROWS_AS(FxFormat(2, -1), InvalidFormat);
  CHECK_THROWS_AS(FxFormat(40, 25), InvalidFormat);
  CHECK_NOTHROW(FxFormat(1, 63));
  CHECK_NOTHROW(FxFormat(64, 0));
  CHECK_THROWS_AS(FxFormat(2, 13, 1.0, -1.0), InvalidFormat);
  CHECK_THROWS_AS(FxFormat(2, 13, -1.0, 2.0), InvalidFormat);

  FxFormat const f(2, 13, -1.0, 1.0);
  CHECK(f.raw_max() == 16383);
  CHECK(f.raw_min() == -16384);
  CHECK(f.max_value() == doctest::Approx(2.0 - std::ldexp(1.0, -13)));
  CHECK(f.dyn_raw_min() == -8192);
  CHECK(f.dyn_raw_max() == 8192);

  FxFormat const w(64, 0);
  CHECK(w.raw_max() == std::numeric_limits<std::int64_t>::max());
  CHECK(w.raw_min() == std::numeric_limits<std::int64_t>::min());
}

TEST_CASE("quantize examples")
{
  FxFormat const f213(2, 13);
  auto const     half = quantize(0.5, f213);
  CHECK(half.value.raw() == 4096);
  CHECK(half.value.value() == 0.5);
  CHECK_FALSE(half.out_of_range);

  FxFormat const f123(12, 3);
  CHECK(quantize(-1.97, f123).value.value() == -2.0);
  CHECK(quantize(-0.06068, f123).value.value() == -0.125);
  CHECK(quantize(1.033, f123).value.value() == 1.0);

  FxFormat const nearest = f123.with_rounding(Rounding::nearest_even);
  CHECK(quantize(0.0625, nearest).value.raw() == 0);   // 0.5 ulp ties to even
  CHECK(quantize(0.1875, nearest).value.raw() == 2);   // 1.5 ulp ties to even
  CHECK(quantize(-0.0625, nearest).value.raw() == 0);
  CHECK(quantize(-0.1875, nearest).value.raw() == -2);
}

TEST_CASE("quantize out of range")
{
  FxFormat const wrap(2, 13);
  auto const     q = quantize(-2.819, wrap);
  CHECK(q.out_of_range);
  CHECK(q.value.raw() == oracle_wrap(static_cast<wide_int>(std::floor(-2.819 * 8192)), 15));

  auto const s = quantize(-2.819, wrap.with_overflow_mode(OverflowMode::saturate));
  CHECK(s.out_of_range);
  CHECK(s.value.raw() == wrap.raw_min());

  CHECK(quantize(std::nan(""), wrap).out_of_range);
  CHECK(quantize(INFINITY, wrap.with_overflow_mode(OverflowMode::saturate)).value.raw() ==
        wrap.raw_max());
  // Huge values wrap on their low bits.
  auto const huge = quantize(std::ldexp(3.0, 200), FxFormat(4, 4));
  CHECK(huge.out_of_range);
  CHECK(huge.value.raw() == 0);
}

TEST_CASE("fx_add examples")
{
  FxFormat const f(2, 13);
  auto const     a = quantize(1.5, f).value;
  auto const     b = quantize(-1.5, f).value;
  auto const     c = quantize(1.0, f).value;

  auto const zero = fx_add(a, b);
  CHECK(zero.value.value() == 0.0);
  CHECK_FALSE(zero.overflow);

  auto const wrapped = fx_add(a, c);
  CHECK(wrapped.overflow);
  CHECK(wrapped.value.value() == -1.5);
  CHECK(wrapped.value.raw() == oracle_wrap(12288 + 8192, 15));

  FxFormat const sat = f.with_overflow_mode(OverflowMode::saturate);
  auto const     clamped = fx_add(quantize(1.5, sat).value, quantize(1.0, sat).value);
  CHECK(clamped.overflow);
  CHECK(clamped.value.value() == 2.0 - std::ldexp(1.0, -13));
}

TEST_CASE("fx_mul examples")
{
  FxFormat const f(2, 13);
  auto const     x = quantize(1.2345, f).value;
  auto const     z = fx_mul(x, FxNum::zero(f));
  CHECK(z.value.raw() == 0);
  CHECK_FALSE(z.overflow);

  auto const q = fx_mul(quantize(0.5, f).value, quantize(0.5, f).value);
  CHECK(q.value.value() == 0.25);
  CHECK_FALSE(q.overflow);

  FxFormat const small(2, 4);
  auto const     big = fx_mul(quantize(1.9, small).value, quantize(1.9, small).value);
  CHECK(big.overflow);
}

TEST_CASE("format mismatch is rejected")
{
  auto const a = quantize(0.5, FxFormat(2, 13)).value;
  auto const b = quantize(0.5, FxFormat(2, 12)).value;
  CHECK_THROWS_AS(fx_add(a, b), FormatMismatch);
  CHECK_THROWS_AS(fx_mul(a, b), FormatMismatch);
  auto const c = quantize(0.5, FxFormat(2, 13, OverflowMode::saturate)).value;
  CHECK_THROWS_AS(fx_sub(a, c), FormatMismatch);
  CHECK_THROWS_AS(FxNum(1 << 20, FxFormat(2, 13)), InvalidFormat);
}

TEST_CASE("fwl_poly examples")
{
  Polynomial const den{1.0, -1.97, 1.033, -0.06068};
  CHECK(fwl_poly(den, FxFormat(12, 3)) == Polynomial{1.0, -2.0, 1.0, -0.125});

  Polynomial const exact{1.0, -0.5, 0.25};
  CHECK(fwl_poly(exact, FxFormat(2, 13)) == exact);
}

TEST_CASE("fwl_poly is idempotent")
{
  std::mt19937_64                        rng(7);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  std::uniform_int_distribution<int>     bits(1, 12);
  for (int trial = 0; trial < 2000; ++trial)
  {
    std::vector<double> c(1 + trial % 6);
    for (double &v : c)
    {
      v = coeff(rng);
    }
    FxFormat const   fmt(bits(rng), bits(rng), trial % 2 ? OverflowMode::wrap : OverflowMode::saturate,
                         trial % 3 ? Rounding::floor : Rounding::nearest_even);
    Polynomial const once = fwl_poly(Polynomial(c), fmt);
    CHECK(fwl_poly(once, fmt) == once);
  }
}

TEST_CASE("wrap law against the wide-integer oracle")
{
  std::mt19937_64 rng(11);
  for (auto [i, f] : {std::pair{2, 4}, {4, 12}, {12, 3}, {2, 13}, {1, 63}, {33, 31}})
  {
    FxFormat const                              fmt(i, f);
    std::uniform_int_distribution<std::int64_t> raw(fmt.raw_min(), fmt.raw_max());
    for (int n = 0; n < 20000; ++n)
    {
      std::int64_t const a = raw(rng);
      std::int64_t const b = raw(rng);
      wide_int const     sum = static_cast<wide_int>(a) + b;
      auto const         r   = fx::add(a, b, fmt);
      REQUIRE(r.raw == oracle_wrap(sum, fmt.word_bits()));
      REQUIRE(r.overflow == !fmt.contains_raw(sum));

      wide_int const prod = oracle_floor_div(static_cast<wide_int>(a) * b, f);
      auto const     m    = fx::mul(a, b, fmt);
      REQUIRE(m.raw == oracle_wrap(prod, fmt.word_bits()));
      REQUIRE(m.overflow == !fmt.contains_raw(prod));
    }
  }
}

TEST_CASE("saturation stays in range and is exact when representable")
{
  std::mt19937_64 rng(3);
  FxFormat const  fmt(3, 5, OverflowMode::saturate);
  std::uniform_int_distribution<std::int64_t> raw(fmt.raw_min(), fmt.raw_max());
  for (int n = 0; n < 20000; ++n)
  {
    std::int64_t const a   = raw(rng);
    std::int64_t const b   = raw(rng);
    auto const         sum = fx::add(a, b, fmt);
    REQUIRE(fmt.contains_raw(sum.raw));
    if (fmt.contains_raw(static_cast<wide_int>(a) + b))
    {
      REQUIRE(sum.raw == a + b);
      REQUIRE_FALSE(sum.overflow);
    }
    auto const prod = fx::mul(a, b, fmt);
    REQUIRE(fmt.contains_raw(prod.raw));
  }
}

TEST_CASE("quantization error bound and round trip")
{
  std::mt19937_64 rng(5);
  for (auto rounding : {Rounding::floor, Rounding::nearest_even})
  {
    FxFormat const                          fmt(4, 9, OverflowMode::wrap, rounding);
    std::uniform_real_distribution<double>  x(fmt.min_value(), fmt.max_value());
    double const                            ulp = fmt.resolution();
    for (int n = 0; n < 20000; ++n)
    {
      double const v = x(rng);
      auto const   q = quantize(v, fmt);
      double const e = std::fabs(q.value.value() - v);
      if (rounding == Rounding::floor)
      {
        REQUIRE(e < ulp);
      }
      else
      {
        REQUIRE(e <= ulp / 2);
      }
      REQUIRE(quantize(q.value.value(), fmt).value == q.value);
    }
  }
}
