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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace fxv {

/// Real polynomial in z with coefficients stored in descending powers.
///
/// Leading zeros are trimmed on construction, so the leading coefficient is
/// nonzero unless the polynomial is identically zero (stored as {0}).
class Polynomial
{
public:
  Polynomial();
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  std::vector<double> const &coeffs() const noexcept { return coeffs_; }
  std::size_t                size() const noexcept { return coeffs_.size(); }
  double                     operator[](std::size_t i) const { return coeffs_[i]; }

  int    degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool   is_zero() const noexcept;
  double leading() const noexcept { return coeffs_.front(); }
  double norm1() const noexcept;

  double               evaluate(double z) const noexcept;
  std::complex<double> evaluate(std::complex<double> z) const noexcept;

  Polynomial scaled(double factor) const;

  // Coefficients left-padded with zeros to `length` entries (length >= size()).
  std::vector<double> padded(std::size_t length) const;

  friend Polynomial operator+(Polynomial const &a, Polynomial const &b);
  friend Polynomial operator-(Polynomial const &a, Polynomial const &b);
  friend Polynomial operator*(Polynomial const &a, Polynomial const &b);
  friend bool       operator==(Polynomial const &, Polynomial const &) = default;

private:
  std::vector<double> coeffs_;
};

std::ostream &operator<<(std::ostream &out, Polynomial const &p);

}  // namespace fxv
