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

#include "fxv/polynomial.hpp"

#include "fxv/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace fxv {

namespace {

std::vector<double> trim(std::vector<double> coeffs)
{
  if (coeffs.empty())
  {
    throw DegenerateSystem("polynomial needs at least one coefficient");
  }
  auto first = std::find_if(coeffs.begin(), coeffs.end(), [](double c) { return c != 0.0; });
  if (first == coeffs.end())
  {
    return {0.0};
  }
  coeffs.erase(coeffs.begin(), first);
  return coeffs;
}

}  // namespace

Polynomial::Polynomial()
  : coeffs_{0.0}
{}

Polynomial::Polynomial(std::vector<double> coeffs)
  : coeffs_(trim(std::move(coeffs)))
{}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
  : Polynomial(std::vector<double>(coeffs))
{}

bool Polynomial::is_zero() const noexcept
{
  return coeffs_.size() == 1 && coeffs_[0] == 0.0;
}

double Polynomial::norm1() const noexcept
{
  double sum = 0;
  for (double c : coeffs_)
  {
    sum += std::fabs(c);
  }
  return sum;
}

double Polynomial::evaluate(double z) const noexcept
{
  double acc = 0;
  for (double c : coeffs_)
  {
    acc = acc * z + c;
  }
  return acc;
}

std::complex<double> Polynomial::evaluate(std::complex<double> z) const noexcept
{
  std::complex<double> acc = 0;
  for (double c : coeffs_)
  {
    acc = acc * z + c;
  }
  return acc;
}

Polynomial Polynomial::scaled(double factor) const
{
  std::vector<double> out = coeffs_;
  for (double &c : out)
  {
    c *= factor;
  }
  return Polynomial(std::move(out));
}

std::vector<double> Polynomial::padded(std::size_t length) const
{
  if (length < coeffs_.size())
  {
    throw DimensionMismatch("cannot pad a polynomial to fewer coefficients than it has");
  }
  std::vector<double> out(length - coeffs_.size(), 0.0);
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return out;
}

Polynomial operator+(Polynomial const &a, Polynomial const &b)
{
  std::size_t const n   = std::max(a.size(), b.size());
  std::vector<double> x = a.padded(n);
  std::vector<double> y = b.padded(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    x[i] += y[i];
  }
  return Polynomial(std::move(x));
}

Polynomial operator-(Polynomial const &a, Polynomial const &b)
{
  return a + b.scaled(-1.0);
}

Polynomial operator*(Polynomial const &a, Polynomial const &b)
{
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    for (std::size_t j = 0; j < b.size(); ++j)
    {
      out[i + j] += a[i] * b[j];
    }
  }
  return Polynomial(std::move(out));
}

std::ostream &operator<<(std::ostream &out, Polynomial const &p)
{
  out << "[";
  for (std::size_t i = 0; i < p.size(); ++i)
  {
    out << (i ? ", " : "") << p[i];
  }
  return out << "]";
}

}  // namespace fxv
