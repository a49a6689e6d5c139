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

#include "fxv/fwl.hpp"

namespace fxv {

Polynomial fwl_poly(Polynomial const &p, FxFormat const &fmt)
{
  return Polynomial(quantize_values(p.coeffs(), fmt));
}

std::vector<std::int64_t> quantize_raws(std::span<double const> values, FxFormat const &fmt)
{
  std::vector<std::int64_t> out;
  out.reserve(values.size());
  for (double v : values)
  {
    out.push_back(fx::quantize(v, fmt).raw);
  }
  return out;
}

std::vector<double> quantize_values(std::span<double const> values, FxFormat const &fmt)
{
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values)
  {
    out.push_back(fmt.to_real(fx::quantize(v, fmt).raw));
  }
  return out;
}

Eigen::MatrixXd fwl_matrix(Eigen::MatrixXd const &m, FxFormat const &fmt)
{
  return m.unaryExpr([&fmt](double v) { return fmt.to_real(fx::quantize(v, fmt).raw); });
}

}  // namespace fxv
