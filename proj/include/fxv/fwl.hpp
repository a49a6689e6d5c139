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

// Finite-word-length coefficient quantization.

#include "fxv/fixed_point.hpp"
#include "fxv/polynomial.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace fxv {

/// Replaces every coefficient of `p` by its quantized value under `fmt`.
///
/// Out-of-range coefficients are wrapped or saturated per the format. If the
/// leading coefficient quantizes to zero the result is trimmed and its degree
/// drops.
Polynomial fwl_poly(Polynomial const &p, FxFormat const &fmt);

std::vector<std::int64_t> quantize_raws(std::span<double const> values, FxFormat const &fmt);
std::vector<double>       quantize_values(std::span<double const> values, FxFormat const &fmt);

Eigen::MatrixXd fwl_matrix(Eigen::MatrixXd const &m, FxFormat const &fmt);

}  // namespace fxv
