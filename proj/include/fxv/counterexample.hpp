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

// Counterexample documents (schema "fwl-ce/1").
//
// Top-level fields: schema, property, system, format {int_bits, frac_bits,
// overflow_mode, rounding, dyn_min, dyn_max}, realization {form, delta},
// bound, error_bound, channels {inputs, outputs}, inputs, initial_states,
// outputs (arrays of {raw, value}), violation {step, node, kind},
// engine {mode, seed, grid, count_saturation} and, for the k-free checks,
// witness {subject, polynomial, roots, max_modulus, rank, dimension}.
//
// Raw integers are authoritative; "value" is a decimal rendering only.
// Multi-channel sequences are flattened step-major.

#include "fxv/fixed_point.hpp"
#include "fxv/realization.hpp"

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fxv {

inline constexpr char kCounterexampleSchema[] = "fwl-ce/1";

enum class Property : std::uint8_t
{
  stability,
  minimum_phase,
  overflow,
  limit_cycle,
  quantization_error,
  closed_stability,
  closed_limit_cycle,
  closed_quantization_error,
  ss_stability,
  ss_controllability,
  ss_observability,
  ss_quantization_error,
};

std::string_view        to_string(Property property);
std::optional<Property> parse_property(std::string_view text);

// Properties checked over k-step unrollings.
bool is_bounded(Property property) noexcept;

struct Violation
{
  std::optional<std::size_t> step;
  std::string                node;
  std::string                kind;

  friend bool operator==(Violation const &, Violation const &) = default;
};

struct EngineProvenance
{
  std::string   mode = "analytic";
  std::uint64_t seed = 0;
  double        grid = 0;  // input grid stride as a real value; 0 for analytic checks
  bool          count_saturation = true;

  friend bool operator==(EngineProvenance const &, EngineProvenance const &) = default;
};

// Evidence for the k-free checks: the polynomial whose roots decided the
// verdict, or the rank of the controllability/observability matrix.
struct AnalyticWitness
{
  std::string                       subject;
  std::vector<double>               polynomial;
  std::vector<std::complex<double>> roots;
  double                            max_modulus = 0;
  int                               rank        = -1;
  int                               dimension   = -1;

  friend bool operator==(AnalyticWitness const &, AnalyticWitness const &) = default;
};

struct Counterexample
{
  Property                       property = Property::stability;
  nlohmann::json                 system;
  FxFormat                       format = FxFormat(1, 0);
  RealizationSpec                realization;
  std::size_t                    bound = 0;
  std::optional<double>          error_bound;
  std::size_t                    input_channels  = 1;
  std::size_t                    output_channels = 1;
  std::vector<std::int64_t>      inputs;
  std::vector<std::int64_t>      initial_states;
  std::vector<std::int64_t>      outputs;
  Violation                      violation;
  EngineProvenance               engine;
  std::optional<AnalyticWitness> witness;

  std::size_t steps() const noexcept { return inputs.size() / std::max<std::size_t>(input_channels, 1); }

  friend bool operator==(Counterexample const &, Counterexample const &) = default;
};

nlohmann::json serialize(Counterexample const &ce);

/// Throws VersionMismatch for a foreign schema, OffGridValue for raws that
/// do not fit the format word, MalformedDocument otherwise.
Counterexample deserialize(nlohmann::json const &doc);

void           write_counterexample(std::filesystem::path const &path, Counterexample const &ce);
Counterexample read_counterexample(std::filesystem::path const &path);

enum class Status : std::uint8_t
{
  successful,
  failed
};

struct SearchStats
{
  std::string   mode = "analytic";
  std::uint64_t states_explored = 0;
  double        wall_seconds    = 0;
  bool          sampled         = false;  // SUCCESSFUL only means "none found"
  std::uint64_t samples         = 0;
  double        grid            = 0;
  double        space           = 0;  // size of the exhaustive space
  std::string   note;
};

struct Verdict
{
  Status                        status   = Status::successful;
  Property                      property = Property::stability;
  std::optional<Counterexample> counterexample;
  SearchStats                   stats;

  bool failed() const noexcept { return status == Status::failed; }
};

std::string_view verdict_banner(Status status);

}  // namespace fxv
