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

// Explicit-state bounded search for the k-unrolled properties.

#include "fxv/counterexample.hpp"
#include "fxv/fixed_point.hpp"
#include "fxv/realization.hpp"
#include "fxv/system.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fxv {

enum class EngineMode : std::uint8_t
{
  exhaustive,
  random
};

std::string_view          to_string(EngineMode mode);
std::optional<EngineMode> parse_engine_mode(std::string_view text);

struct EngineConfig
{
  EngineMode            mode    = EngineMode::exhaustive;
  std::uint64_t         samples = 100000;
  std::uint64_t         seed    = 1;
  std::optional<double> grid;         // input stride as a real value; default every raw value
  unsigned              threads = 0;  // 0 picks the hardware concurrency
  double                budget  = 1e7;
};

struct VerificationTask
{
  System                system;
  FxFormat              fmt;
  Property              property = Property::overflow;
  std::size_t           bound    = 1;
  std::optional<double> error_bound;
  RealizationSpec       realization;
  EngineConfig          engine;
  bool                  count_saturation = true;

  // Throws IncompatibleProperty or Error when the task cannot run.
  void validate() const;
};

// Raw input values searched at every step, ascending.
std::vector<std::int64_t> input_grid(FxFormat const &fmt, std::optional<double> stride);

// Number of candidates an exhaustive search would visit before pruning.
double search_space(VerificationTask const &task);

// Dispatches on task.property. Throws BudgetExceeded in exhaustive mode when
// search_space exceeds engine.budget.
Verdict verify(VerificationTask const &task);

Verdict verify_overflow(VerificationTask const &task);
Verdict verify_limit_cycle(VerificationTask const &task);
Verdict verify_error(VerificationTask const &task);
Verdict verify_ss_quantization_error(VerificationTask const &task);
Verdict verify_closed_limit_cycle(VerificationTask const &task);
Verdict verify_closed_error(VerificationTask const &task);

struct Trajectory
{
  std::vector<std::int64_t> initial_state;
  std::vector<std::int64_t> outputs;  // output channels per step, through the violation
  std::optional<Violation>  violation;
};

// Deterministic re-run of one candidate. Limit-cycle tasks ignore the input
// values and hold the input at zero for inputs.size() / channels steps.
Trajectory run_trajectory(VerificationTask const &task, std::span<std::int64_t const> initial_state,
                          std::span<std::int64_t const> inputs);

std::size_t task_state_size(VerificationTask const &task);
std::size_t task_input_channels(VerificationTask const &task);
std::size_t task_output_channels(VerificationTask const &task);

}  // namespace fxv
