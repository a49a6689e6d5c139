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

#include "fxv/bmc.hpp"
#include "fxv/counterexample.hpp"

#include <string>

namespace fxv {

enum class ReplayOutcome : std::uint8_t
{
  confirmed,
  refuted
};

struct ReplayResult
{
  ReplayOutcome outcome = ReplayOutcome::refuted;
  std::string   reason;

  bool confirmed() const noexcept { return outcome == ReplayOutcome::confirmed; }
};

// Re-simulates (bounded properties) or re-checks (k-free properties) the
// counterexample from its own contents.
ReplayResult replay(Counterexample const &ce);

// As above, after checking that ce was produced for `task`. Throws
// IncompatibleProperty or FormatMismatch when it was not.
ReplayResult replay(Counterexample const &ce, VerificationTask const &task);

// The task a bounded counterexample describes.
VerificationTask task_from(Counterexample const &ce);

}  // namespace fxv
