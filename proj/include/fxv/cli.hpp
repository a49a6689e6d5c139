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

#include <iosfwd>

namespace fxv::cli {

// Runs one verification command. Returns the process exit code:
// 0 property holds, 1 property violated (counterexample written), 2 usage
// or input error.
int run(int argc, char const *const *argv, std::ostream &out, std::ostream &err);

}  // namespace fxv::cli
