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

// JSON system descriptions:
//
//   {"type":"tf","num":[...],"den":[...],"ts":0.001}
//   {"type":"ss","A":[[...]],"B":[[...]],"C":[[...]],"D":[[...]],"ts":0.001}
//   {"type":"cl-tf","controller":{...},"plant":{...},"cmode":"series"}
//   {"type":"cl-ss","plant":{...},"K":[[...]]}
//
// Nested controller/plant objects may omit "type". "ts" defaults to 1 and
// "cmode" to series.

#include "fxv/system.hpp"

#include <json.hpp>

#include <filesystem>

namespace fxv {

/// Throws MalformedDocument on schema errors; model invariant violations
/// surface as DegenerateSystem or DimensionMismatch.
System         parse_system(nlohmann::json const &doc);
nlohmann::json to_json(System const &system);

System load_system(std::filesystem::path const &path, nlohmann::json *raw = nullptr);

}  // namespace fxv
