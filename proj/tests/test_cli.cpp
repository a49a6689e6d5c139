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

#include "fxv/cli.hpp"
#include "fxv/counterexample.hpp"
#include "fxv/replay.hpp"
#include "fxv/system_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result
{
  int         code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args)
{
  args.insert(args.begin(), "fxverify");
  std::vector<char const *> argv;
  for (auto const &a : args)
  {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  int const code = fxv::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Workspace
{
public:
  Workspace()
    : dir_(fs::temp_directory_path() / "fxv_cli_test")
  {
    fs::create_directories(dir_);
    write("eq1.json", R"({"type":"tf","num":[1.0,-2.819,2.637,-0.8187],"den":[1.0,-1.97,1.033,-0.06068],"ts":0.001})");
    write("gain.json", R"({"type":"tf","num":[10],"den":[1]})");
    write("loop.json", R"({"type":"cl-tf","controller":{"num":[0.3],"den":[1]},"plant":{"num":[1],"den":[1,-1.5]}})");
    write("ss.json", R"({"type":"ss","A":[[0.3]],"B":[[1]],"C":[[1]],"D":[[0]]})");
    write("clss.json", R"({"type":"cl-ss","plant":{"A":[[1.5]],"B":[[1]],"C":[[1]],"D":[[0]]},"K":[[1.0]]})");
    write("broken.json", R"({"type":"tf","num":[1)");
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string path(char const *name) const { return (dir_ / name).string(); }

private:
  void write(char const *name, char const *text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

std::vector<std::string> base(std::string const &sys, int i, int f)
{
  return {"--system", sys, "--intbits", std::to_string(i), "--fracbits", std::to_string(f)};
}

std::vector<std::string> join(std::string cmd, std::vector<std::string> a, std::vector<std::string> b = {})
{
  a.insert(a.begin(), std::move(cmd));
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("worked example from the command line")
{
  Workspace   ws;
  std::string ce = ws.path("ce.json");
  Result ok = invoke(join("verify-stability", base(ws.path("eq1.json"), 2, 13),
                          {"--max", "1", "--min", "-1", "--ce-out", ce}));
  CHECK(ok.code == 0);
  CHECK(ok.out == "VERIFICATION SUCCESSFUL\n");
  CHECK_FALSE(fs::exists(ce));

  Result bad = invoke(join("verify-stability", base(ws.path("eq1.json"), 12, 3),
                           {"--max", "1", "--min", "-1", "--ce-out", ce}));
  CHECK(bad.code == 1);
  CHECK(bad.out == "VERIFICATION FAILED\n");
  REQUIRE(fs::exists(ce));
  CHECK(fxv::replay(fxv::read_counterexample(ce)).confirmed());
}

TEST_CASE("required flags follow the parameter table")
{
  Workspace ws;
  auto      sys = base(ws.path("eq1.json"), 2, 13);
  CHECK(invoke(join("verify-overflow", sys, {"--max", "1", "--min", "-1"})).code == 2);
  CHECK(invoke(join("verify-stability", sys, {"--max", "1"})).code == 2);
  CHECK(invoke(join("verify-error", sys, {"--max", "1", "--min", "-1", "--bound", "2"})).code == 2);
  CHECK(invoke(join("verify-closed-stability", base(ws.path("loop.json"), 4, 8),
                    {"--max", "1", "--min", "-1"}))
          .code == 2);
  // Parameters outside a command's row are rejected.
  CHECK(invoke(join("verify-stability", sys, {"--max", "1", "--min", "-1", "--bound", "3"})).code == 2);
  CHECK(invoke(join("verify-ss-stability", base(ws.path("ss.json"), 2, 3), {"--cmode", "series"}))
          .code == 2);
  CHECK(invoke({"verify-everything"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("input errors exit with 2")
{
  Workspace ws;
  CHECK(invoke(join("verify-stability", base(ws.path("missing.json"), 2, 13), {"--max", "1", "--min", "-1"}))
          .code == 2);
  Result broken = invoke(join("verify-stability", base(ws.path("broken.json"), 2, 13), {"--max", "1", "--min", "-1"}));
  CHECK(broken.code == 2);
  CHECK_FALSE(broken.err.empty());
  CHECK(invoke(join("verify-ss-stability", base(ws.path("eq1.json"), 2, 13))).code == 2);
  CHECK(invoke(join("verify-stability", base(ws.path("eq1.json"), 0, 0), {"--max", "1", "--min", "-1"}))
          .code == 2);
  CHECK(invoke(join("verify-stability", base(ws.path("eq1.json"), 2, 13), {"--max", "9", "--min", "-1"}))
          .code == 2);
  CHECK(invoke(join("verify-overflow", base(ws.path("eq1.json"), 2, 13),
                    {"--max", "1", "--min", "-1", "--bound", "2", "--realization", "DDFII"}))
          .code == 2);  // delta form without --delta
}

TEST_CASE("bounded commands write replayable counterexamples")
{
  Workspace   ws;
  std::string ce  = ws.path("ce.json");
  Result      ovf = invoke(join("verify-overflow", base(ws.path("gain.json"), 2, 4),
                                {"--max", "1", "--min", "-1", "--bound", "1", "--ce-out", ce}));
  CHECK(ovf.code == 1);
  CHECK(ovf.out == "VERIFICATION FAILED\n");
  fxv::Counterexample const c = fxv::read_counterexample(ce);
  CHECK(c.property == fxv::Property::overflow);
  CHECK(fxv::replay(c).confirmed());

  Result err = invoke(join("verify-error", base(ws.path("eq1.json"), 2, 13),
                           {"--max", "1", "--min", "-1", "--bound", "3", "--grid", "0.25", "--error",
                            "100", "--ce-out", ce}));
  CHECK(err.code == 0);

  Result big = invoke(join("verify-overflow", base(ws.path("eq1.json"), 2, 13),
                           {"--max", "1", "--min", "-1", "--bound", "6", "--samples", "500", "--ce-out", ce}));
  CHECK(big.err.find("random") != std::string::npos);
  CHECK(big.code != 2);
}

TEST_CASE("closed-loop cmode comes from the flag")
{
  Workspace   ws;
  std::string ce = ws.path("ce.json");
  auto        sys = base(ws.path("loop.json"), 4, 8);
  // Series: 1 + 0.3/(z - 1.5) has its root at 1.2; feedback gives the same
  // characteristic polynomial, so both fail.
  Result series = invoke(join("verify-closed-stability", sys,
                              {"--max", "1", "--min", "-1", "--cmode", "series", "--ce-out", ce}));
  CHECK(series.code == 1);
  Result fb = invoke(join("verify-closed-quantization-error", sys,
                          {"--max", "1", "--min", "-1", "--cmode", "feedback", "--bound", "3",
                           "--error", "0", "--grid", "0.5", "--ce-out", ce}));
  REQUIRE(fb.code == 1);
  fxv::Counterexample const c = fxv::read_counterexample(ce);
  CHECK(c.system.at("cmode") == "feedback");
  CHECK(fxv::replay(c).confirmed());
}

TEST_CASE("state-space commands take an optional range")
{
  Workspace   ws;
  std::string ce = ws.path("ce.json");
  CHECK(invoke(join("verify-ss-stability", base(ws.path("ss.json"), 2, 3))).code == 0);
  CHECK(invoke(join("verify-ss-controllability", base(ws.path("ss.json"), 2, 3))).code == 0);
  CHECK(invoke(join("verify-ss-observability", base(ws.path("ss.json"), 2, 3))).code == 0);
  CHECK(invoke(join("verify-ss-stability", base(ws.path("clss.json"), 2, 3))).code == 0);
  Result qe = invoke(join("verify-ss-quantization-error", base(ws.path("ss.json"), 2, 3),
                          {"--bound", "3", "--error", "0", "--ce-out", ce}));
  CHECK(qe.code == 1);
  CHECK(fxv::replay(fxv::read_counterexample(ce)).confirmed());
  CHECK(invoke(join("verify-ss-quantization-error", base(ws.path("ss.json"), 2, 3),
                    {"--bound", "3", "--error", "0", "--max", "0.5", "--min", "-0.5"}))
          .code == 1);
}

TEST_CASE("minimum phase and limit cycle commands")
{
  Workspace   ws;
  std::string ce = ws.path("ce.json");
  CHECK(invoke(join("verify-minimum-phase", base(ws.path("eq1.json"), 4, 13),
                    {"--max", "1", "--min", "-1", "--ce-out", ce}))
          .code == 1);
  CHECK(invoke(join("verify-limit-cycle", base(ws.path("gain.json"), 2, 4),
                    {"--max", "1", "--min", "-1", "--bound", "8", "--ce-out", ce}))
          .code == 0);
}
