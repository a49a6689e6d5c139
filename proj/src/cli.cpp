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

#include "fxv/analytic.hpp"
#include "fxv/bmc.hpp"
#include "fxv/error.hpp"
#include "fxv/system_io.hpp"

#include <CLI11.hpp>

#include <array>
#include <iomanip>
#include <ostream>

namespace fxv::cli {

namespace {

struct Row
{
  char const *name;
  Property    property;
  bool        range;  // --max/--min required
  bool        bound;
  bool        cmode;
  bool        error;
  char const *help;
};

constexpr std::array kRows = {
  Row{"verify-stability", Property::stability, true, false, false, false,
      "Stability of a transfer function after coefficient quantization"},
  Row{"verify-overflow", Property::overflow, true, true, false, false,
      "Arithmetic overflow within k steps"},
  Row{"verify-error", Property::quantization_error, true, true, false, true,
      "Output quantization error against a double-precision reference"},
  Row{"verify-minimum-phase", Property::minimum_phase, true, false, false, false,
      "Zeros strictly inside the unit circle after quantization"},
  Row{"verify-limit-cycle", Property::limit_cycle, true, true, false, false,
      "Zero-input limit cycles within k steps"},
  Row{"verify-closed-stability", Property::closed_stability, true, false, true, false,
      "Stability of a controller/plant loop"},
  Row{"verify-closed-quantization-error", Property::closed_quantization_error, true, true, true, true,
      "Loop output error caused by the fixed-point controller"},
  Row{"verify-closed-limit-cycle", Property::closed_limit_cycle, true, true, true, false,
      "Zero-input limit cycles of a controller/plant loop"},
  Row{"verify-ss-stability", Property::ss_stability, false, false, false, false,
      "Eigenvalues of the quantized state matrix"},
  Row{"verify-ss-controllability", Property::ss_controllability, false, false, false, false,
      "Rank of the controllability matrix"},
  Row{"verify-ss-observability", Property::ss_observability, false, false, false, false,
      "Rank of the observability matrix"},
  Row{"verify-ss-quantization-error", Property::ss_quantization_error, false, true, false, true,
      "State-space output error against an exact recursion"},
};

struct Options
{
  std::string           system;
  int                   int_bits  = 0;
  int                   frac_bits = 0;
  std::optional<double> max;
  std::optional<double> min;
  std::size_t           bound = 0;
  std::string           cmode;
  double                error = 0;

  std::string           realization   = "DFI";
  std::string           overflow_mode = "wrap";
  std::string           rounding      = "floor";
  std::optional<double> delta;
  std::string           engine  = "exhaustive";
  std::uint64_t         samples = 100000;
  std::uint64_t         seed    = 1;
  std::optional<double> grid;
  unsigned              threads = 0;
  double                budget  = 1e7;
  bool                  ignore_saturation = false;
  std::string           ce_out = "counterexample.json";
};

void add_options(CLI::App &sub, Row const &row, Options &o)
{
  sub.add_option("--system", o.system, "System description (JSON)")->required();
  sub.add_option("--intbits", o.int_bits, "Integer bits, sign included")->required();
  sub.add_option("--fracbits", o.frac_bits, "Fractional bits")->required();
  auto *max = sub.add_option("--max", o.max, "Upper end of the input dynamic range");
  auto *min = sub.add_option("--min", o.min, "Lower end of the input dynamic range");
  if (row.range)
  {
    max->required();
    min->required();
  }
  else
  {
    max->description("Upper end of the input range (default: largest representable value)");
    min->description("Lower end of the input range (default: smallest representable value)");
  }
  if (row.bound)
  {
    sub.add_option("--bound", o.bound, "Number of unrolled steps k")->required()->check(
      CLI::PositiveNumber);
  }
  if (row.cmode)
  {
    sub.add_option("--cmode", o.cmode, "Loop connection: series or feedback (overrides the file)")
      ->required()
      ->check(CLI::IsMember({"series", "feedback"}));
  }
  if (row.error)
  {
    sub.add_option("--error", o.error, "Largest admissible output error")->required()->check(
      CLI::NonNegativeNumber);
  }

  sub.add_option("--overflow-mode", o.overflow_mode, "wrap or saturate")
    ->check(CLI::IsMember({"wrap", "wraparound", "saturate"}))
    ->capture_default_str();
  sub.add_option("--rounding", o.rounding, "floor or nearest")
    ->check(CLI::IsMember({"floor", "nearest", "nearest-even"}))
    ->capture_default_str();
  sub.add_option("--ce-out", o.ce_out, "Counterexample file written on failure")
    ->capture_default_str();

  if (row.bound)
  {
    sub.add_option("--realization", o.realization, "DFI, DFII, TDFII, DDFI, DDFII or TDDFII")
      ->capture_default_str();
    sub.add_option("--delta", o.delta, "Delta operator step (delta forms only)");
    sub.add_option("--engine", o.engine, "exhaustive or random")
      ->check(CLI::IsMember({"exhaustive", "random"}))
      ->capture_default_str();
    sub.add_option("--samples", o.samples, "Samples in random mode")->capture_default_str();
    sub.add_option("--seed", o.seed, "Seed for random mode")->capture_default_str();
    sub.add_option("--grid", o.grid, "Input stride as a real value (default: every raw value)");
    sub.add_option("--threads", o.threads, "Worker threads (0: hardware concurrency)")
      ->capture_default_str();
    sub.add_option("--budget", o.budget, "Largest exhaustive search space before sampling")
      ->capture_default_str();
    sub.add_flag("--ignore-saturation", o.ignore_saturation,
                 "In saturate mode, do not report clamping as overflow");
  }
}

FxFormat make_format(Options const &o)
{
  auto const overflow = parse_overflow_mode(o.overflow_mode);
  auto const rounding = parse_rounding(o.rounding);
  FxFormat   fmt(o.int_bits, o.frac_bits, *overflow, *rounding);
  if (o.min || o.max)
  {
    fmt = fmt.with_range(o.min.value_or(fmt.min_value()), o.max.value_or(fmt.max_value()));
  }
  return fmt;
}

template <class T>
T const &expect(System const &sys, Property p)
{
  if (auto const *v = std::get_if<T>(&sys))
  {
    return *v;
  }
  throw IncompatibleProperty(std::string(to_string(p)) + " does not apply to a " +
                             std::string(system_kind(sys)) + " system");
}

Verdict analytic(Row const &row, System const &sys, FxFormat const &fmt)
{
  auto on_ss = [&](auto &&check) {
    if (auto const *cl = std::get_if<ClosedLoopSs>(&sys))
    {
      return check(*cl);
    }
    return check(expect<StateSpace>(sys, row.property));
  };
  switch (row.property)
  {
  case Property::stability:
    return check_stability_tf(expect<TransferFunction>(sys, row.property), fmt);
  case Property::minimum_phase:
    return check_minimum_phase(expect<TransferFunction>(sys, row.property), fmt);
  case Property::closed_stability:
    return check_closed_stability(expect<ClosedLoopTf>(sys, row.property), fmt);
  case Property::ss_stability:
    return on_ss([&](auto const &s) { return check_stability_ss(s, fmt); });
  case Property::ss_controllability:
    return on_ss([&](auto const &s) { return check_controllability(s, fmt); });
  case Property::ss_observability:
    return on_ss([&](auto const &s) { return check_observability(s, fmt); });
  default:
    throw IncompatibleProperty("not a k-free property");
  }
}

Verdict bounded(Row const &row, System sys, FxFormat const &fmt, Options const &o,
                std::ostream &err)
{
  auto const form = parse_form(o.realization);
  if (!form)
  {
    throw Error("unknown realization \"" + o.realization + "\"");
  }
  EngineConfig const engine{.mode    = *parse_engine_mode(o.engine),
                            .samples = o.samples,
                            .seed    = o.seed,
                            .grid    = o.grid,
                            .threads = o.threads,
                            .budget  = o.budget};
  VerificationTask task{.system           = std::move(sys),
                        .fmt              = fmt,
                        .property         = row.property,
                        .bound            = o.bound,
                        .error_bound      = row.error ? std::optional<double>(o.error) : std::nullopt,
                        .realization      = RealizationSpec{*form, o.delta},
                        .engine           = engine,
                        .count_saturation = !o.ignore_saturation};
  try
  {
    return verify(task);
  }
  catch (BudgetExceeded const &e)
  {
    err << "note: " << e.what() << "; falling back to random sampling (" << task.engine.samples
        << " samples, seed " << task.engine.seed << ")\n";
    task.engine.mode = EngineMode::random;
    return verify(task);
  }
}

void report(Verdict const &v, std::ostream &err)
{
  if (v.stats.mode == "analytic")
  {
    return;
  }
  err << "search: " << v.stats.mode << ", " << v.stats.states_explored << " steps explored in "
      << std::fixed << std::setprecision(3) << v.stats.wall_seconds << " s";
  err.unsetf(std::ios::floatfield);
  if (!v.stats.note.empty())
  {
    err << " (" << v.stats.note << ")";
  }
  err << "\n";
}

int execute(Row const &row, Options const &o, std::ostream &out, std::ostream &err)
{
  System sys = load_system(o.system);
  if (row.cmode)
  {
    expect<ClosedLoopTf>(sys, row.property);
    std::get<ClosedLoopTf>(sys).cmode = *parse_connection_mode(o.cmode);
  }
  FxFormat const fmt = make_format(o);
  Verdict const  v   = is_bounded(row.property) ? bounded(row, std::move(sys), fmt, o, err)
                                                : analytic(row, sys, fmt);
  report(v, err);
  out << verdict_banner(v.status) << "\n";
  if (v.failed())
  {
    write_counterexample(o.ce_out, *v.counterexample);
    err << "counterexample: " << o.ce_out << " (" << v.counterexample->violation.kind << " at "
        << v.counterexample->violation.node << ")\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run(int argc, char const *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Verifier for fixed-point digital filters and controllers", "fxverify"};
  app.require_subcommand(1);
  Options                    o;
  std::vector<std::pair<CLI::App *, Row const *>> subs;
  for (Row const &row : kRows)
  {
    CLI::App *sub = app.add_subcommand(row.name, row.help);
    add_options(*sub, row, o);
    subs.emplace_back(sub, &row);
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try
  {
    for (auto const &[sub, row] : subs)
    {
      if (sub->parsed())
      {
        return execute(*row, o, out, err);
      }
    }
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace fxv::cli
