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

#include "fxv/replay.hpp"

#include "fxv/analytic.hpp"
#include "fxv/error.hpp"
#include "fxv/system_io.hpp"

#include <algorithm>

namespace fxv {

namespace {

ReplayResult refuted(std::string reason)
{
  return {ReplayOutcome::refuted, std::move(reason)};
}

ReplayResult confirmed()
{
  return {ReplayOutcome::confirmed, "violation reproduced"};
}

std::string describe(Violation const &v)
{
  std::string out = v.kind + " at " + v.node;
  if (v.step)
  {
    out += " step " + std::to_string(*v.step);
  }
  return out;
}

Verdict recheck(Counterexample const &ce, System const &system)
{
  auto need = [&](auto const *p) -> decltype(auto) {
    if (!p)
    {
      throw IncompatibleProperty(std::string(to_string(ce.property)) + " does not apply to a " +
                                 std::string(system_kind(system)) + " system");
    }
    return *p;
  };
  switch (ce.property)
  {
  case Property::stability:
    return check_stability_tf(need(std::get_if<TransferFunction>(&system)), ce.format);
  case Property::minimum_phase:
    return check_minimum_phase(need(std::get_if<TransferFunction>(&system)), ce.format);
  case Property::closed_stability:
    return check_closed_stability(need(std::get_if<ClosedLoopTf>(&system)), ce.format);
  case Property::ss_stability:
  case Property::ss_controllability:
  case Property::ss_observability:
  {
    auto run = [&](auto const &s) {
      if (ce.property == Property::ss_stability)
      {
        return check_stability_ss(s, ce.format);
      }
      if (ce.property == Property::ss_controllability)
      {
        return check_controllability(s, ce.format);
      }
      return check_observability(s, ce.format);
    };
    if (auto const *cl = std::get_if<ClosedLoopSs>(&system))
    {
      return run(*cl);
    }
    return run(need(std::get_if<StateSpace>(&system)));
  }
  default:
    throw IncompatibleProperty(std::string(to_string(ce.property)) + " is bounded");
  }
}

ReplayResult replay_analytic(Counterexample const &ce)
{
  Verdict const v = recheck(ce, parse_system(ce.system));
  if (!v.failed())
  {
    return refuted("the property holds under the recorded format");
  }
  Counterexample const &again = *v.counterexample;
  if (again.violation != ce.violation)
  {
    return refuted("violation differs: recorded " + describe(ce.violation) + ", replayed " +
                   describe(again.violation));
  }
  if (!ce.witness || !again.witness)
  {
    return refuted("no witness recorded");
  }
  AnalyticWitness const &w = *ce.witness;
  AnalyticWitness const &x = *again.witness;
  if (w.subject != x.subject || w.polynomial != x.polynomial || w.rank != x.rank ||
      w.dimension != x.dimension)
  {
    return refuted("witness differs from the recomputed check");
  }
  return confirmed();
}

ReplayResult replay_bounded(Counterexample const &ce)
{
  VerificationTask const task = task_from(ce);
  task.validate();
  if (ce.input_channels != task_input_channels(task) ||
      ce.output_channels != task_output_channels(task))
  {
    return refuted("channel counts do not match the system");
  }
  if (ce.initial_states.size() != task_state_size(task))
  {
    return refuted("initial state has the wrong length");
  }
  bool const cycle = ce.property == Property::limit_cycle ||
                     ce.property == Property::closed_limit_cycle;
  auto const is_zero = [](std::int64_t v) { return v == 0; };
  if (cycle && !std::all_of(ce.inputs.begin(), ce.inputs.end(), is_zero))
  {
    return refuted("limit-cycle inputs must be zero");
  }
  if (!cycle && !std::all_of(ce.initial_states.begin(), ce.initial_states.end(), is_zero))
  {
    return refuted("bounded checks start from the zero state");
  }
  if (ce.steps() > ce.bound)
  {
    return refuted("more inputs than the bound allows");
  }
  for (std::int64_t u : ce.inputs)
  {
    if (u < ce.format.dyn_raw_min() || u > ce.format.dyn_raw_max())
    {
      return refuted("input " + std::to_string(u) + " lies outside the dynamic range");
    }
  }

  Trajectory const t = run_trajectory(task, ce.initial_states, ce.inputs);
  if (!t.violation)
  {
    return refuted("no violation within the recorded inputs");
  }
  if (*t.violation != ce.violation)
  {
    return refuted("violation differs: recorded " + describe(ce.violation) + ", replayed " +
                   describe(*t.violation));
  }
  if (t.outputs != ce.outputs)
  {
    return refuted("outputs differ from the recorded outputs");
  }
  return confirmed();
}

}  // namespace

VerificationTask task_from(Counterexample const &ce)
{
  return VerificationTask{.system           = parse_system(ce.system),
                          .fmt              = ce.format,
                          .property         = ce.property,
                          .bound            = ce.bound,
                          .error_bound      = ce.error_bound,
                          .realization      = ce.realization,
                          .engine           = {},
                          .count_saturation = ce.engine.count_saturation};
}

ReplayResult replay(Counterexample const &ce)
{
  return is_bounded(ce.property) ? replay_bounded(ce) : replay_analytic(ce);
}

ReplayResult replay(Counterexample const &ce, VerificationTask const &task)
{
  if (ce.property != task.property)
  {
    throw IncompatibleProperty("counterexample is for " + std::string(to_string(ce.property)) +
                               ", task checks " + std::string(to_string(task.property)));
  }
  if (parse_system(ce.system) != task.system)
  {
    throw IncompatibleProperty("counterexample system differs from the task system");
  }
  if (ce.format != task.fmt)
  {
    throw FormatMismatch("counterexample format " + ce.format.describe() + " differs from " +
                         task.fmt.describe());
  }
  if (is_bounded(ce.property) && ce.realization != task.realization)
  {
    throw IncompatibleProperty("counterexample realization differs from the task realization");
  }
  return replay(ce);
}

}  // namespace fxv
