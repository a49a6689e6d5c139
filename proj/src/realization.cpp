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

#include "fxv/realization.hpp"

#include "fxv/error.hpp"
#include "fxv/fwl.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace fxv {

namespace {

constexpr std::array<std::string_view, 6> kFormNames = {"DFI",  "DFII",  "TDFII",
                                                        "DDFI", "DDFII", "TDDFII"};

}  // namespace

std::string_view to_string(Form form)
{
  return kFormNames[static_cast<std::size_t>(form)];
}

std::optional<Form> parse_form(std::string_view text)
{
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::size_t i = 0; i < kFormNames.size(); ++i)
  {
    if (upper == kFormNames[i])
    {
      return static_cast<Form>(i);
    }
  }
  return std::nullopt;
}

void RealizationSpec::validate() const
{
  if (is_delta(form))
  {
    if (!delta || !(*delta > 0) || !std::isfinite(*delta))
    {
      throw Error(std::string(to_string(form)) + " needs a positive delta");
    }
  }
  else if (delta)
  {
    throw Error(std::string(to_string(form)) + " is a shift form and takes no delta");
  }
}

std::vector<double> to_delta_coeffs(std::span<double const> coeffs, double delta)
{
  // Horner in the delta domain: acc <- acc * (1 + delta * d) + c.
  std::vector<double> acc;
  for (double c : coeffs)
  {
    std::vector<double> next(acc.size() + 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i)
    {
      next[i] += delta * acc[i];
      next[i + 1] += acc[i];
    }
    next.back() += c;
    acc = std::move(next);
  }
  return acc;
}

Polynomial to_delta_coeffs(Polynomial const &p, double delta)
{
  return Polynomial(to_delta_coeffs(p.coeffs(), delta));
}

std::string NodeId::str() const
{
  static constexpr std::array<std::string_view, 4> ops = {"mul", "add", "sub", "quantize"};
  std::string out(ops[static_cast<std::size_t>(op)]);
  out += ':';
  out += tag;
  out += '[';
  out += std::to_string(index);
  out += ']';
  return out;
}

std::optional<NodeId> NodeId::parse(std::string_view text)
{
  auto const colon = text.find(':');
  if (colon == std::string_view::npos || text.size() < colon + 5 || text[colon + 2] != '[' ||
      text.back() != ']')
  {
    return std::nullopt;
  }
  NodeId           id;
  std::string_view op = text.substr(0, colon);
  if (op == "mul")
  {
    id.op = NodeOp::mul;
  }
  else if (op == "add")
  {
    id.op = NodeOp::add;
  }
  else if (op == "sub")
  {
    id.op = NodeOp::sub;
  }
  else if (op == "quantize")
  {
    id.op = NodeOp::quantize;
  }
  else
  {
    return std::nullopt;
  }
  id.tag                = text[colon + 1];
  std::string_view num  = text.substr(colon + 3, text.size() - colon - 4);
  auto [ptr, ec]        = std::from_chars(num.data(), num.data() + num.size(), id.index);
  if (ec != std::errc{} || ptr != num.data() + num.size())
  {
    return std::nullopt;
  }
  return id;
}

std::optional<NodeId> StepTrace::first_overflow() const
{
  for (auto const &rec : nodes)
  {
    if (rec.overflow)
    {
      return rec.node;
    }
  }
  return std::nullopt;
}

std::size_t state_size(Form form, int order) noexcept
{
  auto const n = static_cast<std::size_t>(order);
  return (form == Form::dfi || form == Form::ddfi) ? 2 * n : n;
}

RealizationCoefficients realization_coefficients(TransferFunction const &tf,
                                                 RealizationSpec const  &spec)
{
  spec.validate();
  RealizationCoefficients out;
  out.b = tf.padded_num();
  out.a = tf.den().coeffs();
  if (is_delta(spec.form))
  {
    out.delta = *spec.delta;
    out.b     = to_delta_coeffs(out.b, out.delta);
    out.a     = to_delta_coeffs(out.a, out.delta);
    double const lead = out.a.front();
    for (double &c : out.b)
    {
      c /= lead;
    }
    for (double &c : out.a)
    {
      c /= lead;
    }
    out.a.front() = 1.0;
  }
  return out;
}

FixedRealization::FixedRealization(TransferFunction const &tf, FxFormat fmt, RealizationSpec spec)
  : fmt_(std::move(fmt))
  , spec_(std::move(spec))
{
  RealizationCoefficients const c = realization_coefficients(tf, spec_);
  auto quantize_all = [this](std::vector<double> const &values, std::size_t skip) {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
      auto const r = fx::quantize(values[i], fmt_);
      if (i >= skip)
      {
        coefficient_overflow_ |= r.overflow;
      }
      out.push_back(r.raw);
    }
    return out;
  };
  b_ = quantize_all(c.b, 0);
  // a0 = 1 is structural and never multiplied.
  a_ = quantize_all(c.a, 1);
  if (is_delta(spec_.form))
  {
    auto const d = fx::quantize(c.delta, fmt_);
    delta_       = d.raw;
    coefficient_overflow_ |= d.overflow;
  }
}

std::int64_t FixedRealization::step_traced(std::span<std::int64_t> state, std::int64_t u,
                                           StepTrace &trace) const
{
  trace.input = u;
  trace.nodes.clear();
  TraceSink sink{&trace};
  trace.output = step(state, u, sink);
  return trace.output;
}

ReferenceRealization::ReferenceRealization(TransferFunction const &tf, RealizationSpec spec)
  : spec_(std::move(spec))
  , coeffs_(realization_coefficients(tf, spec_))
{}

StepResult step(FixedRealization const &realization, std::span<std::int64_t const> state,
                FxNum const &u)
{
  if (state.size() != realization.state_size())
  {
    throw DimensionMismatch("state has " + std::to_string(state.size()) + " entries, " +
                            std::string(to_string(realization.spec().form)) + " needs " +
                            std::to_string(realization.state_size()));
  }
  if (!u.format().same_arithmetic(realization.format()))
  {
    throw FormatMismatch("input format differs from the realization format");
  }
  std::vector<std::int64_t> next(state.begin(), state.end());
  StepTrace                 trace;
  std::int64_t const        y = realization.step_traced(next, u.raw(), trace);
  return {std::move(next), FxNum(y, realization.format()), std::move(trace)};
}

std::vector<SimulationStep> simulate(TransferFunction const &tf, FxFormat const &fmt,
                                     RealizationSpec const &spec, std::span<FxNum const> inputs,
                                     std::span<std::int64_t const> init)
{
  FixedRealization const    realization(tf, fmt, spec);
  std::vector<std::int64_t> state(realization.state_size(), 0);
  if (!init.empty())
  {
    if (init.size() != state.size())
    {
      throw DimensionMismatch("initial state has the wrong length");
    }
    std::copy(init.begin(), init.end(), state.begin());
  }
  std::vector<SimulationStep> out;
  out.reserve(inputs.size());
  for (FxNum const &u : inputs)
  {
    if (!u.format().same_arithmetic(fmt))
    {
      throw FormatMismatch("input format differs from the realization format");
    }
    StepTrace          trace;
    std::int64_t const y = realization.step_traced(state, u.raw(), trace);
    out.push_back({FxNum(y, fmt), std::move(trace)});
  }
  return out;
}

std::vector<double> simulate_reference(TransferFunction const &tf, RealizationSpec const &spec,
                                       std::span<double const> inputs,
                                       std::span<double const> init)
{
  ReferenceRealization const realization(tf, spec);
  std::vector<double>        state(realization.state_size(), 0.0);
  if (!init.empty())
  {
    if (init.size() != state.size())
    {
      throw DimensionMismatch("initial state has the wrong length");
    }
    std::copy(init.begin(), init.end(), state.begin());
  }
  std::vector<double> out;
  out.reserve(inputs.size());
  for (double u : inputs)
  {
    out.push_back(realization.step(state, u));
  }
  return out;
}

}  // namespace fxv
