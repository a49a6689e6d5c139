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

// Executable filter structures for transfer functions.
//
// Every form is written once as a kernel over an arithmetic policy, and run
// either bit-accurately in fixed point (FixedRealization) or in double
// precision with unquantized coefficients (ReferenceRealization).
//
// Coefficients: b = b0..bN (numerator padded to the denominator's order N),
// a = 1, a1..aN. Delta forms use the delta-domain coefficients beta/alpha
// obtained by substituting z = 1 + delta * d and normalizing by the leading
// denominator coefficient; their delay elements are integrators
// w(n+1) = w(n) + delta * v(n).
//
// State layouts (index 0 is the most recent element of each line):
//   DFI    [x(n-1) .. x(n-N), y(n-1) .. y(n-N)]
//   DFII   [w(n-1) .. w(n-N)]
//   TDFII  [s1 .. sN]
//   DDFI   [X1 .. XN, Y1 .. YN]   Xi = d^-i u, Yi = d^-i y
//   DDFII  [W1 .. WN]             Wi = d^-i e
//   TDDFII [S1 .. SN]
//
// Evaluation order, with overflow checked after every node:
//   DFI/DDFI   mul b0..bN, mul a1..aN, then acc = p_b0, add b1..bN, sub a1..aN
//   DFII/DDFII mul a1..aN, e = u, sub a1..aN; mul b0..bN, y = p_b0, add b1..bN
//   TDFII      mul b0, add s1 -> y; per i: mul bi, mul ai, sub ai, add s(i+1)
//   TDDFII     as TDFII, but each tap v_i feeds integrator S_i
//   Integrator updates run last, from the deepest element up:
//   mul X/Y/W/S i (delta * input) then add X/Y/W/S i.

#include "fxv/fixed_point.hpp"
#include "fxv/polynomial.hpp"
#include "fxv/system.hpp"

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fxv {

enum class Form : std::uint8_t
{
  dfi,
  dfii,
  tdfii,
  ddfi,
  ddfii,
  tddfii
};

std::string_view    to_string(Form form);
std::optional<Form> parse_form(std::string_view text);

constexpr bool is_delta(Form form) noexcept
{
  return form == Form::ddfi || form == Form::ddfii || form == Form::tddfii;
}

struct RealizationSpec
{
  Form                  form = Form::dfi;
  std::optional<double> delta;

  // Throws Error unless delta is present and positive exactly for delta forms.
  void validate() const;

  friend bool operator==(RealizationSpec const &, RealizationSpec const &) = default;
};

/// p(z) rewritten in the delta operator via z = 1 + delta * d. Not normalized.
Polynomial          to_delta_coeffs(Polynomial const &p, double delta);
std::vector<double> to_delta_coeffs(std::span<double const> coeffs, double delta);

enum class NodeOp : std::uint8_t
{
  mul,
  add,
  sub,
  quantize,
};

/// Arithmetic node inside a step, e.g. "mul:b[2]" or "add:X[1]".
struct NodeId
{
  NodeOp        op    = NodeOp::mul;
  char          tag   = '?';
  std::uint16_t index = 0;

  std::string                  str() const;
  static std::optional<NodeId> parse(std::string_view text);

  friend bool operator==(NodeId const &, NodeId const &) = default;
};

struct NodeRecord
{
  NodeId       node;
  std::int64_t raw;
  bool         overflow;
};

struct StepTrace
{
  std::int64_t            input  = 0;
  std::int64_t            output = 0;
  std::vector<NodeRecord> nodes;

  std::optional<NodeId> first_overflow() const;
};

/// Coefficients in the realization's own domain (z or delta).
struct RealizationCoefficients
{
  std::vector<double> b;
  std::vector<double> a;
  double              delta = 0;
};

RealizationCoefficients realization_coefficients(TransferFunction const &tf,
                                                 RealizationSpec const  &spec);

std::size_t state_size(Form form, int order) noexcept;

namespace kernel {

template <class V>
using Scratch = boost::container::small_vector<V, 32>;

template <class Ops, class V>
V accumulate_direct(std::span<V const> b, std::span<V const> a, std::span<V const> x,
                    std::span<V const> y, V u, Ops &ops)
{
  std::size_t const n = a.size() - 1;
  Scratch<V>        pb(n + 1);
  Scratch<V>        pa(n + 1);
  pb[0] = ops.mul(b[0], u, NodeId{NodeOp::mul, 'b', 0});
  for (std::size_t i = 1; i <= n; ++i)
  {
    pb[i] = ops.mul(b[i], x[i - 1], NodeId{NodeOp::mul, 'b', static_cast<std::uint16_t>(i)});
  }
  for (std::size_t i = 1; i <= n; ++i)
  {
    pa[i] = ops.mul(a[i], y[i - 1], NodeId{NodeOp::mul, 'a', static_cast<std::uint16_t>(i)});
  }
  V acc = pb[0];
  for (std::size_t i = 1; i <= n; ++i)
  {
    acc = ops.add(acc, pb[i], NodeId{NodeOp::add, 'b', static_cast<std::uint16_t>(i)});
  }
  for (std::size_t i = 1; i <= n; ++i)
  {
    acc = ops.sub(acc, pa[i], NodeId{NodeOp::sub, 'a', static_cast<std::uint16_t>(i)});
  }
  return acc;
}

// e = u - sum a_i w_i, y = b0 e + sum b_i w_i.
template <class Ops, class V>
V accumulate_canonical(std::span<V const> b, std::span<V const> a, std::span<V const> w, V u,
                       V &e, Ops &ops)
{
  std::size_t const n = a.size() - 1;
  Scratch<V>        pa(n + 1);
  for (std::size_t i = 1; i <= n; ++i)
  {
    pa[i] = ops.mul(a[i], w[i - 1], NodeId{NodeOp::mul, 'a', static_cast<std::uint16_t>(i)});
  }
  e = u;
  for (std::size_t i = 1; i <= n; ++i)
  {
    e = ops.sub(e, pa[i], NodeId{NodeOp::sub, 'a', static_cast<std::uint16_t>(i)});
  }
  Scratch<V> pb(n + 1);
  pb[0] = ops.mul(b[0], e, NodeId{NodeOp::mul, 'b', 0});
  for (std::size_t i = 1; i <= n; ++i)
  {
    pb[i] = ops.mul(b[i], w[i - 1], NodeId{NodeOp::mul, 'b', static_cast<std::uint16_t>(i)});
  }
  V y = pb[0];
  for (std::size_t i = 1; i <= n; ++i)
  {
    y = ops.add(y, pb[i], NodeId{NodeOp::add, 'b', static_cast<std::uint16_t>(i)});
  }
  return y;
}

template <class V>
void shift_in(std::span<V> line, V value)
{
  for (std::size_t i = line.size(); i-- > 1;)
  {
    line[i] = line[i - 1];
  }
  if (!line.empty())
  {
    line[0] = value;
  }
}

// Chain of integrators fed by `source`; line[i] integrates line[i-1].
template <class Ops, class V>
void integrate_chain(std::span<V> line, V source, V delta, char tag, Ops &ops)
{
  for (std::size_t i = line.size(); i-- > 0;)
  {
    V const  in  = i == 0 ? source : line[i - 1];
    auto     idx = static_cast<std::uint16_t>(i + 1);
    V const  inc = ops.mul(delta, in, NodeId{NodeOp::mul, tag, idx});
    line[i]      = ops.add(line[i], inc, NodeId{NodeOp::add, tag, idx});
  }
}

template <class Ops, class V>
V transposed(std::span<V const> b, std::span<V const> a, std::span<V> s, V u,
             std::optional<V> delta, Ops &ops)
{
  std::size_t const n  = a.size() - 1;
  V const           p0 = ops.mul(b[0], u, NodeId{NodeOp::mul, 'b', 0});
  V const           y  = n > 0 ? ops.add(p0, s[0], NodeId{NodeOp::add, 's', 1}) : p0;
  for (std::size_t i = 1; i <= n; ++i)
  {
    auto const idx = static_cast<std::uint16_t>(i);
    V const    pb  = ops.mul(b[i], u, NodeId{NodeOp::mul, 'b', idx});
    V const    pa  = ops.mul(a[i], y, NodeId{NodeOp::mul, 'a', idx});
    V          v   = ops.sub(pb, pa, NodeId{NodeOp::sub, 'a', idx});
    if (i < n)
    {
      v = ops.add(v, s[i], NodeId{NodeOp::add, 's', static_cast<std::uint16_t>(i + 1)});
    }
    if (delta)
    {
      V const inc = ops.mul(*delta, v, NodeId{NodeOp::mul, 'S', idx});
      s[i - 1]    = ops.add(s[i - 1], inc, NodeId{NodeOp::add, 'S', idx});
    }
    else
    {
      s[i - 1] = v;
    }
  }
  return y;
}

/// One sample of `form`. `state` must hold state_size(form, N) values.
template <class Ops, class V>
V step(Form form, std::span<V const> b, std::span<V const> a, V delta, std::span<V> state, V u,
       Ops &ops)
{
  std::size_t const n = a.size() - 1;
  switch (form)
  {
  case Form::dfi:
  {
    auto x = state.subspan(0, n);
    auto y = state.subspan(n, n);
    V const out = accumulate_direct<Ops, V>(b, a, x, y, u, ops);
    shift_in(x, u);
    shift_in(y, out);
    return out;
  }
  case Form::dfii:
  {
    V       e;
    V const out = accumulate_canonical<Ops, V>(b, a, state, u, e, ops);
    shift_in(state, e);
    return out;
  }
  case Form::tdfii:
    return transposed<Ops, V>(b, a, state, u, std::nullopt, ops);
  case Form::ddfi:
  {
    auto x = state.subspan(0, n);
    auto y = state.subspan(n, n);
    V const out = accumulate_direct<Ops, V>(b, a, x, y, u, ops);
    integrate_chain(x, u, delta, 'X', ops);
    integrate_chain(y, out, delta, 'Y', ops);
    return out;
  }
  case Form::ddfii:
  {
    V       e;
    V const out = accumulate_canonical<Ops, V>(b, a, state, u, e, ops);
    integrate_chain(state, e, delta, 'W', ops);
    return out;
  }
  case Form::tddfii:
    return transposed<Ops, V>(b, a, state, u, delta, ops);
  }
  return V{};
}

}  // namespace kernel

/// Fixed-point arithmetic policy; reports every node to `sink(node, raw, overflow)`.
template <class Sink>
struct FixedOps
{
  using value_type = std::int64_t;

  FxFormat const &fmt;
  Sink           &sink;

  std::int64_t mul(std::int64_t c, std::int64_t x, NodeId node)
  {
    return note(node, fx::mul(c, x, fmt));
  }
  std::int64_t add(std::int64_t x, std::int64_t y, NodeId node)
  {
    return note(node, fx::add(x, y, fmt));
  }
  std::int64_t sub(std::int64_t x, std::int64_t y, NodeId node)
  {
    return note(node, fx::sub(x, y, fmt));
  }

private:
  std::int64_t note(NodeId node, fx::RawResult r)
  {
    sink(node, r.raw, r.overflow);
    return r.raw;
  }
};

struct RealOps
{
  using value_type = double;

  double mul(double c, double x, NodeId) const noexcept { return c * x; }
  double add(double x, double y, NodeId) const noexcept { return x + y; }
  double sub(double x, double y, NodeId) const noexcept { return x - y; }
};

struct NullSink
{
  void operator()(NodeId, std::int64_t, bool) const noexcept {}
};

struct FirstOverflowSink
{
  std::optional<NodeId> first;

  void operator()(NodeId node, std::int64_t, bool overflow) noexcept
  {
    if (overflow && !first)
    {
      first = node;
    }
  }
};

struct TraceSink
{
  StepTrace *trace;

  void operator()(NodeId node, std::int64_t raw, bool overflow)
  {
    trace->nodes.push_back({node, raw, overflow});
  }
};

/// Transfer function realized in a fixed-point format with quantized coefficients.
class FixedRealization
{
public:
  FixedRealization(TransferFunction const &tf, FxFormat fmt, RealizationSpec spec);

  FxFormat const        &format() const noexcept { return fmt_; }
  RealizationSpec const &spec() const noexcept { return spec_; }
  int                    order() const noexcept { return static_cast<int>(a_.size()) - 1; }
  std::size_t            state_size() const noexcept { return fxv::state_size(spec_.form, order()); }

  std::vector<std::int64_t> const &b_raw() const noexcept { return b_; }
  std::vector<std::int64_t> const &a_raw() const noexcept { return a_; }
  std::int64_t                     delta_raw() const noexcept { return delta_; }

  // True if any coefficient fell outside the representable range.
  bool coefficient_overflow() const noexcept { return coefficient_overflow_; }

  template <class Sink>
  std::int64_t step(std::span<std::int64_t> state, std::int64_t u, Sink &sink) const
  {
    FixedOps<Sink> ops{fmt_, sink};
    return kernel::step<FixedOps<Sink>, std::int64_t>(spec_.form, b_, a_, delta_, state, u, ops);
  }

  std::int64_t step_traced(std::span<std::int64_t> state, std::int64_t u, StepTrace &trace) const;

private:
  FxFormat                  fmt_;
  RealizationSpec           spec_;
  std::vector<std::int64_t> b_;
  std::vector<std::int64_t> a_;
  std::int64_t              delta_ = 0;
  bool                      coefficient_overflow_ = false;
};

/// The same structure in double precision with exact coefficients.
class ReferenceRealization
{
public:
  ReferenceRealization(TransferFunction const &tf, RealizationSpec spec);

  int         order() const noexcept { return static_cast<int>(coeffs_.a.size()) - 1; }
  std::size_t state_size() const noexcept { return fxv::state_size(spec_.form, order()); }
  RealizationCoefficients const &coefficients() const noexcept { return coeffs_; }

  double step(std::span<double> state, double u) const
  {
    RealOps ops;
    return kernel::step<RealOps, double>(spec_.form, coeffs_.b, coeffs_.a, coeffs_.delta, state,
                                         u, ops);
  }

private:
  RealizationSpec         spec_;
  RealizationCoefficients coeffs_;
};

struct StepResult
{
  std::vector<std::int64_t> state;
  FxNum                     y;
  StepTrace                 trace;
};

/// One traced fixed-point sample from `state` (not modified).
StepResult step(FixedRealization const &realization, std::span<std::int64_t const> state,
                FxNum const &u);

struct SimulationStep
{
  FxNum     y;
  StepTrace trace;
};

/// Iterated step from `init` (all zeros when empty).
std::vector<SimulationStep> simulate(TransferFunction const &tf, FxFormat const &fmt,
                                     RealizationSpec const &spec, std::span<FxNum const> inputs,
                                     std::span<std::int64_t const> init = {});

std::vector<double> simulate_reference(TransferFunction const &tf, RealizationSpec const &spec,
                                       std::span<double const> inputs,
                                       std::span<double const> init = {});

}  // namespace fxv
