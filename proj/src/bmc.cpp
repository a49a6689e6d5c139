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

#include "fxv/bmc.hpp"

#include "fxv/error.hpp"
#include "fxv/fwl.hpp"
#include "fxv/system_io.hpp"

#include <boost/container/small_vector.hpp>
#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace fxv {

namespace {

using Raw = std::int64_t;
template <class T>
using Vec = boost::container::small_vector<T, 12>;

constexpr std::size_t kMaxChannels = 8;

template <class T>
std::span<T> view(Vec<T> &v) noexcept
{
  return {v.data(), v.size()};
}

enum class HitKind : std::uint8_t
{
  none,
  overflow,
  error
};

struct Hit
{
  HitKind     kind = HitKind::none;
  NodeId      node;
  std::size_t channel = 0;

  explicit operator bool() const noexcept { return kind != HitKind::none; }
};

Violation describe(Hit const &hit, std::size_t step)
{
  Violation v;
  v.step = step;
  if (hit.kind == HitKind::overflow)
  {
    v.node = hit.node.str();
    v.kind = "overflow";
  }
  else
  {
    v.node = "output[" + std::to_string(hit.channel) + "]";
    v.kind = "quantization_error";
  }
  return v;
}

bool counts_overflow(VerificationTask const &task)
{
  return task.fmt.overflow_mode() == OverflowMode::wrap || task.count_saturation;
}

// A machine steps one candidate trajectory and reports the first property hit
// of the step. Every machine exposes State, initial(), step(), same_state().

class TfMachine
{
public:
  struct State
  {
    Vec<Raw>    x;
    Vec<double> r;
  };

  TfMachine(TransferFunction const &tf, VerificationTask const &task)
    : fmt_(task.fmt)
    , fixed_(tf, task.fmt, task.realization)
    , reference_(tf, task.realization)
    , property_(task.property)
    , eps_(task.error_bound.value_or(0.0))
    , count_overflow_(counts_overflow(task))
  {}

  std::size_t state_size() const noexcept { return fixed_.state_size(); }
  std::size_t inputs() const noexcept { return 1; }
  std::size_t outputs() const noexcept { return 1; }

  State initial(std::span<Raw const> init) const
  {
    State s;
    s.x.assign(init.begin(), init.end());
    if (property_ == Property::quantization_error)
    {
      for (Raw v : init)
      {
        s.r.push_back(fmt_.to_real(v));
      }
    }
    return s;
  }

  Hit step(State &s, std::span<Raw const> u, std::span<Raw> out) const
  {
    Hit hit;
    switch (property_)
    {
    case Property::overflow:
    {
      FirstOverflowSink sink;
      out[0] = fixed_.step(view(s.x), u[0], sink);
      if (sink.first && count_overflow_)
      {
        hit.kind = HitKind::overflow;
        hit.node = *sink.first;
      }
      break;
    }
    case Property::quantization_error:
    {
      NullSink     sink;
      out[0]          = fixed_.step(view(s.x), u[0], sink);
      double const yr = reference_.step(view(s.r), fmt_.to_real(u[0]));
      if (std::fabs(fmt_.to_real(out[0]) - yr) > eps_)
      {
        hit.kind = HitKind::error;
      }
      break;
    }
    default:
    {
      NullSink sink;
      out[0] = fixed_.step(view(s.x), u[0], sink);
      break;
    }
    }
    return hit;
  }

  static bool same_state(State const &a, State const &b) { return a.x == b.x; }
  static Vec<Raw> const &key(State const &s) { return s.x; }

private:
  FxFormat             fmt_;
  FixedRealization     fixed_;
  ReferenceRealization reference_;
  Property             property_;
  double               eps_;
  bool                 count_overflow_;
};

class SsMachine
{
public:
  struct State
  {
    Vec<Raw>    x;
    Vec<double> r;
  };

  SsMachine(StateSpace const &fixed, StateSpace const &exact, VerificationTask const &task)
    : fmt_(task.fmt)
    , exact_(exact)
    , eps_(task.error_bound.value_or(0.0))
    , n_(exact.states())
    , m_(exact.inputs())
    , p_(exact.outputs())
  {
    auto raws = [this](Eigen::MatrixXd const &mat) {
      std::vector<Raw> out;
      for (Eigen::Index i = 0; i < mat.rows(); ++i)
      {
        for (Eigen::Index j = 0; j < mat.cols(); ++j)
        {
          out.push_back(fx::quantize(mat(i, j), fmt_).raw);
        }
      }
      return out;
    };
    a_ = raws(fixed.A());
    b_ = raws(fixed.B());
    c_ = raws(fixed.C());
    d_ = raws(fixed.D());
  }

  std::size_t state_size() const noexcept { return n_; }
  std::size_t inputs() const noexcept { return m_; }
  std::size_t outputs() const noexcept { return p_; }

  State initial(std::span<Raw const> init) const
  {
    State s;
    s.x.assign(init.begin(), init.end());
    for (Raw v : init)
    {
      s.r.push_back(fmt_.to_real(v));
    }
    return s;
  }

  Hit step(State &s, std::span<Raw const> u, std::span<Raw> out) const
  {
    // Outputs from the current state, then the state update.
    for (std::size_t i = 0; i < p_; ++i)
    {
      out[i] = row(c_, d_, i, s.x, u);
    }
    Vec<Raw> next(n_);
    for (std::size_t i = 0; i < n_; ++i)
    {
      next[i] = row(a_, b_, i, s.x, u);
    }

    Hit hit;
    for (std::size_t i = 0; i < p_; ++i)
    {
      double yr = 0;
      for (std::size_t j = 0; j < n_; ++j)
      {
        yr += exact_.C()(i, j) * s.r[j];
      }
      for (std::size_t j = 0; j < m_; ++j)
      {
        yr += exact_.D()(i, j) * fmt_.to_real(u[j]);
      }
      if (!hit && std::fabs(fmt_.to_real(out[i]) - yr) > eps_)
      {
        hit.kind    = HitKind::error;
        hit.channel = i;
      }
    }
    Vec<double> rnext(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
    {
      for (std::size_t j = 0; j < n_; ++j)
      {
        rnext[i] += exact_.A()(i, j) * s.r[j];
      }
      for (std::size_t j = 0; j < m_; ++j)
      {
        rnext[i] += exact_.B()(i, j) * fmt_.to_real(u[j]);
      }
    }
    s.x = std::move(next);
    s.r = std::move(rnext);
    return hit;
  }

  static bool same_state(State const &a, State const &b) { return a.x == b.x && a.r == b.r; }
  static Vec<Raw> const &key(State const &s) { return s.x; }

private:
  Raw row(std::vector<Raw> const &left, std::vector<Raw> const &right, std::size_t i,
          Vec<Raw> const &x, std::span<Raw const> u) const
  {
    Raw acc = 0;
    for (std::size_t j = 0; j < n_; ++j)
    {
      Raw const t = fx::mul(left[i * n_ + j], x[j], fmt_).raw;
      acc         = j == 0 ? t : fx::add(acc, t, fmt_).raw;
    }
    for (std::size_t j = 0; j < m_; ++j)
    {
      Raw const t = fx::mul(right[i * m_ + j], u[j], fmt_).raw;
      acc         = fx::add(acc, t, fmt_).raw;
    }
    return acc;
  }

  FxFormat         fmt_;
  StateSpace       exact_;
  double           eps_;
  std::size_t      n_, m_, p_;
  std::vector<Raw> a_, b_, c_, d_;
};

// Controller in fixed point, plant in double precision; the plant output is
// quantized before it re-enters the fixed-point domain.
class ClosedMachine
{
public:
  struct State
  {
    Vec<Raw>    c;   // fixed controller
    Vec<double> p;   // plant in the fixed loop
    Vec<double> rc;  // reference loop controller
    Vec<double> rp;  // reference loop plant
  };

  ClosedMachine(ClosedLoopTf const &cl, VerificationTask const &task)
    : fmt_(task.fmt)
    , cmode_(cl.cmode)
    , controller_(cl.controller, task.fmt, task.realization)
    , controller_ref_(cl.controller, task.realization)
    , plant_(cl.plant, task.realization)
    , eps_(task.error_bound.value_or(0.0))
    , with_reference_(task.property == Property::closed_quantization_error)
  {
    plant_strict_      = cl.plant.padded_num().front() == 0.0;
    controller_strict_ = cl.controller.padded_num().front() == 0.0;
    if (!plant_strict_ && !controller_strict_)
    {
      throw DegenerateSystem("closed loop has an algebraic loop: controller and plant are both biproper");
    }
  }

  std::size_t state_size() const noexcept { return controller_.state_size(); }
  std::size_t inputs() const noexcept { return 1; }
  std::size_t outputs() const noexcept { return 1; }

  State initial(std::span<Raw const> init) const
  {
    State s;
    s.c.assign(init.begin(), init.end());
    s.p.assign(plant_.state_size(), 0.0);
    if (with_reference_)
    {
      for (Raw v : init)
      {
        s.rc.push_back(fmt_.to_real(v));
      }
      s.rp.assign(plant_.state_size(), 0.0);
    }
    return s;
  }

  Hit step(State &s, std::span<Raw const> u, std::span<Raw> out) const
  {
    double const y = fixed_loop(s, u[0], out[0]);
    Hit          hit;
    if (with_reference_)
    {
      double const yr = reference_loop(s, fmt_.to_real(u[0]));
      if (std::fabs(y - yr) > eps_)
      {
        hit.kind = HitKind::error;
      }
    }
    return hit;
  }

  static bool same_state(State const &a, State const &b)
  {
    return a.c == b.c && a.p == b.p && a.rc == b.rc && a.rp == b.rp;
  }
  static Vec<Raw> const &key(State const &s) { return s.c; }

private:
  Raw c_step(Vec<Raw> &state, Raw in) const
  {
    NullSink sink;
    return controller_.step(view(state), in, sink);
  }

  double p_step(Vec<double> &state, double in) const
  {
    return plant_.step(view(state), in);
  }

  Raw quantize(double y) const { return fx::quantize(y, fmt_).raw; }
  Raw sub(Raw a, Raw b) const { return fx::sub(a, b, fmt_).raw; }

  double fixed_loop(State &s, Raw r, Raw &yq) const
  {
    double y = 0;
    if (cmode_ == ConnectionMode::series)
    {
      // y = P C (r - y)
      if (plant_strict_)
      {
        Vec<double> copy = s.p;
        y                = p_step(copy, 0.0);
        yq               = quantize(y);
        Raw const v      = c_step(s.c, sub(r, yq));
        p_step(s.p, fmt_.to_real(v));
      }
      else
      {
        Vec<Raw> copy = s.c;
        Raw const v   = c_step(copy, 0);
        y             = p_step(s.p, fmt_.to_real(v));
        yq            = quantize(y);
        c_step(s.c, sub(r, yq));
      }
    }
    else
    {
      // y = P (r - C y)
      if (plant_strict_)
      {
        Vec<double> copy = s.p;
        y                = p_step(copy, 0.0);
        yq               = quantize(y);
        Raw const v      = c_step(s.c, yq);
        p_step(s.p, fmt_.to_real(sub(r, v)));
      }
      else
      {
        Vec<Raw> copy = s.c;
        Raw const v   = c_step(copy, 0);
        y             = p_step(s.p, fmt_.to_real(sub(r, v)));
        yq            = quantize(y);
        c_step(s.c, yq);
      }
    }
    return y;
  }

  double reference_loop(State &s, double r) const
  {
    auto c = [this](Vec<double> &st, double in) {
      return controller_ref_.step(view(st), in);
    };
    double y = 0;
    if (cmode_ == ConnectionMode::series)
    {
      if (plant_strict_)
      {
        Vec<double> copy = s.rp;
        y                = p_step(copy, 0.0);
        p_step(s.rp, c(s.rc, r - y));
      }
      else
      {
        Vec<double> copy = s.rc;
        y                = p_step(s.rp, c(copy, 0.0));
        c(s.rc, r - y);
      }
    }
    else
    {
      if (plant_strict_)
      {
        Vec<double> copy = s.rp;
        y                = p_step(copy, 0.0);
        p_step(s.rp, r - c(s.rc, y));
      }
      else
      {
        Vec<double> copy = s.rc;
        y                = p_step(s.rp, r - c(copy, 0.0));
        c(s.rc, y);
      }
    }
    return y;
  }

  FxFormat             fmt_;
  ConnectionMode       cmode_;
  FixedRealization     controller_;
  ReferenceRealization controller_ref_;
  ReferenceRealization plant_;
  double               eps_;
  bool                 with_reference_;
  bool                 plant_strict_      = false;
  bool                 controller_strict_ = false;
};

template <class F>
decltype(auto) with_machine(VerificationTask const &task, F &&f)
{
  switch (task.property)
  {
  case Property::overflow:
  case Property::limit_cycle:
  case Property::quantization_error:
    return f(TfMachine(std::get<TransferFunction>(task.system), task));
  case Property::ss_quantization_error:
    if (auto const *cl = std::get_if<ClosedLoopSs>(&task.system))
    {
      return f(SsMachine(close_loop_ss(*cl, task.fmt), close_loop_ss_exact(*cl), task));
    }
    return f(SsMachine(std::get<StateSpace>(task.system), std::get<StateSpace>(task.system), task));
  case Property::closed_limit_cycle:
  case Property::closed_quantization_error:
    return f(ClosedMachine(std::get<ClosedLoopTf>(task.system), task));
  default:
    throw IncompatibleProperty(std::string(to_string(task.property)) +
                               " is not a bounded property");
  }
}

bool is_cycle_property(Property p) noexcept
{
  return p == Property::limit_cycle || p == Property::closed_limit_cycle;
}

struct CycleHit
{
  std::size_t from;
  std::size_t step;
};

// Zero-input run from `init`; reports the first bit-equal state recurrence
// whose output window is not identically zero.
template <class M>
std::optional<CycleHit> detect_cycle(M const &m, std::span<Raw const> init, std::size_t k,
                                     std::uint64_t &explored, std::vector<Raw> *outputs = nullptr)
{
  std::vector<typename M::State> history;
  std::vector<bool>              nonzero;
  history.reserve(k + 1);
  history.push_back(m.initial(init));
  std::array<Raw, kMaxChannels> zero{};
  std::array<Raw, kMaxChannels> out{};
  std::size_t const             p = m.outputs();
  for (std::size_t t = 0; t < k; ++t)
  {
    typename M::State s = history.back();
    m.step(s, std::span<Raw const>(zero.data(), m.inputs()), std::span<Raw>(out.data(), p));
    ++explored;
    nonzero.push_back(std::any_of(out.begin(), out.begin() + p, [](Raw v) { return v != 0; }));
    if (outputs)
    {
      outputs->insert(outputs->end(), out.begin(), out.begin() + p);
    }
    for (std::size_t i = 0; i <= t; ++i)
    {
      if (M::same_state(history[i], s))
      {
        if (std::find(nonzero.begin() + i, nonzero.end(), true) != nonzero.end())
        {
          return CycleHit{i, t};
        }
        // Periodic with silent output from here on.
        return std::nullopt;
      }
    }
    history.push_back(std::move(s));
  }
  return std::nullopt;
}

// Runs chunk(c) for c in [0, n) and returns the result of the lowest chunk
// that produced one. Chunks are claimed in increasing order, so a chunk is
// only skipped once a lower chunk has already succeeded.
template <class R, class F>
std::optional<R> lowest_hit(std::size_t n, unsigned threads, F &&chunk)
{
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{n};
  std::mutex               lock;
  std::optional<R>         result;

  auto worker = [&] {
    for (;;)
    {
      std::size_t const c = next.fetch_add(1);
      if (c >= n || c > best.load())
      {
        return;
      }
      std::optional<R> r = chunk(c);
      if (r)
      {
        std::lock_guard<std::mutex> guard(lock);
        if (c < best.load())
        {
          best.store(c);
          result = std::move(r);
        }
        return;
      }
    }
  };

  unsigned const count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (count == 1)
  {
    worker();
    return result;
  }
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < count; ++i)
  {
    pool.emplace_back(worker);
  }
  for (auto &t : pool)
  {
    t.join();
  }
  return result;
}

struct Candidate
{
  std::vector<Raw> initial_state;
  std::vector<Raw> inputs;
};

struct VecHash
{
  std::size_t operator()(Vec<Raw> const &v) const noexcept
  {
    return boost::hash_range(v.begin(), v.end());
  }
};

class Engine
{
public:
  explicit Engine(VerificationTask const &task)
    : task_(task)
    , grid_(input_grid(task.fmt, task.engine.grid))
  {
    unsigned const hw = std::max(1u, std::thread::hardware_concurrency());
    threads_          = task.engine.threads == 0 ? hw : task.engine.threads;
  }

  template <class M>
  std::optional<Candidate> search(M const &m)
  {
    bool const random = task_.engine.mode == EngineMode::random;
    if (is_cycle_property(task_.property))
    {
      return random ? random_cycles(m) : exhaustive_cycles(m);
    }
    return random ? random_inputs(m) : exhaustive_inputs(m);
  }

  std::uint64_t explored() const noexcept { return explored_.load(); }

private:
  std::size_t symbols(std::size_t channels) const
  {
    std::size_t s = 1;
    for (std::size_t c = 0; c < channels; ++c)
    {
      s *= grid_.size();
    }
    return s;
  }

  // Symbol -> one raw per channel, channel 0 most significant.
  void decode(std::size_t symbol, std::size_t channels, Raw *out) const
  {
    for (std::size_t c = channels; c-- > 0;)
    {
      out[c] = grid_[symbol % grid_.size()];
      symbol /= grid_.size();
    }
  }

  template <class M>
  std::optional<Candidate> exhaustive_inputs(M const &m)
  {
    std::size_t const k     = task_.bound;
    std::size_t const chans = m.inputs();
    std::size_t const sym   = symbols(chans);
    bool const        dedup = task_.property == Property::overflow;
    std::vector<Raw> const zero(m.state_size(), 0);

    auto chunk = [&](std::size_t first) -> std::optional<Candidate> {
      std::vector<typename M::State>                      states(k + 1);
      std::vector<std::size_t>                            idx(k, 0);
      std::vector<Raw>                                    inputs(k * chans);
      std::vector<std::unordered_set<Vec<Raw>, VecHash>> seen(dedup ? k : 0);
      std::array<Raw, kMaxChannels>                       out{};
      std::uint64_t                                       local = 0;
      states[0] = m.initial(zero);

      std::size_t d = 0;
      idx[0]        = first;
      for (;;)
      {
        std::size_t const limit = d == 0 ? first + 1 : sym;
        if (idx[d] >= limit)
        {
          if (d == 0)
          {
            break;
          }
          --d;
          ++idx[d];
          continue;
        }
        decode(idx[d], chans, inputs.data() + d * chans);
        states[d + 1] = states[d];
        ++local;
        Hit const hit = m.step(states[d + 1],
                               std::span<Raw const>(inputs.data() + d * chans, chans),
                               std::span<Raw>(out.data(), m.outputs()));
        if (hit)
        {
          explored_ += local;
          inputs.resize((d + 1) * chans);
          return Candidate{zero, std::move(inputs)};
        }
        if (d + 1 < k && (!dedup || seen[d + 1].insert(M::key(states[d + 1])).second))
        {
          ++d;
          idx[d] = 0;
        }
        else
        {
          ++idx[d];
        }
      }
      explored_ += local;
      return std::nullopt;
    };
    return lowest_hit<Candidate>(sym, threads_, chunk);
  }

  template <class M>
  std::optional<Candidate> exhaustive_cycles(M const &m)
  {
    std::size_t const len = m.state_size();
    std::size_t const g   = grid_.size();
    std::size_t const n   = len == 0 ? 1 : g;

    auto chunk = [&](std::size_t first) -> std::optional<Candidate> {
      std::vector<std::size_t> digits(len, 0);
      std::vector<Raw>         init(len, 0);
      std::uint64_t            local = 0;
      if (len > 0)
      {
        digits[0] = first;
      }
      for (;;)
      {
        for (std::size_t i = 0; i < len; ++i)
        {
          init[i] = grid_[digits[i]];
        }
        if (auto hit = detect_cycle(m, init, task_.bound, local))
        {
          explored_ += local;
          return Candidate{init, std::vector<Raw>((hit->step + 1) * m.inputs(), 0)};
        }
        // Odometer over digits 1..len-1; digit 0 is fixed by the chunk.
        std::size_t i = len;
        while (i-- > 1)
        {
          if (++digits[i] < g)
          {
            break;
          }
          digits[i] = 0;
        }
        if (i == 0 || len <= 1)
        {
          break;
        }
      }
      explored_ += local;
      return std::nullopt;
    };
    return lowest_hit<Candidate>(n, threads_, chunk);
  }

  std::mt19937_64 sample_rng(std::uint64_t sample) const
  {
    std::seed_seq seq{static_cast<std::uint32_t>(task_.engine.seed),
                      static_cast<std::uint32_t>(task_.engine.seed >> 32),
                      static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32)};
    return std::mt19937_64(seq);
  }

  template <class Body>
  std::optional<Candidate> random_chunks(Body &&body)
  {
    constexpr std::uint64_t kChunk = 256;
    std::uint64_t const     total  = task_.engine.samples;
    std::size_t const       chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
    return lowest_hit<Candidate>(chunks, threads_, [&](std::size_t c) -> std::optional<Candidate> {
      std::uint64_t const end = std::min<std::uint64_t>(total, (c + 1) * kChunk);
      for (std::uint64_t s = c * kChunk; s < end; ++s)
      {
        if (auto r = body(s))
        {
          return r;
        }
      }
      return std::nullopt;
    });
  }

  template <class M>
  std::optional<Candidate> random_inputs(M const &m)
  {
    std::size_t const      chans = m.inputs();
    std::vector<Raw> const zero(m.state_size(), 0);
    return random_chunks([&](std::uint64_t sample) -> std::optional<Candidate> {
      std::mt19937_64                            rng = sample_rng(sample);
      std::uniform_int_distribution<std::size_t> pick(0, grid_.size() - 1);
      typename M::State                          s = m.initial(zero);
      std::vector<Raw>                           inputs;
      std::array<Raw, kMaxChannels>              out{};
      std::uint64_t                              local = 0;
      for (std::size_t t = 0; t < task_.bound; ++t)
      {
        for (std::size_t c = 0; c < chans; ++c)
        {
          inputs.push_back(grid_[pick(rng)]);
        }
        ++local;
        Hit const hit = m.step(s, std::span<Raw const>(inputs.data() + t * chans, chans),
                               std::span<Raw>(out.data(), m.outputs()));
        if (hit)
        {
          explored_ += local;
          return Candidate{zero, std::move(inputs)};
        }
      }
      explored_ += local;
      return std::nullopt;
    });
  }

  template <class M>
  std::optional<Candidate> random_cycles(M const &m)
  {
    return random_chunks([&](std::uint64_t sample) -> std::optional<Candidate> {
      std::mt19937_64                            rng = sample_rng(sample);
      std::uniform_int_distribution<std::size_t> pick(0, grid_.size() - 1);
      std::vector<Raw>                           init(m.state_size());
      for (Raw &v : init)
      {
        v = grid_[pick(rng)];
      }
      std::uint64_t local = 0;
      auto const    hit   = detect_cycle(m, init, task_.bound, local);
      explored_ += local;
      if (hit)
      {
        return Candidate{init, std::vector<Raw>((hit->step + 1) * m.inputs(), 0)};
      }
      return std::nullopt;
    });
  }

  VerificationTask const    &task_;
  std::vector<Raw>           grid_;
  unsigned                   threads_ = 1;
  std::atomic<std::uint64_t> explored_{0};
};

double grid_stride(VerificationTask const &task)
{
  return task.engine.grid.value_or(task.fmt.resolution());
}

Counterexample build_counterexample(VerificationTask const &task, Candidate const &c)
{
  Trajectory t = run_trajectory(task, c.initial_state, c.inputs);
  if (!t.violation)
  {
    throw Error("internal: search hit did not reproduce on re-simulation");
  }
  Counterexample ce;
  ce.property        = task.property;
  ce.system          = to_json(task.system);
  ce.format          = task.fmt;
  ce.realization     = task.realization;
  ce.bound           = task.bound;
  ce.error_bound     = task.error_bound;
  ce.input_channels  = task_input_channels(task);
  ce.output_channels = task_output_channels(task);
  ce.inputs          = c.inputs;
  ce.initial_states  = std::move(t.initial_state);
  ce.outputs         = std::move(t.outputs);
  ce.violation       = std::move(*t.violation);
  ce.engine.mode     = std::string(to_string(task.engine.mode));
  ce.engine.seed     = task.engine.seed;
  ce.engine.grid     = grid_stride(task);
  ce.engine.count_saturation = task.count_saturation;
  return ce;
}

Verdict verify_checked(VerificationTask const &task, Property expected)
{
  if (task.property != expected)
  {
    throw IncompatibleProperty("task property is " + std::string(to_string(task.property)) +
                               ", expected " + std::string(to_string(expected)));
  }
  return verify(task);
}

}  // namespace

std::string_view to_string(EngineMode mode)
{
  return mode == EngineMode::random ? "random" : "exhaustive";
}

std::optional<EngineMode> parse_engine_mode(std::string_view text)
{
  if (text == "exhaustive")
  {
    return EngineMode::exhaustive;
  }
  if (text == "random")
  {
    return EngineMode::random;
  }
  return std::nullopt;
}

void VerificationTask::validate() const
{
  auto require = [this](bool ok) {
    if (!ok)
    {
      throw IncompatibleProperty(std::string(to_string(property)) + " does not apply to a " +
                                 std::string(system_kind(system)) + " system");
    }
  };
  switch (property)
  {
  case Property::overflow:
  case Property::limit_cycle:
  case Property::quantization_error:
    require(std::holds_alternative<TransferFunction>(system));
    break;
  case Property::ss_quantization_error:
    require(std::holds_alternative<StateSpace>(system) ||
            std::holds_alternative<ClosedLoopSs>(system));
    break;
  case Property::closed_limit_cycle:
  case Property::closed_quantization_error:
    require(std::holds_alternative<ClosedLoopTf>(system));
    break;
  default:
    throw IncompatibleProperty(std::string(to_string(property)) + " is not a bounded property");
  }
  if (bound < 1)
  {
    throw Error("bound must be at least 1");
  }
  bool const needs_eps = property == Property::quantization_error ||
                         property == Property::ss_quantization_error ||
                         property == Property::closed_quantization_error;
  if (needs_eps && (!error_bound || !(*error_bound >= 0)))
  {
    throw Error("error bound must be given and non-negative");
  }
  if (engine.mode == EngineMode::random && engine.samples < 1)
  {
    throw Error("random mode needs at least one sample");
  }
  if (task_input_channels(*this) > kMaxChannels || task_output_channels(*this) > kMaxChannels)
  {
    throw DimensionMismatch("at most " + std::to_string(kMaxChannels) +
                            " input and output channels are supported");
  }
  realization.validate();
  input_grid(fmt, engine.grid);
}

std::vector<std::int64_t> input_grid(FxFormat const &fmt, std::optional<double> stride)
{
  std::int64_t step = 1;
  if (stride)
  {
    double const ratio = *stride / fmt.resolution();
    if (!(ratio >= 1) || ratio != std::floor(ratio) || ratio > 9.0e15)
    {
      throw Error("grid stride must be a positive multiple of the format resolution");
    }
    step = static_cast<std::int64_t>(ratio);
  }
  std::int64_t const lo = fmt.dyn_raw_min();
  std::int64_t const hi = fmt.dyn_raw_max();
  // First multiple of step at or above lo.
  std::int64_t first = lo / step * step;
  if (first < lo)
  {
    first += step;
  }
  std::vector<std::int64_t> out;
  for (std::int64_t v = first; v <= hi; v += step)
  {
    out.push_back(v);
    if (out.size() > (std::size_t{1} << 26))
    {
      throw BudgetExceeded("input grid is too large", static_cast<double>(out.size()));
    }
    if (hi - v < step)
    {
      break;
    }
  }
  if (out.empty())
  {
    throw Error("input grid is empty for the given range and stride");
  }
  return out;
}

std::size_t task_state_size(VerificationTask const &task)
{
  return with_machine(task, [](auto const &m) { return m.state_size(); });
}

std::size_t task_input_channels(VerificationTask const &task)
{
  if (auto const *ss = std::get_if<StateSpace>(&task.system))
  {
    return static_cast<std::size_t>(ss->inputs());
  }
  if (auto const *cl = std::get_if<ClosedLoopSs>(&task.system))
  {
    return static_cast<std::size_t>(cl->plant.inputs());
  }
  return 1;
}

std::size_t task_output_channels(VerificationTask const &task)
{
  if (auto const *ss = std::get_if<StateSpace>(&task.system))
  {
    return static_cast<std::size_t>(ss->outputs());
  }
  if (auto const *cl = std::get_if<ClosedLoopSs>(&task.system))
  {
    return static_cast<std::size_t>(cl->plant.outputs());
  }
  return 1;
}

double search_space(VerificationTask const &task)
{
  double const g = static_cast<double>(input_grid(task.fmt, task.engine.grid).size());
  if (is_cycle_property(task.property))
  {
    return std::pow(g, static_cast<double>(task_state_size(task)));
  }
  return std::pow(g, static_cast<double>(task_input_channels(task) * task.bound));
}

Verdict verify(VerificationTask const &task)
{
  task.validate();
  auto const start = std::chrono::steady_clock::now();

  Verdict v;
  v.property          = task.property;
  v.stats.mode        = std::string(to_string(task.engine.mode));
  v.stats.grid        = grid_stride(task);
  v.stats.space       = search_space(task);
  v.stats.sampled     = task.engine.mode == EngineMode::random;
  if (task.engine.mode == EngineMode::exhaustive && v.stats.space > task.engine.budget)
  {
    std::ostringstream msg;
    msg << std::setprecision(3) << "exhaustive search space of " << v.stats.space
        << " candidates exceeds the budget of " << task.engine.budget;
    throw BudgetExceeded(msg.str(), v.stats.space);
  }

  Engine engine(task);
  std::optional<Candidate> const hit =
    with_machine(task, [&engine](auto const &m) { return engine.search(m); });
  v.stats.states_explored = engine.explored();
  if (v.stats.sampled)
  {
    v.stats.samples = task.engine.samples;
    v.stats.note    = "bounded, sampled";
  }
  if (std::holds_alternative<TransferFunction>(task.system))
  {
    FixedRealization const r(std::get<TransferFunction>(task.system), task.fmt, task.realization);
    if (r.coefficient_overflow())
    {
      v.stats.note += v.stats.note.empty() ? "" : "; ";
      v.stats.note += "a coefficient lies outside the representable range and was reduced";
    }
  }
  if (hit)
  {
    v.status         = Status::failed;
    v.counterexample = build_counterexample(task, *hit);
  }
  v.stats.wall_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return v;
}

Verdict verify_overflow(VerificationTask const &task)
{
  return verify_checked(task, Property::overflow);
}

Verdict verify_limit_cycle(VerificationTask const &task)
{
  return verify_checked(task, Property::limit_cycle);
}

Verdict verify_error(VerificationTask const &task)
{
  return verify_checked(task, Property::quantization_error);
}

Verdict verify_ss_quantization_error(VerificationTask const &task)
{
  return verify_checked(task, Property::ss_quantization_error);
}

Verdict verify_closed_limit_cycle(VerificationTask const &task)
{
  return verify_checked(task, Property::closed_limit_cycle);
}

Verdict verify_closed_error(VerificationTask const &task)
{
  return verify_checked(task, Property::closed_quantization_error);
}

Trajectory run_trajectory(VerificationTask const &task, std::span<std::int64_t const> initial_state,
                          std::span<std::int64_t const> inputs)
{
  task.validate();
  return with_machine(task, [&](auto const &m) {
    using M = std::decay_t<decltype(m)>;
    if (initial_state.size() != m.state_size())
    {
      throw DimensionMismatch("initial state has " + std::to_string(initial_state.size()) +
                              " entries, expected " + std::to_string(m.state_size()));
    }
    std::size_t const chans = m.inputs();
    if (inputs.size() % chans != 0)
    {
      throw DimensionMismatch("input sequence is not a whole number of steps");
    }
    std::size_t const steps = std::min(inputs.size() / chans, task.bound);

    Trajectory t;
    t.initial_state.assign(initial_state.begin(), initial_state.end());
    if (is_cycle_property(task.property))
    {
      std::uint64_t explored = 0;
      if (auto hit = detect_cycle(m, initial_state, steps, explored, &t.outputs))
      {
        t.violation = Violation{hit->step, "cycle-from:" + std::to_string(hit->from), "limit_cycle"};
      }
      return t;
    }

    typename M::State             s = m.initial(initial_state);
    std::array<Raw, kMaxChannels> out{};
    for (std::size_t n = 0; n < steps; ++n)
    {
      Hit const hit = m.step(s, inputs.subspan(n * chans, chans), std::span<Raw>(out.data(), m.outputs()));
      t.outputs.insert(t.outputs.end(), out.begin(), out.begin() + m.outputs());
      if (hit)
      {
        t.violation = describe(hit, n);
        break;
      }
    }
    return t;
  });
}

}  // namespace fxv
