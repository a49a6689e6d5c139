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

// System representations: SISO transfer functions, (MIMO) state-space models
// and the two closed-loop compositions.

#include "fxv/fixed_point.hpp"
#include "fxv/polynomial.hpp"

#include <Eigen/Core>

#include <optional>
#include <string_view>
#include <variant>

namespace fxv {

/// H(z) = num(z) / den(z), proper, with den normalized to be monic.
class TransferFunction
{
public:
  TransferFunction(Polynomial num, Polynomial den, double sample_time = 1.0);

  Polynomial const &num() const noexcept { return num_; }
  Polynomial const &den() const noexcept { return den_; }
  double            sample_time() const noexcept { return sample_time_; }
  int               order() const noexcept { return den_.degree(); }

  // Numerator coefficients left-padded to order() + 1 entries.
  std::vector<double> padded_num() const { return num_.padded(den_.size()); }

  friend bool operator==(TransferFunction const &, TransferFunction const &) = default;

private:
  Polynomial num_;
  Polynomial den_;
  double     sample_time_;
};

/// x(n+1) = A x(n) + B u(n), y(n) = C x(n) + D u(n).
class StateSpace
{
public:
  StateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c, Eigen::MatrixXd d,
             double sample_time = 1.0);

  Eigen::MatrixXd const &A() const noexcept { return a_; }
  Eigen::MatrixXd const &B() const noexcept { return b_; }
  Eigen::MatrixXd const &C() const noexcept { return c_; }
  Eigen::MatrixXd const &D() const noexcept { return d_; }
  double                 sample_time() const noexcept { return sample_time_; }

  int states() const noexcept { return static_cast<int>(a_.rows()); }
  int inputs() const noexcept { return static_cast<int>(b_.cols()); }
  int outputs() const noexcept { return static_cast<int>(c_.rows()); }

  friend bool operator==(StateSpace const &x, StateSpace const &y)
  {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_ &&
           x.sample_time_ == y.sample_time_;
  }

private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  Eigen::MatrixXd c_;
  Eigen::MatrixXd d_;
  double          sample_time_;
};

// Both modes use negative unity feedback. Series puts the controller in the
// forward path, T = CP / (1 + CP); feedback puts it in the return path,
// T = P / (1 + CP).
enum class ConnectionMode : std::uint8_t
{
  series,
  feedback
};

std::string_view              to_string(ConnectionMode mode);
std::optional<ConnectionMode> parse_connection_mode(std::string_view text);

struct ClosedLoopTf
{
  ClosedLoopTf(TransferFunction controller, TransferFunction plant, ConnectionMode cmode);

  TransferFunction controller;
  TransferFunction plant;
  ConnectionMode   cmode;

  friend bool operator==(ClosedLoopTf const &, ClosedLoopTf const &) = default;
};

/// Plant under state feedback u = r - K x.
struct ClosedLoopSs
{
  ClosedLoopSs(StateSpace plant, Eigen::MatrixXd gain);

  StateSpace      plant;
  Eigen::MatrixXd K;

  friend bool operator==(ClosedLoopSs const &x, ClosedLoopSs const &y)
  {
    return x.plant == y.plant && x.K == y.K;
  }
};

using System = std::variant<TransferFunction, StateSpace, ClosedLoopTf, ClosedLoopSs>;

std::string_view system_kind(System const &system);

/// Controller with numerator and denominator passed through fwl_poly.
TransferFunction quantize_controller(TransferFunction const &controller, FxFormat const &fmt);

/// Closed loop in exact arithmetic. Throws DegenerateSystem when the
/// characteristic polynomial vanishes or the loop is improper.
TransferFunction close_loop_tf_exact(ClosedLoopTf const &cl);

/// Closed loop with the controller quantized and the plant kept exact.
TransferFunction close_loop_tf(ClosedLoopTf const &cl, FxFormat const &fmt);

/// num_C * num_P + den_C * den_P, controller quantized.
Polynomial characteristic_polynomial(ClosedLoopTf const &cl, FxFormat const &fmt);

/// A - B K_q with K_q the element-wise quantized gain.
StateSpace close_loop_ss(ClosedLoopSs const &cl, FxFormat const &fmt);
StateSpace close_loop_ss_exact(ClosedLoopSs const &cl);

/// Controllable canonical realization of a proper transfer function.
StateSpace tf_to_ss(TransferFunction const &tf);

}  // namespace fxv
