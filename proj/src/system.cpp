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

#include "fxv/system.hpp"

#include "fxv/error.hpp"
#include "fxv/fwl.hpp"

#include <cmath>
#include <sstream>

namespace fxv {

namespace {

void check_sample_time(double ts)
{
  if (!(ts > 0) || !std::isfinite(ts))
  {
    throw DegenerateSystem("sample time must be positive");
  }
}

std::string shape(Eigen::MatrixXd const &m)
{
  std::ostringstream out;
  out << m.rows() << "x" << m.cols();
  return out.str();
}

}  // namespace

TransferFunction::TransferFunction(Polynomial num, Polynomial den, double sample_time)
  : num_(std::move(num))
  , den_(std::move(den))
  , sample_time_(sample_time)
{
  check_sample_time(sample_time);
  if (den_.is_zero())
  {
    throw DegenerateSystem("transfer function denominator is zero");
  }
  if (!num_.is_zero() && num_.degree() > den_.degree())
  {
    throw DegenerateSystem("transfer function is improper (deg num > deg den)");
  }
  double const lead = den_.leading();
  if (lead != 1.0)
  {
    num_ = num_.scaled(1.0 / lead);
    den_ = den_.scaled(1.0 / lead);
  }
}

StateSpace::StateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c, Eigen::MatrixXd d,
                       double sample_time)
  : a_(std::move(a))
  , b_(std::move(b))
  , c_(std::move(c))
  , d_(std::move(d))
  , sample_time_(sample_time)
{
  check_sample_time(sample_time);
  auto const n = a_.rows();
  if (n < 1 || a_.cols() != n)
  {
    throw DimensionMismatch("A must be square with at least one state, got " + shape(a_));
  }
  if (b_.rows() != n || b_.cols() < 1)
  {
    throw DimensionMismatch("B must have " + std::to_string(n) + " rows, got " + shape(b_));
  }
  if (c_.cols() != n || c_.rows() < 1)
  {
    throw DimensionMismatch("C must have " + std::to_string(n) + " columns, got " + shape(c_));
  }
  if (d_.rows() != c_.rows() || d_.cols() != b_.cols())
  {
    throw DimensionMismatch("D must be " + std::to_string(c_.rows()) + "x" +
                            std::to_string(b_.cols()) + ", got " + shape(d_));
  }
}

std::string_view to_string(ConnectionMode mode)
{
  return mode == ConnectionMode::series ? "series" : "feedback";
}

std::optional<ConnectionMode> parse_connection_mode(std::string_view text)
{
  if (text == "series")
  {
    return ConnectionMode::series;
  }
  if (text == "feedback")
  {
    return ConnectionMode::feedback;
  }
  return std::nullopt;
}

ClosedLoopTf::ClosedLoopTf(TransferFunction c, TransferFunction p, ConnectionMode mode)
  : controller(std::move(c))
  , plant(std::move(p))
  , cmode(mode)
{
  if (controller.sample_time() != plant.sample_time())
  {
    throw DegenerateSystem("controller and plant sample times differ");
  }
}

ClosedLoopSs::ClosedLoopSs(StateSpace p, Eigen::MatrixXd gain)
  : plant(std::move(p))
  , K(std::move(gain))
{
  if (K.rows() != plant.inputs() || K.cols() != plant.states())
  {
    throw DimensionMismatch("K must be " + std::to_string(plant.inputs()) + "x" +
                            std::to_string(plant.states()) + ", got " + shape(K));
  }
}

std::string_view system_kind(System const &system)
{
  static constexpr std::string_view kinds[] = {"tf", "ss", "cl-tf", "cl-ss"};
  return kinds[system.index()];
}

TransferFunction quantize_controller(TransferFunction const &controller, FxFormat const &fmt)
{
  return TransferFunction(fwl_poly(controller.num(), fmt), fwl_poly(controller.den(), fmt),
                          controller.sample_time());
}

namespace {

TransferFunction compose(TransferFunction const &c, TransferFunction const &p, ConnectionMode mode)
{
  Polynomial const loop_num = c.num() * p.num();
  Polynomial const chr      = c.den() * p.den() + loop_num;
  if (chr.is_zero())
  {
    throw DegenerateSystem("closed loop is degenerate: characteristic polynomial is zero");
  }
  Polynomial num = mode == ConnectionMode::series ? loop_num : p.num() * c.den();
  return TransferFunction(std::move(num), chr, p.sample_time());
}

}  // namespace

TransferFunction close_loop_tf_exact(ClosedLoopTf const &cl)
{
  return compose(cl.controller, cl.plant, cl.cmode);
}

TransferFunction close_loop_tf(ClosedLoopTf const &cl, FxFormat const &fmt)
{
  return compose(quantize_controller(cl.controller, fmt), cl.plant, cl.cmode);
}

Polynomial characteristic_polynomial(ClosedLoopTf const &cl, FxFormat const &fmt)
{
  TransferFunction const c = quantize_controller(cl.controller, fmt);
  Polynomial             chr = c.den() * cl.plant.den() + c.num() * cl.plant.num();
  if (chr.is_zero())
  {
    throw DegenerateSystem("closed loop is degenerate: characteristic polynomial is zero");
  }
  return chr;
}

StateSpace close_loop_ss(ClosedLoopSs const &cl, FxFormat const &fmt)
{
  StateSpace const &p = cl.plant;
  return StateSpace(p.A() - p.B() * fwl_matrix(cl.K, fmt), p.B(), p.C(), p.D(), p.sample_time());
}

StateSpace close_loop_ss_exact(ClosedLoopSs const &cl)
{
  StateSpace const &p = cl.plant;
  return StateSpace(p.A() - p.B() * cl.K, p.B(), p.C(), p.D(), p.sample_time());
}

StateSpace tf_to_ss(TransferFunction const &tf)
{
  std::vector<double> a = tf.den().coeffs();
  std::vector<double> b = tf.padded_num();
  if (tf.order() == 0)
  {
    // A pure gain gets one dummy unobservable state.
    a.push_back(0.0);
    b.push_back(0.0);
  }
  int const n = static_cast<int>(a.size()) - 1;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 1);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(1, n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Constant(1, 1, b[0]);
  for (int j = 0; j < n; ++j)
  {
    A(0, j) = 0.0 - a[j + 1];
    C(0, j) = b[j + 1] - a[j + 1] * b[0];
  }
  for (int i = 1; i < n; ++i)
  {
    A(i, i - 1) = 1.0;
  }
  B(0, 0) = 1.0;
  return StateSpace(std::move(A), std::move(B), std::move(C), std::move(D), tf.sample_time());
}

}  // namespace fxv
