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

#include "fxv/analytic.hpp"

#include "fxv/error.hpp"
#include "fxv/fwl.hpp"
#include "fxv/system_io.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cmath>

namespace fxv {

namespace mp = boost::multiprecision;
using BigInt   = mp::cpp_int;
using Rational = mp::cpp_rational;

namespace {

// Above these sizes the exact integer tables grow too large to be useful.
constexpr int kExactDegreeLimit = 16;

Rational exact(double x)
{
  if (x == 0.0)
  {
    return Rational(0);
  }
  int          exponent = 0;
  double const mantissa = std::frexp(x, &exponent);
  BigInt const scaled(static_cast<long long>(std::ldexp(mantissa, 53)));
  exponent -= 53;
  if (exponent >= 0)
  {
    return Rational(BigInt(scaled << exponent));
  }
  return Rational(scaled, BigInt(1) << -exponent);
}

std::vector<BigInt> clear_denominators(std::vector<Rational> const &coeffs)
{
  BigInt common = 1;
  for (auto const &c : coeffs)
  {
    BigInt const den = mp::denominator(c);
    common           = common / mp::gcd(common, den) * den;
  }
  std::vector<BigInt> out;
  out.reserve(coeffs.size());
  for (auto const &c : coeffs)
  {
    out.push_back(mp::numerator(c) * (common / mp::denominator(c)));
  }
  return out;
}

// Fraction-free Jury table. Each row (p_n p - p_0 p*) / z keeps the number of
// roots inside the unit circle, so strict stability needs |p_0| < |p_n| on
// every row down to a constant.
bool jury_integer(std::vector<BigInt> c)
{
  while (c.size() > 1 && c.front() == 0)
  {
    c.erase(c.begin());
  }
  if (c.size() == 1)
  {
    return c.front() != 0;
  }
  while (c.size() > 1)
  {
    BigInt const lead = c.front();
    BigInt const last = c.back();
    if (mp::abs(last) >= mp::abs(lead))
    {
      return false;
    }
    std::size_t const   n = c.size() - 1;
    std::vector<BigInt> next(n);
    BigInt              content = 0;
    for (std::size_t k = 0; k < n; ++k)
    {
      next[k] = lead * c[k] - last * c[n - k];
      content = mp::gcd(content, next[k]);
    }
    if (content > 1)
    {
      for (auto &v : next)
      {
        v /= content;
      }
    }
    c = std::move(next);
  }
  return true;
}

std::vector<Rational> exact_characteristic(Eigen::MatrixXd const &m)
{
  auto const                         n = static_cast<std::size_t>(m.rows());
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = 0; j < n; ++j)
    {
      a[i][j] = exact(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k.
  std::vector<Rational>              coeffs{Rational(1)};
  std::vector<std::vector<Rational>> mk(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t k = 1; k <= n; ++k)
  {
    std::vector<std::vector<Rational>> next(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
    {
      for (std::size_t j = 0; j < n; ++j)
      {
        Rational sum = 0;
        for (std::size_t l = 0; l < n; ++l)
        {
          if (a[i][l] != 0 && mk[l][j] != 0)
          {
            sum += a[i][l] * mk[l][j];
          }
        }
        next[i][j] = sum;
      }
      next[i][i] += coeffs.back();
    }
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
      for (std::size_t l = 0; l < n; ++l)
      {
        trace += a[i][l] * next[l][i];
      }
    }
    coeffs.push_back(-trace / Rational(static_cast<long long>(k)));
    mk = std::move(next);
  }
  return coeffs;
}

void polish(std::vector<double> const &c, std::complex<double> &root)
{
  using C = std::complex<long double>;
  auto residual = [&c](C z, C *deriv) {
    C value = 0;
    C slope = 0;
    for (double coeff : c)
    {
      slope = slope * z + value;
      value = value * z + static_cast<long double>(coeff);
    }
    if (deriv)
    {
      *deriv = slope;
    }
    return value;
  };
  C z(root.real(), root.imag());
  C deriv;
  C value = residual(z, &deriv);
  for (int iter = 0; iter < 4 && std::abs(value) > 0 && std::abs(deriv) > 0; ++iter)
  {
    C const candidate = z - value / deriv;
    C       cand_deriv;
    C const cand_value = residual(candidate, &cand_deriv);
    if (!(std::abs(cand_value) < std::abs(value)))
    {
      break;
    }
    z     = candidate;
    value = cand_value;
    deriv = cand_deriv;
  }
  root = {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

double max_modulus(std::vector<std::complex<double>> const &values)
{
  double out = 0;
  for (auto const &v : values)
  {
    out = std::max(out, std::abs(v));
  }
  return out;
}

// Verdict on "some root has modulus >= 1", falling back to the exact table
// when the floating-point modulus is too close to call.
bool outside_or_on_circle(RootSet const &rs, int degree, auto exact_stable)
{
  bool const by_roots = rs.max_modulus >= 1.0;
  if (degree < 1 || degree > kExactDegreeLimit)
  {
    return by_roots;
  }
  if (std::abs(rs.max_modulus - 1.0) <= kBoundaryBand)
  {
    return !exact_stable();
  }
#ifndef NDEBUG
  assert(by_roots == !exact_stable());
#endif
  return by_roots;
}

Counterexample analytic_counterexample(Property property, System const &system, FxFormat const &fmt,
                                       AnalyticWitness witness, std::string kind)
{
  Counterexample ce;
  ce.property       = property;
  ce.system         = to_json(system);
  ce.format         = fmt;
  ce.violation.node = witness.subject;
  ce.violation.kind = std::move(kind);
  ce.witness        = std::move(witness);
  return ce;
}

Verdict root_verdict(Property property, System const &system, FxFormat const &fmt,
                     Polynomial const &poly, std::string subject, std::string kind)
{
  if (poly.is_zero())
  {
    throw DegenerateSystem("the " + subject + " polynomial is zero after quantization");
  }
  RootSet const rs = roots(poly);
  Verdict       v;
  v.property = property;
  if (outside_or_on_circle(rs, poly.degree(), [&poly] { return jury_stable(poly); }))
  {
    v.status = Status::failed;
    v.counterexample =
      analytic_counterexample(property, system, fmt,
                              AnalyticWitness{std::move(subject), poly.coeffs(), rs.roots,
                                              rs.max_modulus, -1, -1},
                              std::move(kind));
  }
  return v;
}

Verdict matrix_stability(Property property, System const &system, FxFormat const &fmt,
                         Eigen::MatrixXd const &a)
{
  RootSet const rs = eigenvalues(a);
  auto const    n  = static_cast<int>(a.rows());
  Verdict       v;
  v.property = property;
  if (outside_or_on_circle(rs, n, [&a] { return jury_stable(a); }))
  {
    AnalyticWitness w{"A", {}, rs.roots, rs.max_modulus, -1, -1};
    if (n <= kExactDegreeLimit)
    {
      w.polynomial = characteristic_polynomial(a).coeffs();
    }
    v.status         = Status::failed;
    v.counterexample = analytic_counterexample(property, system, fmt, std::move(w),
                                               "pole_on_or_outside_unit_circle");
  }
  return v;
}

Verdict rank_verdict(Property property, System const &system, FxFormat const &fmt,
                     Eigen::MatrixXd const &a, Eigen::MatrixXd const &b, std::string subject)
{
  int const rank = controllability_rank(a, b);
  auto const n   = static_cast<int>(a.rows());
  Verdict    v;
  v.property = property;
  if (rank < n)
  {
    v.status         = Status::failed;
    v.counterexample = analytic_counterexample(
      property, system, fmt, AnalyticWitness{std::move(subject), {}, {}, 0.0, rank, n},
      "rank_deficient");
  }
  return v;
}

}  // namespace

RootSet roots(Polynomial const &p)
{
  if (p.is_zero())
  {
    throw DegenerateSystem("the zero polynomial has no finite root set");
  }
  std::vector<double> c = p.coeffs();
  RootSet             out;
  while (c.size() > 1 && c.back() == 0.0)
  {
    c.pop_back();
    out.roots.emplace_back(0.0, 0.0);
  }
  auto const n = static_cast<Eigen::Index>(c.size()) - 1;
  if (n == 1)
  {
    out.roots.emplace_back(-c[1] / c[0], 0.0);
  }
  else if (n > 1)
  {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
      companion(0, j) = -c[static_cast<std::size_t>(j) + 1] / c[0];
    }
    for (Eigen::Index i = 1; i < n; ++i)
    {
      companion(i, i - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
    {
      throw Error("companion eigenvalue iteration did not converge");
    }
    for (Eigen::Index i = 0; i < n; ++i)
    {
      std::complex<double> r = solver.eigenvalues()(i);
      polish(c, r);
      out.roots.push_back(r);
    }
  }
  out.max_modulus = max_modulus(out.roots);
  return out;
}

RootSet eigenvalues(Eigen::MatrixXd const &m)
{
  if (m.rows() != m.cols() || m.rows() == 0)
  {
    throw DimensionMismatch("eigenvalues need a non-empty square matrix");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success)
  {
    throw Error("eigenvalue iteration did not converge");
  }
  RootSet out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
  {
    out.roots.push_back(solver.eigenvalues()(i));
  }
  out.max_modulus = max_modulus(out.roots);
  return out;
}

bool jury_stable(Polynomial const &p)
{
  std::vector<Rational> coeffs;
  for (double c : p.coeffs())
  {
    coeffs.push_back(exact(c));
  }
  return jury_integer(clear_denominators(coeffs));
}

Polynomial characteristic_polynomial(Eigen::MatrixXd const &m)
{
  std::vector<double> out;
  for (auto const &c : exact_characteristic(m))
  {
    out.push_back(c.convert_to<double>());
  }
  return Polynomial(std::move(out));
}

bool jury_stable(Eigen::MatrixXd const &m)
{
  return jury_integer(clear_denominators(exact_characteristic(m)));
}

int controllability_rank(Eigen::MatrixXd const &a, Eigen::MatrixXd const &b)
{
  auto const n = a.rows();
  auto const m = b.cols();
  if (a.cols() != n || b.rows() != n)
  {
    throw DimensionMismatch("controllability needs A n x n and B n x m");
  }
  Eigen::MatrixXd krylov(n, n * m);
  Eigen::MatrixXd block = b;
  for (Eigen::Index k = 0; k < n; ++k)
  {
    krylov.middleCols(k * m, m) = block;
    block                       = a * block;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(krylov);
  auto const                        sigma = svd.singularValues();
  double const                      top   = sigma.size() ? sigma(0) : 0.0;
  if (!(top > 0))
  {
    return 0;
  }
  double const threshold = static_cast<double>(n) * top * 1e-10;
  int          rank      = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
  {
    rank += sigma(i) > threshold ? 1 : 0;
  }
  return rank;
}

Verdict check_stability_tf(TransferFunction const &tf, FxFormat const &fmt)
{
  return root_verdict(Property::stability, tf, fmt, fwl_poly(tf.den(), fmt), "den",
                      "pole_on_or_outside_unit_circle");
}

Verdict check_minimum_phase(TransferFunction const &tf, FxFormat const &fmt)
{
  if (tf.num().is_zero())
  {
    throw DegenerateSystem("minimum phase is undefined for a zero numerator");
  }
  return root_verdict(Property::minimum_phase, tf, fmt, fwl_poly(tf.num(), fmt), "num",
                      "zero_on_or_outside_unit_circle");
}

Verdict check_closed_stability(ClosedLoopTf const &cl, FxFormat const &fmt)
{
  return root_verdict(Property::closed_stability, cl, fmt, characteristic_polynomial(cl, fmt),
                      "characteristic", "pole_on_or_outside_unit_circle");
}

Verdict check_stability_ss(StateSpace const &ss, FxFormat const &fmt)
{
  return matrix_stability(Property::ss_stability, ss, fmt, fwl_matrix(ss.A(), fmt));
}

Verdict check_stability_ss(ClosedLoopSs const &cl, FxFormat const &fmt)
{
  return matrix_stability(Property::ss_stability, cl, fmt, close_loop_ss(cl, fmt).A());
}

Verdict check_controllability(StateSpace const &ss, FxFormat const &fmt)
{
  return rank_verdict(Property::ss_controllability, ss, fmt, fwl_matrix(ss.A(), fmt),
                      fwl_matrix(ss.B(), fmt), "ctrb");
}

Verdict check_controllability(ClosedLoopSs const &cl, FxFormat const &fmt)
{
  StateSpace const closed = close_loop_ss(cl, fmt);
  return rank_verdict(Property::ss_controllability, cl, fmt, closed.A(), closed.B(), "ctrb");
}

Verdict check_observability(StateSpace const &ss, FxFormat const &fmt)
{
  // Observability of (A, C) is controllability of (A^T, C^T).
  return rank_verdict(Property::ss_observability, ss, fmt, fwl_matrix(ss.A(), fmt).transpose(),
                      fwl_matrix(ss.C(), fmt).transpose(), "obsv");
}

Verdict check_observability(ClosedLoopSs const &cl, FxFormat const &fmt)
{
  StateSpace const closed = close_loop_ss(cl, fmt);
  return rank_verdict(Property::ss_observability, cl, fmt, closed.A().transpose(),
                      closed.C().transpose(), "obsv");
}

}  // namespace fxv
