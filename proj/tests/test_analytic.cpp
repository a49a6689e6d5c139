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

#include "roots_oracle.hpp"

#include <Eigen/LU>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fxv;

namespace {

using cd = std::complex<double>;
using oracle::dk_max_modulus;

std::vector<double> sorted_real(RootSet const &rs)
{
  std::vector<double> out;
  for (cd r : rs.roots)
  {
    CHECK(std::fabs(r.imag()) < 1e-9);
    out.push_back(r.real());
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

int oracle_rank(Eigen::MatrixXd const &m)
{
  if (m.size() == 0)
  {
    return 0;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

StateSpace make_ss(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c)
{
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(c.rows(), b.cols());
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d));
}

Polynomial const kEq1Num{1.0, -2.819, 2.637, -0.8187};
Polynomial const kEq1Den{1.0, -1.97, 1.033, -0.06068};
TransferFunction const kEq1(kEq1Num, kEq1Den, 0.001);
FxFormat const kI(2, 13, -1.0, 1.0);
FxFormat const kJ(12, 3, -1.0, 1.0);

}  // namespace

TEST_CASE("roots examples")
{
  RootSet const one = roots(Polynomial{1.0, -1.0});
  REQUIRE(one.roots.size() == 1);
  CHECK(one.roots[0].real() == doctest::Approx(1.0));
  CHECK(one.max_modulus == doctest::Approx(1.0));
  CHECK_THROWS_AS(roots(Polynomial{0.0}), DegenerateSystem);
  // Roots at zero are reported exactly.
  RootSet const z = roots(Polynomial{1.0, -0.5, 0.0, 0.0});
  CHECK(z.roots.size() == 3);
  CHECK(std::count(z.roots.begin(), z.roots.end(), cd(0.0, 0.0)) == 2);
}

TEST_CASE("pole sets of the worked example")
{
  auto const set_i = sorted_real(roots(fwl_poly(kEq1Den, kI)));
  REQUIRE(set_i.size() == 3);
  CHECK(std::round(set_i[0] * 1e4) / 1e4 == doctest::Approx(0.9629).epsilon(1e-12));
  CHECK(std::round(set_i[1] * 1e4) / 1e4 == doctest::Approx(0.9400).epsilon(1e-12));
  CHECK(std::round(set_i[2] * 1e4) / 1e4 == doctest::Approx(0.0672).epsilon(1e-12));

  auto const set_j = sorted_real(roots(fwl_poly(kEq1Den, kJ)));
  REQUIRE(set_j.size() == 3);
  CHECK(std::round(set_j[0] * 1e4) / 1e4 == doctest::Approx(1.3090).epsilon(1e-12));
  CHECK(std::round(set_j[1] * 1e4) / 1e4 == doctest::Approx(0.5000).epsilon(1e-12));
  CHECK(std::round(set_j[2] * 1e4) / 1e4 == doctest::Approx(0.1910).epsilon(1e-12));
}

TEST_CASE("stability verdicts")
{
  CHECK_FALSE(check_stability_tf(kEq1, kI).failed());
  Verdict const j = check_stability_tf(kEq1, kJ);
  REQUIRE(j.failed());
  REQUIRE(j.counterexample);
  REQUIRE(j.counterexample->witness);
  CHECK(j.counterexample->witness->subject == "den");
  CHECK(j.counterexample->witness->max_modulus == doctest::Approx(1.309017).epsilon(1e-5));
  CHECK(j.counterexample->violation.kind == "pole_on_or_outside_unit_circle");
  CHECK_FALSE(j.counterexample->violation.step);

  CHECK_FALSE(check_stability_tf(TransferFunction(Polynomial{1.0}, Polynomial{1.0, 0.0}), kI).failed());
  // A pole exactly on the unit circle counts as unstable.
  CHECK(check_stability_tf(TransferFunction(Polynomial{1.0}, Polynomial{1.0, -1.0}), FxFormat(4, 4))
          .failed());
  CHECK(check_stability_tf(TransferFunction(Polynomial{1.0}, Polynomial{1.0, 0.0, 1.0}), FxFormat(4, 4))
          .failed());
}

TEST_CASE("stability is invariant to common scaling")
{
  std::mt19937_64                        rng(12);
  std::uniform_real_distribution<double> c(-1.5, 1.5);
  FxFormat const                         fmt(4, 10);
  for (int trial = 0; trial < 100; ++trial)
  {
    std::vector<double> num(3), den(3);
    for (double &v : num)
    {
      v = c(rng);
    }
    for (double &v : den)
    {
      v = c(rng);
    }
    den[0] = 1.0;
    double const k = trial % 2 ? -4.0 : 0.25;
    TransferFunction const a{Polynomial(num), Polynomial(den)};
    TransferFunction const b(Polynomial(num).scaled(k), Polynomial(den).scaled(k));
    REQUIRE(check_stability_tf(a, fmt).status == check_stability_tf(b, fmt).status);
  }
}

TEST_CASE("exactly representable denominators keep the exact verdict")
{
  std::mt19937_64                             rng(31);
  FxFormat const                              fmt(3, 6);
  std::uniform_int_distribution<std::int64_t> raw(-160, 160);
  for (int trial = 0; trial < 200; ++trial)
  {
    std::vector<double> den = {1.0, fmt.to_real(raw(rng)), fmt.to_real(raw(rng))};
    bool const exact_stable = dk_max_modulus(den) < 1.0;
    if (std::fabs(dk_max_modulus(den) - 1.0) < 1e-9)
    {
      // On the circle: the exact test decides.
      CHECK(check_stability_tf(TransferFunction(Polynomial{1.0}, Polynomial(den)), fmt).failed() ==
            !jury_stable(Polynomial(den)));
      continue;
    }
    REQUIRE(check_stability_tf(TransferFunction(Polynomial{1.0}, Polynomial(den)), fmt).failed() ==
            !exact_stable);
  }
}

TEST_CASE("minimum phase")
{
  FxFormat const fmt(4, 8);
  CHECK_FALSE(check_minimum_phase(TransferFunction(Polynomial{1.0, 0.0}, Polynomial{1.0, 0.5}), fmt)
                .failed());
  Verdict const v =
    check_minimum_phase(TransferFunction(Polynomial{1.0, -2.0}, Polynomial{1.0, 0.5}), fmt);
  CHECK(v.failed());
  CHECK(v.counterexample->violation.kind == "zero_on_or_outside_unit_circle");
  CHECK_THROWS_AS(
    check_minimum_phase(TransferFunction(Polynomial{0.0}, Polynomial{1.0, 0.5}), fmt), Error);

  // Worked example numerator under the small format, decided by an independent root oracle.
  Polynomial const q = fwl_poly(kEq1Num, kI);
  bool const expect_fail = dk_max_modulus(q.coeffs()) >= 1.0;
  CHECK(check_minimum_phase(kEq1, kI).failed() == expect_fail);
  CHECK(check_minimum_phase(kEq1, FxFormat(4, 13)).failed());
}

TEST_CASE("root residuals")
{
  std::mt19937_64                        rng(2);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial)
  {
    std::vector<double> coeffs(2 + trial % 8);
    for (double &v : coeffs)
    {
      v = c(rng);
    }
    Polynomial const p(coeffs);
    RootSet const    rs = roots(p);
    REQUIRE(static_cast<int>(rs.roots.size()) == p.degree());
    double m = 0;
    for (cd r : rs.roots)
    {
      // Roots far outside the unit disk are judged on the reversed polynomial,
      // whose value at 1/r is p(r) / r^n.
      double const scale = std::pow(std::max(1.0, std::abs(r)), p.degree());
      INFO(p << " root " << r);
      REQUIRE(std::abs(p.evaluate(r)) / (p.norm1() * scale) <= 1e-8);
      m = std::max(m, std::abs(r));
    }
    REQUIRE(rs.max_modulus == m);
  }
}

TEST_CASE("Jury criterion agrees with root moduli")
{
  std::mt19937_64                        rng(77);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  int                                    compared = 0;
  while (compared < 500)
  {
    std::vector<double> coeffs(2 + compared % 5);
    for (double &v : coeffs)
    {
      v = c(rng);
    }
    double const m = dk_max_modulus(coeffs);
    if (std::fabs(1.0 - m) <= 1e-6)
    {
      continue;
    }
    REQUIRE(jury_stable(Polynomial(coeffs)) == (m < 1.0));
    ++compared;
  }
}

TEST_CASE("state-space stability")
{
  FxFormat const fmt(4, 8);
  auto           ss = [](Eigen::MatrixXd a) {
    int const n = static_cast<int>(a.rows());
    return make_ss(std::move(a), Eigen::MatrixXd::Ones(n, 1), Eigen::MatrixXd::Ones(1, n));
  };
  CHECK_FALSE(check_stability_ss(ss(Eigen::MatrixXd::Zero(2, 2)), fmt).failed());
  CHECK(check_stability_ss(ss(Eigen::MatrixXd::Identity(2, 2)), fmt).failed());
  CHECK(check_stability_ss(ss(Eigen::MatrixXd::Constant(1, 1, 2.0)), fmt).failed());

  // A rotation by 90 degrees has eigenvalues +-i.
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -1, 1, 0;
  CHECK(check_stability_ss(ss(rot), fmt).failed());
  CHECK_FALSE(check_stability_ss(ss(rot * 0.5), fmt).failed());

  // Feedback moves an unstable pole inside.
  StateSpace const plant = ss(Eigen::MatrixXd::Constant(1, 1, 1.5));
  CHECK_FALSE(check_stability_ss(ClosedLoopSs(plant, Eigen::MatrixXd::Constant(1, 1, 1.0)), fmt)
                .failed());
  CHECK(check_stability_ss(ClosedLoopSs(plant, Eigen::MatrixXd::Constant(1, 1, 0.25)), fmt)
          .failed());
}

TEST_CASE("controllability and observability examples")
{
  FxFormat const  fmt(4, 8);
  Eigen::MatrixXd nil(2, 2);
  nil << 0, 1, 0, 0;
  Eigen::MatrixXd b(2, 1);
  b << 0, 1;
  Eigen::MatrixXd c(1, 2);
  c << 1, 0;

  Verdict const rank0 = check_controllability(
    make_ss(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 1), c), fmt);
  REQUIRE(rank0.failed());
  CHECK(rank0.counterexample->witness->rank == 0);
  CHECK(rank0.counterexample->witness->dimension == 2);
  CHECK(rank0.counterexample->violation.kind == "rank_deficient");

  CHECK_FALSE(check_controllability(make_ss(nil, b, c), fmt).failed());
  CHECK_FALSE(check_observability(make_ss(nil, b, c), fmt).failed());
  CHECK(check_observability(make_ss(nil, b, Eigen::MatrixXd::Zero(1, 2)), fmt).failed());
  // C = [0, 1] only sees the second state, which never receives the first.
  Eigen::MatrixXd c2(1, 2);
  c2 << 0, 1;
  CHECK(check_observability(make_ss(nil, b, c2), fmt).failed());
}

TEST_CASE("controllable canonical systems are controllable")
{
  std::mt19937_64                        rng(55);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FxFormat const                         fmt(6, 20);
  for (int trial = 0; trial < 100; ++trial)
  {
    int const       n = 1 + trial % 5;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
    {
      a(0, j) = u(rng);
    }
    for (int i = 1; i < n; ++i)
    {
      a(i, i - 1) = 1.0;
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 1);
    b(0, 0)           = 1.0;
    REQUIRE_FALSE(check_controllability(make_ss(a, b, Eigen::MatrixXd::Ones(1, n)), fmt).failed());
  }
}

TEST_CASE("controllability rank matches an LU oracle on integer systems")
{
  std::mt19937_64                    rng(6);
  std::uniform_int_distribution<int> small(-1, 1);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const       n = 1 + trial % 4;
    int const       m = 1 + trial % 2;
    Eigen::MatrixXd a(n, n), b(n, m);
    for (int i = 0; i < a.size(); ++i)
    {
      a.data()[i] = small(rng);
    }
    for (int i = 0; i < b.size(); ++i)
    {
      b.data()[i] = small(rng);
    }
    Eigen::MatrixXd ctrb(n, n * m);
    Eigen::MatrixXd block = b;
    for (int k = 0; k < n; ++k)
    {
      ctrb.middleCols(k * m, m) = block;
      block                     = a * block;
    }
    REQUIRE(controllability_rank(a, b) == oracle_rank(ctrb));
  }
}

TEST_CASE("observability is the dual of controllability")
{
  std::mt19937_64                        rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution            sparse(0.4);
  FxFormat const                         fmt(3, 6);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const       n = 1 + trial % 5;
    Eigen::MatrixXd a(n, n), b(n, 1), c(1, n);
    for (int i = 0; i < a.size(); ++i)
    {
      a.data()[i] = sparse(rng) ? 0.0 : u(rng);
    }
    for (int i = 0; i < n; ++i)
    {
      b(i) = sparse(rng) ? 0.0 : u(rng);
      c(i) = sparse(rng) ? 0.0 : u(rng);
    }
    Verdict const obs = check_observability(make_ss(a, b, c), fmt);
    Verdict const dual =
      check_controllability(make_ss(a.transpose(), c.transpose(), b.transpose()), fmt);
    REQUIRE(obs.status == dual.status);
  }
}

TEST_CASE("closed-loop stability")
{
  FxFormat const         fmt(4, 8);
  TransferFunction const plant(Polynomial{1.0}, Polynomial{1.0, -0.5});
  TransferFunction const one(Polynomial{1.0}, Polynomial{1.0});
  TransferFunction const zero(Polynomial{0.0}, Polynomial{1.0});
  CHECK_FALSE(check_closed_stability(ClosedLoopTf(one, plant, ConnectionMode::series), fmt).failed());
  CHECK_FALSE(check_closed_stability(ClosedLoopTf(zero, plant, ConnectionMode::series), fmt).failed());
  TransferFunction const unstable(Polynomial{1.0}, Polynomial{1.0, -1.5});
  CHECK(check_closed_stability(ClosedLoopTf(zero, unstable, ConnectionMode::feedback), fmt).failed());

  std::mt19937_64                        rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial)
  {
    TransferFunction const c(Polynomial{u(rng), u(rng)}, Polynomial{1.0, u(rng)});
    TransferFunction const p(Polynomial{u(rng)}, Polynomial{1.0, u(rng), u(rng) * 0.5});
    ClosedLoopTf const     cl(c, p, ConnectionMode::series);
    Polynomial const       qc_num = fwl_poly(Polynomial(c.padded_num()), fmt);
    Polynomial const       qc_den = fwl_poly(c.den(), fmt);
    Polynomial const       chr    = qc_den * p.den() + qc_num * Polynomial(p.padded_num());
    double const           m      = dk_max_modulus(chr.coeffs());
    if (std::fabs(m - 1.0) < 1e-9)
    {
      continue;
    }
    REQUIRE(check_closed_stability(cl, fmt).failed() == (m >= 1.0));
  }
}
