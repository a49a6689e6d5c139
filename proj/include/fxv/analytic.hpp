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

// k-free checks: stability and minimum phase of transfer functions;
// stability, controllability and observability of state-space models.
//
// Root moduli decide the verdict, with modulus >= 1 counting as a violation.
// Where a computed modulus lies within kBoundaryBand of the unit circle the
// floating-point roots cannot be trusted, and the verdict is taken from an
// exact Jury (Schur-Cohn) reduction over the binary coefficient values.

#include "fxv/counterexample.hpp"
#include "fxv/fixed_point.hpp"
#include "fxv/polynomial.hpp"
#include "fxv/system.hpp"

#include <Eigen/Core>

#include <complex>
#include <vector>

namespace fxv {

inline constexpr double kBoundaryBand = 1e-7;

struct RootSet
{
  std::vector<std::complex<double>> roots;  // with multiplicity
  double                            max_modulus = 0;
};

/// All complex roots, via eigenvalues of the companion matrix polished with
/// Newton steps. Throws DegenerateSystem for the zero polynomial; constants
/// have no roots.
RootSet roots(Polynomial const &p);

/// Eigenvalues of a square matrix (Hessenberg QR).
RootSet eigenvalues(Eigen::MatrixXd const &m);

/// Exact test that every root lies strictly inside the unit circle, run as a
/// fraction-free Jury table on the exact binary expansion of the coefficients.
bool jury_stable(Polynomial const &p);

/// Characteristic polynomial det(zI - M), computed exactly and rounded once.
Polynomial characteristic_polynomial(Eigen::MatrixXd const &m);

/// Exact Jury test on det(zI - M).
bool jury_stable(Eigen::MatrixXd const &m);

/// Rank of [B, AB, ..., A^(n-1) B] with relative threshold n * sigma_max * 1e-10.
int controllability_rank(Eigen::MatrixXd const &a, Eigen::MatrixXd const &b);

Verdict check_stability_tf(TransferFunction const &tf, FxFormat const &fmt);
Verdict check_minimum_phase(TransferFunction const &tf, FxFormat const &fmt);
Verdict check_closed_stability(ClosedLoopTf const &cl, FxFormat const &fmt);

// Open-loop models have A, B, C quantized. Closed loops keep the plant exact
// and quantize only the feedback gain.
Verdict check_stability_ss(StateSpace const &ss, FxFormat const &fmt);
Verdict check_stability_ss(ClosedLoopSs const &cl, FxFormat const &fmt);
Verdict check_controllability(StateSpace const &ss, FxFormat const &fmt);
Verdict check_controllability(ClosedLoopSs const &cl, FxFormat const &fmt);
Verdict check_observability(StateSpace const &ss, FxFormat const &fmt);
Verdict check_observability(ClosedLoopSs const &cl, FxFormat const &fmt);

}  // namespace fxv
