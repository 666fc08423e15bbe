// Copyright 2026 The bbgky Authors
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

#include <functional>

#include "bbgky/cumulants.hpp"
#include "bbgky/dynamics.hpp"
#include "bbgky/tensorspace.hpp"

namespace bbgky {

enum class Provenance { Initial, Series, Direct };

/// Reduced density operators F = (F_0, F_1, ...). The normalizer (I, D(0))
/// of the state it was built from travels with it.
struct ReducedState {
  OperatorSequence seq;
  Provenance provenance = Provenance::Initial;
  double t = 0.0;
  Complex normalizer{1.0, 0.0};
};

/// Reduced observables B = (B_0, B_1, ...).
struct ReducedObservables {
  OperatorSequence seq;
  Provenance provenance = Provenance::Initial;
  double t = 0.0;
};

// --- Creation / annihilation analogs ---------------------------------------

/// (a+ b)_n = sum_j b_{n-1}((1..n) \ j) (x) 1_(j); sector 0 maps to 0 and the
/// result keeps the input truncation.
OperatorSequence creation(const OperatorSequence& b);
/// (a f)_n = Tr_{n+1} f_{n+1}; the top sector maps to 0.
OperatorSequence annihilation(const OperatorSequence& f);

/// sum_k (sign a+)^k / k! b, exact on truncated sequences.
OperatorSequence exp_creation(const OperatorSequence& b, double sign);
/// sum_k (sign a)^k / k! f, exact on truncated sequences.
OperatorSequence exp_annihilation(const OperatorSequence& f, double sign);

/// Sector-wise group evolution G(t) or G*(t).
OperatorSequence evolve_sequence(const Dynamics& dyn, double t, const OperatorSequence& seq, Direction dir);

// --- Initial data -----------------------------------------------------------

/// F(0) = (I, D0)^{-1} e^{a} D0. D0 must be Hermitian, positive and
/// permutation symmetric; throws DegenerateStateError when (I, D0) = 0.
ReducedState initial_reduced_density(const OperatorSequence& D0);

/// B(0) = e^{-a+} A0.
ReducedObservables initial_reduced_observables(const OperatorSequence& A0);

// --- State side ---------------------------------------------------------------

/// F_s(t) = sum_n 1/n! Tr_{s+1..s+n} A*_{1+n}(t, {1..s}, s+1..s+n) F_{s+n}(0).
ManyBodyOperator reduced_density_series(const Dynamics& dyn, double t, const ReducedState& F0, int s);

/// F_s(t) = (I, D0)^{-1} sum_n 1/n! Tr_{s+1..s+n} (G*(t) D0)_{s+n}.
ManyBodyOperator reduced_density_direct(const Dynamics& dyn, double t, const OperatorSequence& D0, int s);

/// F_s(t) = sum_n 1/n! Tr_{s+1..s+n} U*_{1+n}(t, {1..s}, s+1..s+n) F_{s+n}(0).
ManyBodyOperator reduced_density_reduced_cumulants(const Dynamics& dyn, double t, const ReducedState& F0, int s);

/// e^{a} G*(t) e^{-a} F(0) as a whole sequence.
OperatorSequence group_representation_density(const Dynamics& dyn, double t, const ReducedState& F0);

/// All sectors of F(t) from the cumulant series; sector 0 is conserved.
ReducedState reduced_density_sequence(const Dynamics& dyn, double t, const ReducedState& F0);

// --- Observable side ----------------------------------------------------------

/// B_s(t) = sum_n 1/n! sum_{j_1 != ... != j_n}
///          A_{1+n}(t, {(1..s) \ J}, J) B_{s-n}(0, (1..s) \ J) (x) 1_J.
ManyBodyOperator reduced_observable_series(const Dynamics& dyn, double t, const ReducedObservables& B0, int s);

/// B_s(t) = sum_n (-1)^n / n! sum_{j_1 != ... != j_n} (G(t) A0)_{s-n}((1..s) \ J) (x) 1_J.
ManyBodyOperator reduced_observable_direct(const Dynamics& dyn, double t, const OperatorSequence& A0, int s);

ReducedObservables reduced_observable_sequence(const Dynamics& dyn, double t, const ReducedObservables& B0);

/// B^(1)_s(t) = A_s(t, 1..s) sum_j b_1(j) for the additive initial datum (0, b1, 0, ...).
ManyBodyOperator additive_observable_series(const Dynamics& dyn, double t, const ManyBodyOperator& b1, int s);

/// k-ary initial datum (0, ..., b_k, 0, ...): zero for s < k, otherwise
/// 1/(s-k)! sum_J A_{1+s-k}(t, {(1..s) \ J}, J) b_k((1..s) \ J) (x) 1_J.
ManyBodyOperator kary_observable_series(const Dynamics& dyn, double t, const ManyBodyOperator& bk, int s);

// --- Hierarchies ----------------------------------------------------------------

using SectorProvider = std::function<ManyBodyOperator(int)>;

/// (N* F)_s + sum_{j<=s} Tr_{s+1} N*_int(j, s+1) F_{s+1}. Sectors above the
/// provider's range are zero.
ManyBodyOperator bbgky_rhs(const Dynamics& dyn, const SectorProvider& F, int s, int n_max);

/// (N B)_s + sum_{j1 != j2} N_int(j1, j2) B_{s-1}((1..s) \ j1) (x) 1_(j1).
ManyBodyOperator dual_rhs(const Dynamics& dyn, const SectorProvider& B, int s);

enum class HierarchyKind { Bbgky, Dual };

/// || (X_s(t+h) - X_s(t-h)) / 2h - rhs(t, s) ||_F with X the series solution
/// started from `initial` (F(0) for Bbgky, B(0) for Dual).
double hierarchy_residual(const Dynamics& dyn, HierarchyKind kind, const OperatorSequence& initial, double t,
                          int s, double h);

/// max(|<A(t)> - (B(t), F(0))|, |(B(t), F(0)) - (B(0), F(t))|).
double duality_gap(const Dynamics& dyn, double t, const OperatorSequence& A0, const OperatorSequence& D0);

}  // namespace bbgky
