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

#include "bbgky/dynamics.hpp"
#include "bbgky/hierarchy.hpp"

namespace bbgky {

/// Iteration (Duhamel) series for the reduced densities, truncated after the
/// first and second order and compared with the nonperturbative series.
struct FirstOrderCheck {
  double deviation = 0.0;               // ||F_s(t) - (order 0 + order 1)||_F
  double zeroth_norm = 0.0;             // ||G*_s(t) F_s(0)||_F
  double first_norm = 0.0;              // ||order 1||_F
  double second_norm = 0.0;             // ||order 2||_F
  double remainder_after_second = 0.0;  // ||F_s(t) - (orders 0..2)||_F
  int nodes = 0;
};

/// C_m(f) = sum_{j <= m} Tr_{m+1} N*_int(j, m+1) f, the sector-lowering
/// interaction term of the hierarchy.
ManyBodyOperator collision_term(const Dynamics& dyn, const ManyBodyOperator& f);

/// int_0^t G*_s(t - t1) C_s(G*_{s+1}(t1) F_{s+1}(0)) dt1 with `nodes`
/// Gauss-Legendre points.
ManyBodyOperator first_order_term(const Dynamics& dyn, double t, const ReducedState& F0, int s, int nodes);

/// The nested second-order term, zero when s + 2 exceeds the truncation.
ManyBodyOperator second_order_term(const Dynamics& dyn, double t, const ReducedState& F0, int s, int nodes);

FirstOrderCheck first_order_report(const Dynamics& dyn, double t, const ReducedState& F0, int s, int nodes = 16);

/// Deviation of the first-order iteration from the nonperturbative F_s(t).
double perturbative_check_first_order(const Dynamics& dyn, double t, const ReducedState& F0, int s,
                                      int nodes = 16);

/// Exact reduced cumulant of second order on (1..s) with particle j1 split off:
///   G_s(t)(b (x) 1_(j1)) - (G_{s-1}(t) b) (x) 1_(j1),
/// with b acting on (1..s) \ j1 in increasing order.
ManyBodyOperator second_reduced_cumulant(const Dynamics& dyn, double t, int j1, const ManyBodyOperator& b);

/// Duhamel form of the same operator:
///   int_0^t G_s(t - tau) sum_{j2 != j1} N_int(j1, j2) [(G_{s-1}(tau) b) (x) 1_(j1)] dtau.
ManyBodyOperator duhamel_second_reduced_cumulant(const Dynamics& dyn, double t, int j1, const ManyBodyOperator& b,
                                                 int nodes = 16);

}  // namespace bbgky
