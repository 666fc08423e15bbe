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

#include "bbgky/perturbation.hpp"

#include <stdexcept>
#include <vector>

#include "bbgky/quadrature.hpp"

namespace bbgky {

namespace {

void check_nodes(int nodes) {
  if (nodes < 1) throw std::invalid_argument("quadrature needs at least one node");
}

ManyBodyOperator pad_particle(const ManyBodyOperator& b, int j1) {
  const int s = b.n() + 1;
  if (j1 < 1 || j1 > s) throw std::out_of_range("split particle outside 1..s");
  std::vector<int> slots;
  for (int q = 0; q < s; ++q) {
    if (q != j1 - 1) slots.push_back(q);
  }
  return embed_slots(b, slots, s);
}

}  // namespace

ManyBodyOperator collision_term(const Dynamics& dyn, const ManyBodyOperator& f) {
  const int m = f.n() - 1;
  if (m < 1) throw std::invalid_argument("collision_term needs at least two particles");
  auto out = ManyBodyOperator::zero(m, f.d());
  for (int j = 1; j <= m; ++j) out += trace_last(dyn.interaction_generator(j, m + 1, f, Direction::VonNeumann), 1);
  return out;
}

ManyBodyOperator first_order_term(const Dynamics& dyn, double t, const ReducedState& F0, int s, int nodes) {
  check_nodes(nodes);
  auto total = ManyBodyOperator::zero(s, F0.seq.d());
  if (s + 1 > F0.seq.n_max()) return total;
  const auto rule = gauss_legendre(nodes, 0.0, t);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t1 = rule.nodes[i];
    const auto inner = collision_term(dyn, dyn.evolve(t1, F0.seq[s + 1], Direction::VonNeumann));
    total += dyn.evolve(t - t1, inner, Direction::VonNeumann) * Complex(rule.weights[i]);
  }
  return total;
}

ManyBodyOperator second_order_term(const Dynamics& dyn, double t, const ReducedState& F0, int s, int nodes) {
  check_nodes(nodes);
  auto total = ManyBodyOperator::zero(s, F0.seq.d());
  if (s + 2 > F0.seq.n_max()) return total;
  const auto outer = gauss_legendre(nodes, 0.0, t);
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    const double t1 = outer.nodes[i];
    const auto inner_rule = gauss_legendre(nodes, 0.0, t1);
    auto inner = ManyBodyOperator::zero(s + 1, F0.seq.d());
    for (std::size_t k = 0; k < inner_rule.nodes.size(); ++k) {
      const double t2 = inner_rule.nodes[k];
      const auto lowered = collision_term(dyn, dyn.evolve(t2, F0.seq[s + 2], Direction::VonNeumann));
      inner += dyn.evolve(t1 - t2, lowered, Direction::VonNeumann) * Complex(inner_rule.weights[k]);
    }
    total += dyn.evolve(t - t1, collision_term(dyn, inner), Direction::VonNeumann) * Complex(outer.weights[i]);
  }
  return total;
}

FirstOrderCheck first_order_report(const Dynamics& dyn, double t, const ReducedState& F0, int s, int nodes) {
  const auto exact = reduced_density_series(dyn, t, F0, s);
  const auto zeroth = dyn.evolve(t, F0.seq[s], Direction::VonNeumann);
  const auto first = first_order_term(dyn, t, F0, s, nodes);
  const auto second = second_order_term(dyn, t, F0, s, nodes);
  FirstOrderCheck report;
  report.nodes = nodes;
  report.zeroth_norm = frobenius_norm(zeroth);
  report.first_norm = frobenius_norm(first);
  report.second_norm = frobenius_norm(second);
  report.deviation = frobenius_norm(exact - zeroth - first);
  report.remainder_after_second = frobenius_norm(exact - zeroth - first - second);
  return report;
}

double perturbative_check_first_order(const Dynamics& dyn, double t, const ReducedState& F0, int s, int nodes) {
  return first_order_report(dyn, t, F0, s, nodes).deviation;
}

ManyBodyOperator second_reduced_cumulant(const Dynamics& dyn, double t, int j1, const ManyBodyOperator& b) {
  const auto full = dyn.evolve(t, pad_particle(b, j1), Direction::Heisenberg);
  return full - pad_particle(dyn.evolve(t, b, Direction::Heisenberg), j1);
}

ManyBodyOperator duhamel_second_reduced_cumulant(const Dynamics& dyn, double t, int j1, const ManyBodyOperator& b,
                                                 int nodes) {
  check_nodes(nodes);
  const int s = b.n() + 1;
  auto total = ManyBodyOperator::zero(s, b.d());
  const auto rule = gauss_legendre(nodes, 0.0, t);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double tau = rule.nodes[i];
    const auto padded = pad_particle(dyn.evolve(tau, b, Direction::Heisenberg), j1);
    auto kicked = ManyBodyOperator::zero(s, b.d());
    for (int j2 = 1; j2 <= s; ++j2) {
      if (j2 != j1) kicked += dyn.interaction_generator(j1, j2, padded, Direction::Heisenberg);
    }
    total += dyn.evolve(t - tau, kicked, Direction::Heisenberg) * Complex(rule.weights[i]);
  }
  return total;
}

}  // namespace bbgky
