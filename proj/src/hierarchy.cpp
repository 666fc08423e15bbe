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

#include "bbgky/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bbgky/partitions.hpp"

namespace bbgky {

namespace {

std::vector<int> iota_labels(int first, int count) {
  std::vector<int> v(static_cast<std::size_t>(std::max(count, 0)));
  std::iota(v.begin(), v.end(), first);
  return v;
}

std::vector<int> complement(const std::vector<int>& subset, int s) {
  std::vector<int> out;
  for (int j = 1; j <= s; ++j) {
    if (std::find(subset.begin(), subset.end(), j) == subset.end()) out.push_back(j);
  }
  return out;
}

void check_sector(int s, int n_max, const char* what) {
  if (s < 1 || s > n_max) {
    throw std::out_of_range(std::string(what) + ": s = " + std::to_string(s) + " outside 1.." + std::to_string(n_max));
  }
}

void require_state(const OperatorSequence& D0) {
  for (int n = 0; n <= D0.n_max(); ++n) {
    const auto& Dn = D0[n];
    if (!is_hermitian(Dn)) throw std::invalid_argument("initial state sector " + std::to_string(n) + " is not Hermitian");
    const Matrix herm = 0.5 * (Dn.mat() + Dn.mat().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    const double floor = -1e-10 * std::max(1.0, herm.norm());
    if (solver.eigenvalues().minCoeff() < floor) {
      throw std::invalid_argument("initial state sector " + std::to_string(n) + " is not positive");
    }
  }
  require_symmetric(D0);
}

}  // namespace

// ---------------------------------------------------------------------------

OperatorSequence creation(const OperatorSequence& b) {
  std::vector<ManyBodyOperator> items{ManyBodyOperator::zero(0, b.d())};
  for (int n = 1; n <= b.n_max(); ++n) {
    auto out = ManyBodyOperator::zero(n, b.d());
    for (int j = 0; j < n; ++j) {
      std::vector<int> slots;
      for (int q = 0; q < n; ++q) {
        if (q != j) slots.push_back(q);
      }
      out += embed_slots(b[n - 1], slots, n);
    }
    items.push_back(std::move(out));
  }
  return {b.d(), std::move(items)};
}

OperatorSequence annihilation(const OperatorSequence& f) {
  std::vector<ManyBodyOperator> items;
  for (int n = 0; n < f.n_max(); ++n) items.push_back(trace_last(f[n + 1], 1));
  items.push_back(ManyBodyOperator::zero(f.n_max(), f.d()));
  return {f.d(), std::move(items)};
}

OperatorSequence exp_creation(const OperatorSequence& b, double sign) {
  OperatorSequence total = b;
  OperatorSequence term = b;
  // Terminates after n_max terms on truncated sequences.
  for (int k = 1; k <= b.n_max(); ++k) {
    term = Complex(sign / k) * creation(term);
    total += term;
  }
  return total;
}

OperatorSequence exp_annihilation(const OperatorSequence& f, double sign) {
  OperatorSequence total = f;
  OperatorSequence term = f;
  for (int k = 1; k <= f.n_max(); ++k) {
    term = Complex(sign / k) * annihilation(term);
    total += term;
  }
  return total;
}

OperatorSequence evolve_sequence(const Dynamics& dyn, double t, const OperatorSequence& seq, Direction dir) {
  std::vector<ManyBodyOperator> items;
  for (const auto& item : seq.items()) items.push_back(dyn.evolve(t, item, dir));
  return {seq.d(), std::move(items)};
}

// ---------------------------------------------------------------------------

ReducedState initial_reduced_density(const OperatorSequence& D0) {
  require_state(D0);
  const Complex norm = checked_normalizer(D0);
  ReducedState F;
  F.seq = Complex(1.0) / norm * exp_annihilation(D0, 1.0);
  F.provenance = Provenance::Initial;
  F.normalizer = norm;
  return F;
}

ReducedObservables initial_reduced_observables(const OperatorSequence& A0) {
  return {exp_creation(A0, -1.0), Provenance::Initial, 0.0};
}

// ---------------------------------------------------------------------------

ManyBodyOperator reduced_density_series(const Dynamics& dyn, double t, const ReducedState& F0, int s) {
  const int n_max = F0.seq.n_max();
  check_sector(s, n_max, "reduced_density_series");
  const auto cluster = iota_labels(1, s);
  auto total = ManyBodyOperator::zero(s, F0.seq.d());
  for (int n = 0; s + n <= n_max; ++n) {
    const CumulantSpec spec{t, ClusterArgs::clustered(cluster, iota_labels(s + 1, n)), Direction::VonNeumann};
    total += trace_last(cumulant(dyn, spec, F0.seq[s + n]), n) * Complex(1.0 / factorial(n));
  }
  return total;
}

ManyBodyOperator reduced_density_direct(const Dynamics& dyn, double t, const OperatorSequence& D0, int s) {
  const int n_max = D0.n_max();
  check_sector(s, n_max, "reduced_density_direct");
  const Complex norm = checked_normalizer(D0);
  const auto Dt = evolve_sequence(dyn, t, D0, Direction::VonNeumann);
  const Complex norm_t = normalizer(Dt);
  if (std::abs(norm_t - norm) > 1e-10 * std::abs(norm)) {
    throw std::logic_error("normalizer (I, D(t)) drifted from (I, D(0))");
  }
  auto total = ManyBodyOperator::zero(s, D0.d());
  for (int n = 0; s + n <= n_max; ++n) total += trace_last(Dt[s + n], n) * Complex(1.0 / factorial(n));
  return total * (Complex(1.0) / norm);
}

ManyBodyOperator reduced_density_reduced_cumulants(const Dynamics& dyn, double t, const ReducedState& F0, int s) {
  const int n_max = F0.seq.n_max();
  check_sector(s, n_max, "reduced_density_reduced_cumulants");
  auto total = ManyBodyOperator::zero(s, F0.seq.d());
  for (int n = 0; s + n <= n_max; ++n) {
    const auto term = reduced_cumulant(dyn, t, s, n, Direction::VonNeumann, F0.seq[s + n]);
    total += trace_last(term, n) * Complex(1.0 / factorial(n));
  }
  return total;
}

OperatorSequence group_representation_density(const Dynamics& dyn, double t, const ReducedState& F0) {
  const auto unreduced = exp_annihilation(F0.seq, -1.0);
  return exp_annihilation(evolve_sequence(dyn, t, unreduced, Direction::VonNeumann), 1.0);
}

ReducedState reduced_density_sequence(const Dynamics& dyn, double t, const ReducedState& F0) {
  std::vector<ManyBodyOperator> items{F0.seq[0]};
  for (int s = 1; s <= F0.seq.n_max(); ++s) items.push_back(reduced_density_series(dyn, t, F0, s));
  return {OperatorSequence(F0.seq.d(), std::move(items)), Provenance::Series, t, F0.normalizer};
}

// ---------------------------------------------------------------------------

ManyBodyOperator reduced_observable_series(const Dynamics& dyn, double t, const ReducedObservables& B0, int s) {
  check_sector(s, B0.seq.n_max(), "reduced_observable_series");
  const auto ambient = iota_labels(1, s);
  auto total = ManyBodyOperator::zero(s, B0.seq.d());
  // One term per subset J of bare particles.
  for (const auto& J : subsets_of(ambient)) {
    const auto rest = complement(J, s);
    const auto placed = embed(B0.seq[static_cast<int>(rest.size())], rest, ambient);
    const CumulantSpec spec{t, ClusterArgs::clustered(rest, J), Direction::Heisenberg};
    total += cumulant(dyn, spec, placed);
  }
  return total;
}

ManyBodyOperator reduced_observable_direct(const Dynamics& dyn, double t, const OperatorSequence& A0, int s) {
  check_sector(s, A0.n_max(), "reduced_observable_direct");
  const auto ambient = iota_labels(1, s);
  auto total = ManyBodyOperator::zero(s, A0.d());
  for (const auto& J : subsets_of(ambient)) {
    const auto rest = complement(J, s);
    const auto evolved = dyn.evolve(t, A0[static_cast<int>(rest.size())], Direction::Heisenberg);
    const double sign = J.size() % 2 == 0 ? 1.0 : -1.0;
    total += embed(evolved, rest, ambient) * Complex(sign);
  }
  return total;
}

ReducedObservables reduced_observable_sequence(const Dynamics& dyn, double t, const ReducedObservables& B0) {
  std::vector<ManyBodyOperator> items{B0.seq[0]};
  for (int s = 1; s <= B0.seq.n_max(); ++s) items.push_back(reduced_observable_series(dyn, t, B0, s));
  return {OperatorSequence(B0.seq.d(), std::move(items)), Provenance::Series, t};
}

ManyBodyOperator additive_observable_series(const Dynamics& dyn, double t, const ManyBodyOperator& b1, int s) {
  if (b1.n() != 1) throw std::invalid_argument("additive observable must be a one-particle operator");
  if (s < 1 || s > dyn.max_particles()) throw std::out_of_range("additive_observable_series: s out of range");
  auto summed = ManyBodyOperator::zero(s, b1.d());
  for (int j = 0; j < s; ++j) {
    const int slot[] = {j};
    summed += embed_slots(b1, slot, s);
  }
  const CumulantSpec spec{t, ClusterArgs::singles(iota_labels(1, s)), Direction::Heisenberg};
  return cumulant(dyn, spec, summed);
}

ManyBodyOperator kary_observable_series(const Dynamics& dyn, double t, const ManyBodyOperator& bk, int s) {
  const int k = bk.n();
  if (k < 1) throw std::invalid_argument("k-ary observable needs k >= 1");
  if (s < 1 || s > dyn.max_particles()) throw std::out_of_range("kary_observable_series: s out of range");
  if (s < k) return ManyBodyOperator::zero(s, bk.d());
  const auto ambient = iota_labels(1, s);
  auto total = ManyBodyOperator::zero(s, bk.d());
  for (const auto& J : subsets_of(ambient)) {
    if (static_cast<int>(J.size()) != s - k) continue;
    const auto rest = complement(J, s);
    const CumulantSpec spec{t, ClusterArgs::clustered(rest, J), Direction::Heisenberg};
    total += cumulant(dyn, spec, embed(bk, rest, ambient));
  }
  return total;
}

// ---------------------------------------------------------------------------

ManyBodyOperator bbgky_rhs(const Dynamics& dyn, const SectorProvider& F, int s, int n_max) {
  auto out = dyn.generator(F(s), Direction::VonNeumann);
  if (s + 1 <= n_max && s >= 1) {
    const auto next = F(s + 1);
    for (int j = 1; j <= s; ++j) {
      out += trace_last(dyn.interaction_generator(j, s + 1, next, Direction::VonNeumann), 1);
    }
  }
  return out;
}

ManyBodyOperator dual_rhs(const Dynamics& dyn, const SectorProvider& B, int s) {
  auto out = dyn.generator(B(s), Direction::Heisenberg);
  if (s < 2) return out;
  const auto lower = B(s - 1);
  const auto ambient = iota_labels(1, s);
  for (int j1 = 1; j1 <= s; ++j1) {
    const auto rest = complement({j1}, s);
    const auto padded = embed(lower, rest, ambient);
    for (int j2 = 1; j2 <= s; ++j2) {
      if (j2 != j1) out += dyn.interaction_generator(j1, j2, padded, Direction::Heisenberg);
    }
  }
  return out;
}

double hierarchy_residual(const Dynamics& dyn, HierarchyKind kind, const OperatorSequence& initial, double t, int s,
                          double h) {
  if (!(h > 0.0)) throw std::invalid_argument("hierarchy_residual: h must be positive");
  const int n_max = initial.n_max();
  check_sector(s, n_max, "hierarchy_residual");
  if (kind == HierarchyKind::Bbgky) {
    const ReducedState F0{initial, Provenance::Initial, 0.0, Complex(1.0)};
    auto at = [&](double tau) {
      return [&, tau](int sector) {
        return sector == 0 ? initial[0] : reduced_density_series(dyn, tau, F0, sector);
      };
    };
    const auto derivative =
        (reduced_density_series(dyn, t + h, F0, s) - reduced_density_series(dyn, t - h, F0, s)) * Complex(0.5 / h);
    return frobenius_norm(derivative - bbgky_rhs(dyn, at(t), s, n_max));
  }
  const ReducedObservables B0{initial, Provenance::Initial, 0.0};
  auto at = [&](double tau) {
    return [&, tau](int sector) {
      return sector == 0 ? initial[0] : reduced_observable_series(dyn, tau, B0, sector);
    };
  };
  const auto derivative =
      (reduced_observable_series(dyn, t + h, B0, s) - reduced_observable_series(dyn, t - h, B0, s)) * Complex(0.5 / h);
  return frobenius_norm(derivative - dual_rhs(dyn, at(t), s));
}

double duality_gap(const Dynamics& dyn, double t, const OperatorSequence& A0, const OperatorSequence& D0) {
  const Complex expectation = mean(evolve_sequence(dyn, t, A0, Direction::Heisenberg), D0);
  const auto B0 = initial_reduced_observables(A0);
  const auto F0 = initial_reduced_density(D0);
  const auto Bt = reduced_observable_sequence(dyn, t, B0);
  const auto Ft = reduced_density_sequence(dyn, t, F0);
  const Complex observable_side = pair(Bt.seq, F0.seq);
  const Complex state_side = pair(B0.seq, Ft.seq);
  return std::max(std::abs(expectation - observable_side), std::abs(observable_side - state_side));
}

}  // namespace bbgky
