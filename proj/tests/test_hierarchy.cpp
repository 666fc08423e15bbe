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

#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "bbgky/hierarchy.hpp"
#include "bbgky/random.hpp"
#include "test_support.hpp"

using namespace bbgky;
using namespace bbgky::testing;

namespace {

OperatorSequence single_sector(int d, int n_max, int k, const ManyBodyOperator& op) {
  std::vector<ManyBodyOperator> items;
  for (int n = 0; n <= n_max; ++n) items.push_back(n == k ? op : ManyBodyOperator::zero(n, d));
  return {d, std::move(items)};
}

Matrix kron2(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

}  // namespace

TEST_CASE("creation analog") {
  CHECK(frobenius_norm(creation(OperatorSequence::zero(2, 3))[2]) == 0.0);
  const auto c = creation(single_sector(2, 2, 0, ManyBodyOperator::scalar(1.5, 2)));
  CHECK(distance(c[1].mat(), 1.5 * Matrix::Identity(2, 2)) == 0.0);
  CHECK(c[0].mat().isZero(0.0));
  const auto z = creation(single_sector(2, 2, 1, one_body(pauli_z())));
  const Matrix I = Matrix::Identity(2, 2);
  CHECK(distance(z[2].mat(), kron2(pauli_z(), I) + kron2(I, pauli_z())) == 0.0);
  CHECK(z.n_max() == 2);
}

TEST_CASE("annihilation analog") {
  CHECK(frobenius_norm(annihilation(OperatorSequence::zero(2, 2))[1]) == 0.0);
  std::mt19937_64 rng(1);
  const auto f1 = random_matrix(1, 2, rng);
  CHECK(std::abs(annihilation(single_sector(2, 1, 1, f1))[0].trace() - f1.trace()) < 1e-15);
  const auto rho = random_matrix(1, 2, rng);
  const auto a = annihilation(single_sector(2, 2, 2, kron(rho, rho)));
  CHECK(distance(a[1].mat(), rho.mat() * rho.trace()) < 1e-14);
  CHECK(a[2].mat().isZero(0.0));
}

TEST_CASE("initial reduced densities") {
  const auto F = initial_reduced_density(single_sector(2, 2, 0, ManyBodyOperator::scalar(3.0, 2)));
  CHECK(std::abs(F.seq[0].trace() - Complex(1.0)) < 1e-15);
  CHECK(F.seq[1].mat().isZero(0.0));
  CHECK(std::abs(F.normalizer - Complex(3.0)) < 1e-15);

  std::mt19937_64 rng(2);
  const auto rho = random_density(1, 2, rng);
  const auto G = initial_reduced_density(single_sector(2, 2, 1, rho));
  CHECK(std::abs(G.seq[0].trace() - Complex(1.0)) < 1e-14);
  CHECK(distance(G.seq[1].mat(), rho.mat()) < 1e-14);

  const Dynamics dyn(random_model(3), 4);
  const auto D = random_state_sequence(2, 3, rng);
  const auto F0 = initial_reduced_density(D);
  for (int s = 1; s <= 2; ++s) CHECK(relative_deviation(reduced_density_direct(dyn, 0.0, D, s), F0.seq[s]) < 1e-13);

  CHECK_THROWS_AS(initial_reduced_density(OperatorSequence::zero(2, 2)), DegenerateStateError);
  auto negative = D;
  negative[1] = negative[1] * Complex(-1.0);
  CHECK_THROWS_AS(initial_reduced_density(negative), std::invalid_argument);
  auto asym = D;
  asym[2] = random_density(2, 2, rng);
  CHECK_THROWS_AS(initial_reduced_density(asym), std::invalid_argument);
}

TEST_CASE("initial reduced observables") {
  const Complex a0(0.7);
  const auto B = initial_reduced_observables(single_sector(2, 3, 0, ManyBodyOperator::scalar(a0, 2)));
  for (int n = 0; n <= 3; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    CHECK(distance(B.seq[n].mat(), sign * a0 * Matrix::Identity(B.seq[n].mat().rows(), B.seq[n].mat().rows())) < 1e-14);
  }
  CHECK(frobenius_norm(initial_reduced_observables(OperatorSequence::zero(2, 2)).seq[2]) == 0.0);

  std::mt19937_64 rng(4);
  const auto A = random_observable_sequence(2, 3, rng);
  const auto back = exp_creation(initial_reduced_observables(A).seq, 1.0);
  for (int n = 0; n <= 3; ++n) CHECK(relative_deviation(back[n], A[n]) < 1e-13);
  const auto F = random_state_sequence(2, 3, rng);
  const auto round = exp_annihilation(exp_annihilation(F, -1.0), 1.0);
  for (int n = 0; n <= 3; ++n) CHECK(relative_deviation(round[n], F[n]) < 1e-13);
}

TEST_CASE("state series") {
  const Dynamics dyn(ising_model(0.5), 4);
  std::mt19937_64 rng(5);
  const auto D = random_state_sequence(2, 3, rng);
  const auto F0 = initial_reduced_density(D);
  for (int s = 1; s <= 3; ++s) CHECK(relative_deviation(reduced_density_series(dyn, 0.0, F0, s), F0.seq[s]) < 1e-13);
  // At the truncation sector the series is a single group term.
  CHECK(relative_deviation(reduced_density_series(dyn, 0.8, F0, 3), dyn.evolve(0.8, F0.seq[3], Direction::VonNeumann)) <
        1e-13);
  CHECK(relative_deviation(reduced_density_series(dyn, 0.7, F0, 1), reduced_density_direct(dyn, 0.7, D, 1)) < 1e-9);
  const auto F1 = reduced_density_series(dyn, 1.3, F0, 1);
  CHECK(is_hermitian(F1));
  CHECK(is_symmetric(reduced_density_series(dyn, 1.3, F0, 2)));
  CHECK_THROWS_AS(reduced_density_series(dyn, 0.1, F0, 4), std::out_of_range);
  CHECK_THROWS_AS(reduced_density_series(dyn, 0.1, F0, 0), std::out_of_range);
}

TEST_CASE("direct state route") {
  const Dynamics dyn(random_model(6), 4);
  std::mt19937_64 rng(6);
  const auto rho2 = symmetrize(random_density(2, 2, rng));
  const auto D = single_sector(2, 2, 2, rho2);
  const auto F0 = initial_reduced_density(D);
  CHECK(relative_deviation(reduced_density_direct(dyn, 0.9, D, 2), dyn.evolve(0.9, F0.seq[2], Direction::VonNeumann)) <
        1e-13);
  const auto Dr = random_state_sequence(2, 3, rng);
  const Complex tr0 = reduced_density_direct(dyn, 0.0, Dr, 1).trace();
  for (double t : {0.4, 1.1, -1.9}) {
    const auto F1 = reduced_density_direct(dyn, t, Dr, 1);
    CHECK(std::abs(F1.trace() - tr0) < 1e-12);
    const Matrix normalized = F1.mat() / F1.trace();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (normalized + normalized.adjoint()));
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
  CHECK_THROWS_AS(reduced_density_direct(dyn, 0.1, OperatorSequence::zero(2, 2), 1), DegenerateStateError);
}

TEST_CASE("observable series") {
  const auto model = random_model(7);
  const Dynamics dyn(model, 4);
  std::mt19937_64 rng(7);
  const auto A = random_observable_sequence(2, 3, rng);
  const auto B0 = initial_reduced_observables(A);
  const double t = 0.9;

  CHECK(relative_deviation(reduced_observable_series(dyn, t, B0, 1), dyn.evolve(t, B0.seq[1], Direction::Heisenberg)) <
        1e-13);

  // A_1(t,{1,2}) B_2 + A_2(t,1,2)(B_1(1) + B_1(2)), written out with groups.
  const Matrix I = Matrix::Identity(2, 2);
  const ManyBodyOperator b1_sum(2, 2, kron2(B0.seq[1].mat(), I) + kron2(I, B0.seq[1].mat()));
  const ManyBodyOperator G1b1(1, 2, dyn.evolve(t, B0.seq[1], Direction::Heisenberg).mat());
  const ManyBodyOperator free_part(2, 2, kron2(G1b1.mat(), I) + kron2(I, G1b1.mat()));
  const auto by_hand = dyn.evolve(t, B0.seq[2], Direction::Heisenberg) + dyn.evolve(t, b1_sum, Direction::Heisenberg) -
                       free_part;
  CHECK(relative_deviation(reduced_observable_series(dyn, t, B0, 2), by_hand) < 1e-12);

  for (int s = 1; s <= 3; ++s) {
    CHECK(relative_deviation(reduced_observable_series(dyn, t, B0, s), reduced_observable_direct(dyn, t, A, s)) < 1e-9);
    CHECK(relative_deviation(reduced_observable_direct(dyn, 0.0, A, s), B0.seq[s]) < 1e-13);
  }
  // s = 1: G_1(t) A_1 - A_0 1
  const auto direct1 = reduced_observable_direct(dyn, t, A, 1);
  const Matrix expected1 = dyn.evolve(t, A[1], Direction::Heisenberg).mat() - A[0].mat()(0, 0) * I;
  CHECK(distance(direct1.mat(), expected1) < 1e-13);

  // Identity observables reduce to (1, 0, 0, ...) at every time.
  const auto identity = OperatorSequence::identity(2, 3);
  for (int s = 1; s <= 3; ++s) CHECK(frobenius_norm(reduced_observable_direct(dyn, 1.4, identity, s)) < 1e-12);
  CHECK(is_hermitian(reduced_observable_series(dyn, t, B0, 3)));
  CHECK(is_symmetric(reduced_observable_series(dyn, t, B0, 3)));
}

TEST_CASE("additive and k-ary observables") {
  const Dynamics dyn(random_model(8), 4);
  std::mt19937_64 rng(8);
  const auto b1 = random_hermitian(1, 2, rng);
  CHECK(relative_deviation(additive_observable_series(dyn, 0.6, b1, 1), dyn.evolve(0.6, b1, Direction::Heisenberg)) <
        1e-13);
  const ReducedObservables B1{single_sector(2, 3, 1, b1), Provenance::Initial, 0.0};
  for (int s = 1; s <= 3; ++s) {
    CHECK(relative_deviation(additive_observable_series(dyn, 0.6, b1, s), reduced_observable_series(dyn, 0.6, B1, s)) <
          1e-9);
  }
  const auto b2 = symmetrize(random_hermitian(2, 2, rng));
  const ReducedObservables B2{single_sector(2, 3, 2, b2), Provenance::Initial, 0.0};
  CHECK(kary_observable_series(dyn, 0.6, b2, 1).mat().isZero(0.0));
  for (int s = 2; s <= 3; ++s) {
    CHECK(relative_deviation(kary_observable_series(dyn, 0.6, b2, s), reduced_observable_series(dyn, 0.6, B2, s)) < 1e-9);
  }
  CHECK_THROWS(additive_observable_series(dyn, 0.6, b2, 2));
}

TEST_CASE("hierarchy right-hand sides") {
  std::mt19937_64 rng(9);
  const Dynamics free(free_model(), 4);
  const auto F = random_state_sequence(2, 3, rng);
  auto provider = [&](int n) { return F[n]; };
  CHECK(distance(bbgky_rhs(free, provider, 2, 3).mat(), free.generator(F[2], Direction::VonNeumann).mat()) < 1e-14);

  const Dynamics dyn(random_model(10), 4);
  CHECK(distance(bbgky_rhs(dyn, provider, 3, 3).mat(), dyn.generator(F[3], Direction::VonNeumann).mat()) == 0.0);
  CHECK(distance(dual_rhs(dyn, provider, 1).mat(), dyn.generator(F[1], Direction::Heisenberg).mat()) == 0.0);
}

TEST_CASE("hierarchy residuals are second order in h") {
  std::mt19937_64 rng(11);
  const auto D = random_state_sequence(2, 3, rng);
  const auto A = random_observable_sequence(2, 3, rng);
  const auto F0 = initial_reduced_density(D).seq;
  const auto B0 = initial_reduced_observables(A).seq;

  const Dynamics free(free_model(), 4);
  for (int s = 1; s <= 3; ++s) {
    // Third derivatives of free evolution are bounded by (2 ||H_s||)^3 ||F_s||.
    const double C = std::pow(2.0 * operator_norm(free.hamiltonian(s)), 3) * frobenius_norm(F0[s]) / 6.0;
    CHECK(hierarchy_residual(free, HierarchyKind::Bbgky, F0, 0.5, s, 1e-3) <= C * 1e-6 + 1e-12);
  }

  const Dynamics dyn(ising_model(0.5), 4);
  for (HierarchyKind kind : {HierarchyKind::Bbgky, HierarchyKind::Dual}) {
    const auto& init = kind == HierarchyKind::Bbgky ? F0 : B0;
    for (int s = 1; s <= 3; ++s) {
      const double r1 = hierarchy_residual(dyn, kind, init, 0.5, s, 1e-3);
      const double r2 = hierarchy_residual(dyn, kind, init, 0.5, s, 5e-4);
      CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
      const double r0 = hierarchy_residual(dyn, kind, init, 0.0, s, 1e-3);
      CHECK(r0 < 100 * r1);
      CHECK(r1 < 100 * r0);
    }
  }
  CHECK_THROWS(hierarchy_residual(dyn, HierarchyKind::Bbgky, F0, 0.5, 1, 0.0));
}

TEST_CASE("group representation of the state route") {
  const Dynamics dyn(ising_model(0.5), 4);
  std::mt19937_64 rng(12);
  const auto F0 = initial_reduced_density(random_state_sequence(2, 3, rng));
  const auto at0 = group_representation_density(dyn, 0.0, F0);
  for (int s = 0; s <= 3; ++s) CHECK(relative_deviation(at0[s], F0.seq[s]) < 1e-13);
  const auto rep = group_representation_density(dyn, 1.2, F0);
  for (int s = 1; s <= 3; ++s) {
    CHECK(relative_deviation(rep[s], reduced_density_series(dyn, 1.2, F0, s)) < 1e-9);
    CHECK(relative_deviation(reduced_density_reduced_cumulants(dyn, 1.2, F0, s), reduced_density_series(dyn, 1.2, F0, s)) <
          1e-9);
  }

  // Free dynamics: F_s(t) = G*_s(t) F_s(0).
  const Dynamics free(free_model(), 4);
  const auto rep_free = group_representation_density(free, 0.8, F0);
  for (int s = 1; s <= 3; ++s) {
    CHECK(relative_deviation(rep_free[s], free.evolve(0.8, F0.seq[s], Direction::VonNeumann)) < 1e-12);
  }
}

TEST_CASE("duality") {
  const Dynamics dyn(random_model(13), 4);
  std::mt19937_64 rng(13);
  const auto A = random_observable_sequence(2, 3, rng);
  const auto D = random_state_sequence(2, 3, rng);
  CHECK(duality_gap(dyn, 0.0, A, D) < 1e-13);
  CHECK(duality_gap(dyn, 1.0, A, D) < 1e-9);
  const auto identity = OperatorSequence::identity(2, 3);
  const auto F0 = initial_reduced_density(D);
  for (double t : {0.3, 1.7}) {
    const auto Bt = reduced_observable_sequence(dyn, t, initial_reduced_observables(identity));
    CHECK(std::abs(pair(Bt.seq, F0.seq) - Complex(1.0)) < 1e-12);
    const auto Ft = reduced_density_sequence(dyn, t, F0);
    CHECK(std::abs(pair(initial_reduced_observables(identity).seq, Ft.seq) - Complex(1.0)) < 1e-12);
    CHECK(duality_gap(dyn, t, identity, D) < 1e-12);
  }
  CHECK_THROWS_AS(duality_gap(dyn, 0.5, A, OperatorSequence::zero(2, 3)), DegenerateStateError);
}
