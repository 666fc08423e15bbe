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
#include <thread>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "bbgky/dynamics.hpp"
#include "bbgky/random.hpp"
#include "test_support.hpp"

using namespace bbgky;
using namespace bbgky::testing;

namespace {

Matrix pade_propagator(const Matrix& H, double t) { return Matrix((Complex(0.0, -t) * H).exp()); }

Matrix kron3(const Matrix& a, const Matrix& b, const Matrix& c) {
  return Eigen::kroneckerProduct(Eigen::kroneckerProduct(a, b).eval(), c).eval();
}

}  // namespace

TEST_CASE("Hamiltonians") {
  const auto model = ising_model(0.5);
  CHECK(distance(hamiltonian(1, model).mat(), model.K.mat()) == 0.0);
  CHECK(hamiltonian(0, model).mat().isZero(0.0));

  const auto free = free_model();
  const Matrix I = Matrix::Identity(2, 2);
  const Matrix K = free.K.mat();
  const Matrix h2 = Eigen::kroneckerProduct(K, I).eval() + Eigen::kroneckerProduct(I, K).eval();
  CHECK(distance(hamiltonian(2, free).mat(), h2) < 1e-15);

  // Slot-by-slot three-particle assembly.
  const auto rnd = random_model(4);
  const Matrix k = rnd.K.mat();
  const Matrix phi = rnd.Phi.mat();
  Matrix h3 = kron3(k, I, I) + kron3(I, k, I) + kron3(I, I, k);
  h3 += Eigen::kroneckerProduct(phi, I).eval() + Eigen::kroneckerProduct(I, phi).eval();
  // Phi on particles (1, 3): conjugate Phi (x) 1 by the swap of slots 2 and 3.
  Matrix swap23 = Matrix::Zero(8, 8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) swap23(a * 4 + c * 2 + b, a * 4 + b * 2 + c) = 1.0;
  h3 += swap23 * Eigen::kroneckerProduct(phi, I).eval() * swap23.transpose();
  CHECK(distance(hamiltonian(3, rnd).mat(), h3) < 1e-13);
  CHECK(is_hermitian(hamiltonian(3, rnd)));
  CHECK(is_symmetric(hamiltonian(3, rnd)));
}

TEST_CASE("model validation") {
  auto bad = ising_model(1.0);
  Matrix m = bad.Phi.mat();
  m(0, 1) = 1.0;
  bad.Phi = ManyBodyOperator(2, 2, m);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(random_model(9, 3, 0.7).validate());
  CHECK(distance(spin_z(2).mat(), pauli_z()) == 0.0);
}

TEST_CASE("propagators match the Pade exponential") {
  const auto model = random_model(8, 2, 0.9);
  const Dynamics dyn(model, 4);
  for (int n = 1; n <= 4; ++n) {
    for (double t : {-1.3, 0.4, 2.0}) {
      CHECK(distance(dyn.propagator(n, t), pade_propagator(dyn.hamiltonian(n).mat(), t)) < 1e-11);
    }
  }
  CHECK_THROWS(dyn.propagator(5, 0.1));
  CHECK(dyn.cached_propagators() >= 12);
  dyn.clear_cache();
  CHECK(dyn.cached_propagators() == 0);
}

TEST_CASE("evolution closed form for a single spin") {
  const Dynamics dyn(ising_model(0.0), 2);
  for (double t : {0.0, 0.37, 1.2}) {
    const auto out = dyn.evolve(t, one_body(pauli_x()), Direction::Heisenberg);
    const Matrix expected = std::cos(2 * t) * pauli_x() - std::sin(2 * t) * pauli_y();
    CHECK(distance(out.mat(), expected) < 1e-13);
  }
  CHECK(distance(dyn.evolve(0.0, one_body(pauli_x()), Direction::VonNeumann).mat(), pauli_x()) == 0.0);
}

TEST_CASE("group law, adjointness, invariants") {
  const Dynamics dyn(random_model(12), 3);
  std::mt19937_64 rng(31);
  const auto b = random_hermitian(3, 2, rng);
  const auto f = random_density(3, 2, rng);
  for (Direction dir : {Direction::Heisenberg, Direction::VonNeumann}) {
    const auto lhs = dyn.evolve(1.5, b, dir);
    const auto rhs = dyn.evolve(0.7, dyn.evolve(0.8, b, dir), dir);
    CHECK(distance(lhs.mat(), rhs.mat()) < 1e-10);
    CHECK(distance(dyn.evolve(0.9, dyn.hamiltonian(3), dir).mat(), dyn.hamiltonian(3).mat()) < 1e-12);
  }
  const Complex a = (dyn.evolve(1.1, b, Direction::Heisenberg) * f).trace();
  const Complex c = (b * dyn.evolve(1.1, f, Direction::VonNeumann)).trace();
  CHECK(std::abs(a - c) < 1e-10);

  const auto ft = dyn.evolve(1.7, f, Direction::VonNeumann);
  CHECK(std::abs(trace_norm(ft) - trace_norm(f)) < 1e-10);
  CHECK(std::abs(ft.trace() - f.trace()) < 1e-12);
  CHECK(is_hermitian(ft));
  Eigen::SelfAdjointEigenSolver<Matrix> es(ft.mat());
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("generators") {
  const Dynamics dyn(ising_model(0.0), 2);
  // -i(sx sz - sz sx) = -2 sy
  const auto gen = dyn.generator(one_body(pauli_x()), Direction::Heisenberg);
  CHECK(distance(gen.mat(), -2.0 * pauli_y()) < 1e-15);
  CHECK(dyn.generator(ManyBodyOperator::identity(2, 2), Direction::VonNeumann).mat().isZero(0.0));
  CHECK(dyn.generator(dyn.hamiltonian(2), Direction::Heisenberg).mat().norm() < 1e-14);
}

TEST_CASE("finite-difference generator check") {
  const Dynamics dyn(random_model(5), 3);
  std::mt19937_64 rng(37);
  const auto op = random_hermitian(3, 2, rng);
  for (Direction dir : {Direction::Heisenberg, Direction::VonNeumann}) {
    auto residual = [&](double h) {
      const auto diff = (dyn.evolve(h, op, dir) - dyn.evolve(-h, op, dir)) * Complex(0.5 / h);
      return frobenius_norm(diff - dyn.generator(op, dir));
    };
    const double drop = residual(1e-2) / residual(1e-3);
    CHECK(drop > 90.0);
    CHECK(drop < 110.0);
  }
}

TEST_CASE("interaction generator") {
  const auto model = random_model(21);
  const Dynamics dyn(model, 3);
  std::mt19937_64 rng(41);
  const auto f2 = random_matrix(2, 2, rng);
  // Full generator minus the kinetic commutators computed by hand.
  const Matrix I = Matrix::Identity(2, 2);
  const Matrix kin = Eigen::kroneckerProduct(model.K.mat(), I).eval() + Eigen::kroneckerProduct(I, model.K.mat()).eval();
  const Matrix kinetic = Complex(0, -1) * (kin * f2.mat() - f2.mat() * kin);
  const auto full = dyn.generator(f2, Direction::VonNeumann);
  CHECK(distance(dyn.interaction_generator(1, 2, f2, Direction::VonNeumann).mat(), full.mat() - kinetic) < 1e-13);

  const Dynamics free(free_model(), 3);
  CHECK(free.interaction_generator(1, 2, f2, Direction::Heisenberg).mat().isZero(0.0));
  CHECK_THROWS(dyn.interaction_generator(1, 1, f2, Direction::Heisenberg));
  CHECK_THROWS(dyn.interaction_generator(1, 3, f2, Direction::Heisenberg));
  // An operator commuting with Phi(1, 2).
  const Dynamics ising(ising_model(0.8), 3);
  const auto zz = kron(one_body(pauli_z()), one_body(pauli_z()));
  CHECK(ising.interaction_generator(1, 2, zz, Direction::Heisenberg).mat().isZero(1e-15));
}

TEST_CASE("propagator cache is safe under concurrent access") {
  const Dynamics dyn(random_model(2), 4);
  std::vector<std::thread> workers;
  std::vector<double> errors(8, 0.0);
  for (int w = 0; w < 8; ++w) {
    workers.emplace_back([&, w] {
      for (int k = 0; k < 20; ++k) {
        const double t = 0.1 * (k % 5);
        const int n = 1 + (w + k) % 4;
        const Matrix& U = dyn.propagator(n, t);
        errors[w] = std::max(errors[w], (U * U.adjoint() - Matrix::Identity(U.rows(), U.cols())).norm());
      }
    });
  }
  for (auto& th : workers) th.join();
  for (double e : errors) CHECK(e < 1e-12);
  CHECK(dyn.cached_propagators() == 20);
}
