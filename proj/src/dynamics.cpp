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

#include "bbgky/dynamics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bbgky/random.hpp"

namespace bbgky {

const char* to_string(Direction dir) { return dir == Direction::Heisenberg ? "heisenberg" : "von_neumann"; }

void SingleParticleModel::validate(const Tolerances& tol) const {
  if (K.n() != 1 || K.d() != d) throw std::invalid_argument("model: K must be a one-particle operator of dimension d");
  if (Phi.n() != 2 || Phi.d() != d) throw std::invalid_argument("model: Phi must be a two-particle operator of dimension d");
  if (!is_hermitian(K, tol.hermitian)) throw std::invalid_argument("model: K is not Hermitian");
  if (!is_hermitian(Phi, tol.hermitian)) throw std::invalid_argument("model: Phi is not Hermitian");
  if (!is_symmetric(Phi, tol.symmetric)) throw std::invalid_argument("model: Phi is not symmetric under particle swap");
}

SingleParticleModel SingleParticleModel::with_coupling_scale(double factor) const {
  SingleParticleModel out = *this;
  out.Phi *= Complex(factor);
  return out;
}

ManyBodyOperator spin_z(int d) {
  Matrix m = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) m(j, j) = 1.0 - 2.0 * j / (d - 1);
  return {1, d, std::move(m)};
}

SingleParticleModel free_model(int d) { return {d, spin_z(d), ManyBodyOperator::zero(2, d)}; }

SingleParticleModel ising_model(double g, int d) {
  const auto z = spin_z(d);
  return {d, z, kron(z, z) * Complex(g)};
}

SingleParticleModel random_model(std::uint64_t seed, int d, double g) {
  std::mt19937_64 rng(seed);
  auto K = random_hermitian(1, d, rng);
  auto Phi = symmetrize(random_hermitian(2, d, rng)) * Complex(g);
  return {d, std::move(K), std::move(Phi)};
}

ManyBodyOperator hamiltonian(int n, const SingleParticleModel& model) {
  if (n < 0) throw std::invalid_argument("hamiltonian: n must be non-negative");
  auto H = ManyBodyOperator::zero(n, model.d);
  for (int j = 0; j < n; ++j) {
    const int slot[] = {j};
    H += embed_slots(model.K, slot, n);
  }
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = j1 + 1; j2 < n; ++j2) {
      const int slots[] = {j1, j2};
      H += embed_slots(model.Phi, slots, n);
    }
  }
  return H;
}

// ---------------------------------------------------------------------------

Dynamics::Dynamics(SingleParticleModel model, int max_particles)
    : model_(std::move(model)), max_particles_(max_particles) {
  model_.validate();
  if (max_particles < 0) throw std::invalid_argument("max_particles must be non-negative");
  for (int n = 0; n <= max_particles_; ++n) hamiltonians_.push_back(bbgky::hamiltonian(n, model_));
}

void Dynamics::check_n(int n) const {
  if (n < 0 || n > max_particles_) {
    throw std::out_of_range("particle count " + std::to_string(n) + " outside 0.." + std::to_string(max_particles_));
  }
}

const ManyBodyOperator& Dynamics::hamiltonian(int n) const {
  check_n(n);
  return hamiltonians_[static_cast<std::size_t>(n)];
}

const Dynamics::Spectrum& Dynamics::spectrum(int n) const {
  // Caller holds mutex_.
  auto it = spectra_.find(n);
  if (it != spectra_.end()) return *it->second;
  const Matrix& H = hamiltonians_[static_cast<std::size_t>(n)].mat();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  auto spec = std::make_unique<Spectrum>(Spectrum{solver.eigenvalues(), solver.eigenvectors()});
  const Matrix rebuilt = spec->vectors * spec->energies.cast<Complex>().asDiagonal() * spec->vectors.adjoint();
  const double residual = (H - rebuilt).norm();
  if (residual > 1e-11 * std::max(1.0, H.norm())) {
    throw std::runtime_error("eigendecomposition residual " + std::to_string(residual) + " too large");
  }
  return *spectra_.emplace(n, std::move(spec)).first->second;
}

const Matrix& Dynamics::propagator(int n, double t) const {
  check_n(n);
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  std::lock_guard lock(mutex_);
  const auto key = std::make_pair(n, t);
  auto it = propagators_.find(key);
  if (it != propagators_.end()) return *it->second;
  const Spectrum& spec = spectrum(n);
  Eigen::VectorXcd phases(spec.energies.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(Complex(0.0, -t * spec.energies(k)));
  auto U = std::make_unique<Matrix>(spec.vectors * phases.asDiagonal() * spec.vectors.adjoint());
  return *propagators_.emplace(key, std::move(U)).first->second;
}

ManyBodyOperator Dynamics::evolve(double t, const ManyBodyOperator& op, Direction dir) const {
  if (op.d() != d()) throw std::invalid_argument("evolve: dimension mismatch");
  const Matrix& U = propagator(op.n(), t);
  if (dir == Direction::VonNeumann) return {op.n(), op.d(), U * op.mat() * U.adjoint()};
  return {op.n(), op.d(), U.adjoint() * op.mat() * U};
}

ManyBodyOperator Dynamics::generator(const ManyBodyOperator& op, Direction dir) const {
  const Matrix& H = hamiltonian(op.n()).mat();
  const Complex minus_i(0.0, -1.0);
  if (dir == Direction::Heisenberg) return {op.n(), op.d(), minus_i * (op.mat() * H - H * op.mat())};
  return {op.n(), op.d(), minus_i * (H * op.mat() - op.mat() * H)};
}

ManyBodyOperator Dynamics::interaction_generator(int j1, int j2, const ManyBodyOperator& op, Direction dir) const {
  const int n = op.n();
  if (j1 < 1 || j1 > n || j2 < 1 || j2 > n) throw std::out_of_range("interaction_generator: index out of range");
  if (j1 == j2) throw std::invalid_argument("interaction_generator: indices must differ");
  const int slots[] = {j1 - 1, j2 - 1};
  const Matrix V = embed_matrix(model_.Phi.mat(), d(), slots, n);
  const Complex minus_i(0.0, -1.0);
  if (dir == Direction::Heisenberg) return {n, op.d(), minus_i * (op.mat() * V - V * op.mat())};
  return {n, op.d(), minus_i * (V * op.mat() - op.mat() * V)};
}

std::size_t Dynamics::cached_propagators() const {
  std::lock_guard lock(mutex_);
  return propagators_.size();
}

void Dynamics::clear_cache() const {
  std::lock_guard lock(mutex_);
  propagators_.clear();
}

}  // namespace bbgky
