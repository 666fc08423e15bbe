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

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "bbgky/tensorspace.hpp"

namespace bbgky {

/// Heisenberg evolves observables (e^{itH} b e^{-itH}); VonNeumann evolves
/// states (e^{-itH} f e^{itH}). The two are adjoint under Tr(b f).
enum class Direction { Heisenberg, VonNeumann };

const char* to_string(Direction dir);

/// One-particle kinetic matrix K (d x d) and pair potential Phi (d^2 x d^2).
struct SingleParticleModel {
  int d = 2;
  ManyBodyOperator K;
  ManyBodyOperator Phi;

  /// Throws std::invalid_argument unless K, Phi are Hermitian and Phi is
  /// invariant under the slot swap.
  void validate(const Tolerances& tol = {}) const;

  /// Same K, Phi multiplied by `factor`.
  SingleParticleModel with_coupling_scale(double factor) const;
};

/// Built-in models. `spin_z(d)` is diag(1, ..., -1) with evenly spaced
/// entries, which is sigma_z for d = 2.
ManyBodyOperator spin_z(int d);
SingleParticleModel free_model(int d = 2);
/// K = spin_z, Phi = g spin_z (x) spin_z.
SingleParticleModel ising_model(double g, int d = 2);
/// Random Hermitian K and swap-symmetric Hermitian Phi (scaled by g).
SingleParticleModel random_model(std::uint64_t seed, int d = 2, double g = 1.0);

/// H_n = sum_j K(j) + sum_{j1<j2} Phi(j1, j2). H_0 is the scalar 0.
ManyBodyOperator hamiltonian(int n, const SingleParticleModel& model);

/// Model plus a per-session propagator cache. Every operation is const and
/// safe to call concurrently; the cache is an atomic get-or-compute map.
class Dynamics {
 public:
  explicit Dynamics(SingleParticleModel model, int max_particles = 6);

  const SingleParticleModel& model() const { return model_; }
  int d() const { return model_.d; }
  int max_particles() const { return max_particles_; }

  const ManyBodyOperator& hamiltonian(int n) const;

  /// e^{-itH_n}; the Heisenberg group uses its adjoint.
  const Matrix& propagator(int n, double t) const;

  /// Conjugation by the n-particle group in the given direction.
  ManyBodyOperator evolve(double t, const ManyBodyOperator& op, Direction dir) const;

  /// Heisenberg: -i(bH - Hb). VonNeumann: -i(Hf - fH).
  ManyBodyOperator generator(const ManyBodyOperator& op, Direction dir) const;

  /// Commutator with Phi on the 1-based particles (j1, j2), same sign
  /// convention as generator().
  ManyBodyOperator interaction_generator(int j1, int j2, const ManyBodyOperator& op, Direction dir) const;

  std::size_t cached_propagators() const;
  void clear_cache() const;

 private:
  struct Spectrum {
    Eigen::VectorXd energies;
    Matrix vectors;
  };

  const Spectrum& spectrum(int n) const;
  void check_n(int n) const;

  SingleParticleModel model_;
  int max_particles_;
  std::vector<ManyBodyOperator> hamiltonians_;

  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<Spectrum>> spectra_;
  mutable std::map<std::pair<int, double>, std::unique_ptr<Matrix>> propagators_;
};

}  // namespace bbgky
