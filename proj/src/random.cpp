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

#include "bbgky/random.hpp"

namespace bbgky {

ManyBodyOperator random_matrix(int n, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto side = hilbert_dim(d, n);
  Matrix m(side, side);
  for (Eigen::Index r = 0; r < side; ++r) {
    for (Eigen::Index c = 0; c < side; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return {n, d, std::move(m)};
}

ManyBodyOperator random_hermitian(int n, int d, std::mt19937_64& rng) {
  const auto a = random_matrix(n, d, rng);
  return {n, d, 0.5 * (a.mat() + a.mat().adjoint())};
}

ManyBodyOperator random_density(int n, int d, std::mt19937_64& rng) {
  const auto a = random_matrix(n, d, rng);
  Matrix rho = a.mat() * a.mat().adjoint();
  rho /= rho.trace();
  return {n, d, std::move(rho)};
}

OperatorSequence random_state_sequence(int d, int n_max, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  std::vector<ManyBodyOperator> items;
  for (int n = 0; n <= n_max; ++n) {
    const double w = weight(rng) * factorial(n);
    items.push_back(symmetrize(random_density(n, d, rng)) * Complex(w));
  }
  return {d, std::move(items)};
}

OperatorSequence random_observable_sequence(int d, int n_max, std::mt19937_64& rng) {
  std::vector<ManyBodyOperator> items;
  for (int n = 0; n <= n_max; ++n) items.push_back(symmetrize(random_hermitian(n, d, rng)));
  return {d, std::move(items)};
}

}  // namespace bbgky
