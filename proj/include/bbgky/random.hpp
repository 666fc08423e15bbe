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

#include <random>

#include "bbgky/tensorspace.hpp"

namespace bbgky {

/// Seeded generators for test and report data. All draws use
/// std::mt19937_64 with standard normal entries.
ManyBodyOperator random_matrix(int n, int d, std::mt19937_64& rng);
ManyBodyOperator random_hermitian(int n, int d, std::mt19937_64& rng);
/// A A^dagger normalized to unit trace.
ManyBodyOperator random_density(int n, int d, std::mt19937_64& rng);

/// Permutation-symmetric positive sectors D_0..D_nmax with random positive
/// weights, so (I, D) > 0.
OperatorSequence random_state_sequence(int d, int n_max, std::mt19937_64& rng);
/// Permutation-symmetric Hermitian sectors.
OperatorSequence random_observable_sequence(int d, int n_max, std::mt19937_64& rng);

}  // namespace bbgky
