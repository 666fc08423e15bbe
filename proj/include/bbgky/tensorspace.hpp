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

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bbgky {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Raised when the normalizing coefficient (I, f) of a state vanishes.
class DegenerateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double hermitian = 1e-10;  // relative Frobenius
  double symmetric = 1e-10;  // relative Frobenius
};

/// Integer power d^n, the side of an n-particle matrix.
std::int64_t hilbert_dim(int d, int n);

/// Dense operator on the n-fold tensor power of a d-dimensional space.
///
/// Basis states are encoded row-major in base d with particle 1 as the most
/// significant digit. Sector 0 is a 1x1 matrix.
class ManyBodyOperator {
 public:
  ManyBodyOperator() = default;
  ManyBodyOperator(int n, int d, Matrix mat);

  static ManyBodyOperator zero(int n, int d);
  static ManyBodyOperator identity(int n, int d);
  static ManyBodyOperator scalar(Complex value, int d);

  int n() const { return n_; }
  int d() const { return d_; }
  const Matrix& mat() const { return mat_; }

  Complex trace() const { return mat_.trace(); }
  ManyBodyOperator adjoint() const { return {n_, d_, mat_.adjoint()}; }

  ManyBodyOperator& operator+=(const ManyBodyOperator& other);
  ManyBodyOperator& operator-=(const ManyBodyOperator& other);
  ManyBodyOperator& operator*=(Complex factor);

  friend ManyBodyOperator operator+(ManyBodyOperator a, const ManyBodyOperator& b) { return a += b; }
  friend ManyBodyOperator operator-(ManyBodyOperator a, const ManyBodyOperator& b) { return a -= b; }
  friend ManyBodyOperator operator*(ManyBodyOperator a, Complex f) { return a *= f; }
  friend ManyBodyOperator operator*(Complex f, ManyBodyOperator a) { return a *= f; }
  /// Operator product on the same space.
  friend ManyBodyOperator operator*(const ManyBodyOperator& a, const ManyBodyOperator& b);

 private:
  void check_compatible(const ManyBodyOperator& other) const;

  int n_ = 0;
  int d_ = 2;
  Matrix mat_ = Matrix::Zero(1, 1);
};

/// Tensor product a (x) b, particles of a first.
ManyBodyOperator kron(const ManyBodyOperator& a, const ManyBodyOperator& b);

/// Places `op` on the tensor slots of `subset` (labels looked up in `ambient`,
/// in the listed order) and the identity on every other slot.
ManyBodyOperator embed(const ManyBodyOperator& op, std::span<const int> subset, std::span<const int> ambient);

/// Same as above with 0-based slot positions inside an n-particle space.
ManyBodyOperator embed_slots(const ManyBodyOperator& op, std::span<const int> slots, int n);

/// Raw-matrix form of embed_slots, used on propagators.
Matrix embed_matrix(const Matrix& op, int d, std::span<const int> slots, int n);

/// Traces out the 1-based particle indices in `traced`.
ManyBodyOperator partial_trace(const ManyBodyOperator& f, std::span<const int> traced);

/// Traces out the last `count` particles.
ManyBodyOperator trace_last(const ManyBodyOperator& f, int count);

/// Slot permutation: result(r, c) = op(r o sigma, c o sigma), with sigma a
/// 1-based permutation of (1..n), so that permute(A (x) B, (2,1)) == B (x) A
/// and permute(permute(op, s), t) == permute(op, t o s).
ManyBodyOperator permute(const ManyBodyOperator& op, std::span<const int> sigma);

/// Average of permute(op, sigma) over all n! permutations.
ManyBodyOperator symmetrize(const ManyBodyOperator& op);

bool is_hermitian(const ManyBodyOperator& op, double tol = Tolerances{}.hermitian);
bool is_symmetric(const ManyBodyOperator& op, double tol = Tolerances{}.symmetric);

double operator_norm(const ManyBodyOperator& op);
double trace_norm(const ManyBodyOperator& op);
double frobenius_norm(const ManyBodyOperator& op);

/// ||a - b||_F / max(||b||_F, floor).
double relative_deviation(const ManyBodyOperator& a, const ManyBodyOperator& b, double floor = 1e-300);

/// Fock-truncated sequence (b_0, ..., b_nmax).
class OperatorSequence {
 public:
  OperatorSequence() = default;
  OperatorSequence(int d, std::vector<ManyBodyOperator> items);

  static OperatorSequence zero(int d, int n_max);
  static OperatorSequence identity(int d, int n_max);

  int d() const { return d_; }
  int n_max() const { return static_cast<int>(items_.size()) - 1; }
  const ManyBodyOperator& operator[](int n) const { return items_.at(static_cast<std::size_t>(n)); }
  ManyBodyOperator& operator[](int n) { return items_.at(static_cast<std::size_t>(n)); }
  const std::vector<ManyBodyOperator>& items() const { return items_; }

  /// Keeps sectors 0..n_max, zero-padding if the sequence is shorter.
  OperatorSequence truncated(int n_max) const;

  OperatorSequence& operator+=(const OperatorSequence& other);
  OperatorSequence& operator*=(Complex factor);
  friend OperatorSequence operator+(OperatorSequence a, const OperatorSequence& b) { return a += b; }
  friend OperatorSequence operator*(Complex f, OperatorSequence a) { return a *= f; }

 private:
  int d_ = 2;
  std::vector<ManyBodyOperator> items_;
};

/// Throws std::invalid_argument naming the first sector that is not
/// permutation symmetric.
void require_symmetric(const OperatorSequence& seq, double tol = Tolerances{}.symmetric);

/// max_n gamma^n / n! ||b_n||, 0 < gamma < 1.
double seq_norm_gamma(const OperatorSequence& b, double gamma);
/// sum_n alpha^n Tr|f_n|, alpha > 1.
double seq_norm_alpha(const OperatorSequence& f, double alpha);

/// sum_n 1/n! Tr(b_n f_n) over the common sectors.
Complex pair(const OperatorSequence& b, const OperatorSequence& f);
/// (I, f)^{-1} (b, f). Throws DegenerateStateError when (I, f) vanishes.
Complex mean(const OperatorSequence& b, const OperatorSequence& f);
/// (I, f) = sum_n 1/n! Tr f_n.
Complex normalizer(const OperatorSequence& f);
/// normalizer(f), throwing DegenerateStateError when it vanishes relative to
/// sum_n 1/n! Tr|f_n|.
Complex checked_normalizer(const OperatorSequence& f);

double factorial(int n);
double binomial(int n, int k);

}  // namespace bbgky
