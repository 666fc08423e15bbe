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

#include "bbgky/tensorspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bbgky {

namespace {

// Base-d digits of `index`, most significant (particle 1) first.
void decode(std::int64_t index, int d, int n, std::vector<int>& digits) {
  digits.resize(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = static_cast<int>(index % d);
    index /= d;
  }
}

std::int64_t encode(const std::vector<int>& digits, int d) {
  std::int64_t index = 0;
  for (int v : digits) index = index * d + v;
  return index;
}

void check_permutation(std::span<const int> sigma, int n) {
  if (static_cast<int>(sigma.size()) != n) {
    throw std::invalid_argument("permutation length " + std::to_string(sigma.size()) + " != n = " +
                                std::to_string(n));
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : sigma) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) {
      throw std::invalid_argument("not a bijection of (1..n)");
    }
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
}

}  // namespace

std::int64_t hilbert_dim(int d, int n) {
  std::int64_t dim = 1;
  for (int k = 0; k < n; ++k) dim *= d;
  return dim;
}

double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative number");
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

// ---------------------------------------------------------------------------
// ManyBodyOperator

ManyBodyOperator::ManyBodyOperator(int n, int d, Matrix mat) : n_(n), d_(d), mat_(std::move(mat)) {
  if (n < 0) throw std::invalid_argument("particle count must be non-negative");
  if (d < 2) throw std::invalid_argument("single-particle dimension must be >= 2");
  const auto side = hilbert_dim(d, n);
  if (mat_.rows() != side || mat_.cols() != side) {
    throw std::invalid_argument("matrix is " + std::to_string(mat_.rows()) + "x" + std::to_string(mat_.cols()) +
                                ", expected side d^n = " + std::to_string(side));
  }
}

ManyBodyOperator ManyBodyOperator::zero(int n, int d) {
  const auto side = hilbert_dim(d, n);
  return {n, d, Matrix::Zero(side, side)};
}

ManyBodyOperator ManyBodyOperator::identity(int n, int d) {
  const auto side = hilbert_dim(d, n);
  return {n, d, Matrix::Identity(side, side)};
}

ManyBodyOperator ManyBodyOperator::scalar(Complex value, int d) {
  Matrix m(1, 1);
  m(0, 0) = value;
  return {0, d, std::move(m)};
}

void ManyBodyOperator::check_compatible(const ManyBodyOperator& other) const {
  if (n_ != other.n_ || d_ != other.d_) {
    throw std::invalid_argument("operator shapes differ: (n=" + std::to_string(n_) + ", d=" + std::to_string(d_) +
                                ") vs (n=" + std::to_string(other.n_) + ", d=" + std::to_string(other.d_) + ")");
  }
}

ManyBodyOperator& ManyBodyOperator::operator+=(const ManyBodyOperator& other) {
  check_compatible(other);
  mat_ += other.mat_;
  return *this;
}

ManyBodyOperator& ManyBodyOperator::operator-=(const ManyBodyOperator& other) {
  check_compatible(other);
  mat_ -= other.mat_;
  return *this;
}

ManyBodyOperator& ManyBodyOperator::operator*=(Complex factor) {
  mat_ *= factor;
  return *this;
}

ManyBodyOperator operator*(const ManyBodyOperator& a, const ManyBodyOperator& b) {
  a.check_compatible(b);
  return {a.n_, a.d_, a.mat_ * b.mat_};
}

ManyBodyOperator kron(const ManyBodyOperator& a, const ManyBodyOperator& b) {
  if (a.d() != b.d()) throw std::invalid_argument("kron: dimension mismatch");
  const auto& ma = a.mat();
  const auto& mb = b.mat();
  Matrix out(ma.rows() * mb.rows(), ma.cols() * mb.cols());
  for (Eigen::Index i = 0; i < ma.rows(); ++i) {
    for (Eigen::Index j = 0; j < ma.cols(); ++j) {
      out.block(i * mb.rows(), j * mb.cols(), mb.rows(), mb.cols()) = ma(i, j) * mb;
    }
  }
  return {a.n() + b.n(), a.d(), std::move(out)};
}

// ---------------------------------------------------------------------------
// Embedding and partial traces

Matrix embed_matrix(const Matrix& op, int d, std::span<const int> slots, int n) {
  const int k = static_cast<int>(slots.size());
  const auto sub = hilbert_dim(d, k);
  if (op.rows() != sub || op.cols() != sub) throw std::invalid_argument("embed: operator size does not match subset");
  const auto side = hilbert_dim(d, n);
  Matrix out = Matrix::Zero(side, side);

  std::vector<int> row_digits;
  std::vector<int> col_digits;
  std::vector<int> sub_digits;
  for (std::int64_t r = 0; r < side; ++r) {
    decode(r, d, n, row_digits);
    std::int64_t r_sub = 0;
    for (int s : slots) r_sub = r_sub * d + row_digits[static_cast<std::size_t>(s)];
    col_digits = row_digits;
    for (std::int64_t c_sub = 0; c_sub < sub; ++c_sub) {
      const Complex v = op(r_sub, c_sub);
      if (v == Complex{}) continue;
      decode(c_sub, d, k, sub_digits);
      for (int q = 0; q < k; ++q) {
        col_digits[static_cast<std::size_t>(slots[static_cast<std::size_t>(q)])] = sub_digits[static_cast<std::size_t>(q)];
      }
      out(r, encode(col_digits, d)) += v;
    }
  }
  return out;
}

ManyBodyOperator embed_slots(const ManyBodyOperator& op, std::span<const int> slots, int n) {
  if (static_cast<int>(slots.size()) != op.n()) {
    throw std::invalid_argument("embed: subset size " + std::to_string(slots.size()) + " != operator particle count " +
                                std::to_string(op.n()));
  }
  std::vector<bool> used(static_cast<std::size_t>(std::max(n, 0)), false);
  for (int s : slots) {
    if (s < 0 || s >= n) throw std::out_of_range("embed: slot " + std::to_string(s) + " out of range");
    if (used[static_cast<std::size_t>(s)]) throw std::invalid_argument("embed: repeated slot");
    used[static_cast<std::size_t>(s)] = true;
  }
  return {n, op.d(), embed_matrix(op.mat(), op.d(), slots, n)};
}

ManyBodyOperator embed(const ManyBodyOperator& op, std::span<const int> subset, std::span<const int> ambient) {
  std::vector<int> slots;
  slots.reserve(subset.size());
  for (int label : subset) {
    auto it = std::find(ambient.begin(), ambient.end(), label);
    if (it == ambient.end()) throw std::out_of_range("embed: index " + std::to_string(label) + " not in ambient list");
    slots.push_back(static_cast<int>(it - ambient.begin()));
  }
  return embed_slots(op, slots, static_cast<int>(ambient.size()));
}

ManyBodyOperator partial_trace(const ManyBodyOperator& f, std::span<const int> traced) {
  const int n = f.n();
  const int d = f.d();
  std::vector<bool> is_traced(static_cast<std::size_t>(n), false);
  for (int idx : traced) {
    if (idx < 1 || idx > n) throw std::out_of_range("partial_trace: index " + std::to_string(idx) + " out of range");
    if (is_traced[static_cast<std::size_t>(idx - 1)]) throw std::invalid_argument("partial_trace: repeated index");
    is_traced[static_cast<std::size_t>(idx - 1)] = true;
  }
  std::vector<int> kept;
  std::vector<int> gone;
  for (int q = 0; q < n; ++q) (is_traced[static_cast<std::size_t>(q)] ? gone : kept).push_back(q);
  if (gone.empty()) return f;

  const int nk = static_cast<int>(kept.size());
  const int ng = static_cast<int>(gone.size());
  const auto side_k = hilbert_dim(d, nk);
  const auto side_g = hilbert_dim(d, ng);
  Matrix out = Matrix::Zero(side_k, side_k);

  std::vector<int> digits(static_cast<std::size_t>(n));
  std::vector<int> rk;
  std::vector<int> ck;
  std::vector<int> gd;
  auto full_index = [&](const std::vector<int>& kd, const std::vector<int>& gdig) {
    for (int q = 0; q < nk; ++q) digits[static_cast<std::size_t>(kept[static_cast<std::size_t>(q)])] = kd[static_cast<std::size_t>(q)];
    for (int q = 0; q < ng; ++q) digits[static_cast<std::size_t>(gone[static_cast<std::size_t>(q)])] = gdig[static_cast<std::size_t>(q)];
    return encode(digits, d);
  };
  for (std::int64_t r = 0; r < side_k; ++r) {
    decode(r, d, nk, rk);
    for (std::int64_t c = 0; c < side_k; ++c) {
      decode(c, d, nk, ck);
      Complex acc{};
      for (std::int64_t g = 0; g < side_g; ++g) {
        decode(g, d, ng, gd);
        acc += f.mat()(full_index(rk, gd), full_index(ck, gd));
      }
      out(r, c) = acc;
    }
  }
  return {nk, d, std::move(out)};
}

ManyBodyOperator trace_last(const ManyBodyOperator& f, int count) {
  if (count < 0 || count > f.n()) throw std::out_of_range("trace_last: count out of range");
  if (count == 0) return f;
  // Block-wise trace over contiguous d^count sub-blocks.
  const auto inner = hilbert_dim(f.d(), count);
  const auto side = f.mat().rows() / inner;
  Matrix out(side, side);
  for (Eigen::Index r = 0; r < side; ++r) {
    for (Eigen::Index c = 0; c < side; ++c) {
      out(r, c) = f.mat().block(r * inner, c * inner, inner, inner).trace();
    }
  }
  return {f.n() - count, f.d(), std::move(out)};
}

ManyBodyOperator permute(const ManyBodyOperator& op, std::span<const int> sigma) {
  const int n = op.n();
  const int d = op.d();
  check_permutation(sigma, n);
  const auto side = hilbert_dim(d, n);
  // map[x] = index of x o sigma
  std::vector<std::int64_t> map(static_cast<std::size_t>(side));
  std::vector<int> digits;
  std::vector<int> moved(static_cast<std::size_t>(n));
  for (std::int64_t x = 0; x < side; ++x) {
    decode(x, d, n, digits);
    for (int i = 0; i < n; ++i) moved[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)] - 1)];
    map[static_cast<std::size_t>(x)] = encode(moved, d);
  }
  Matrix out(side, side);
  for (std::int64_t r = 0; r < side; ++r) {
    for (std::int64_t c = 0; c < side; ++c) {
      out(r, c) = op.mat()(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]);
    }
  }
  return {n, d, std::move(out)};
}

ManyBodyOperator symmetrize(const ManyBodyOperator& op) {
  const int n = op.n();
  if (n > 8) throw std::invalid_argument("symmetrize: n! too large");
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 1);
  ManyBodyOperator acc = ManyBodyOperator::zero(n, op.d());
  int count = 0;
  do {
    acc += permute(op, sigma);
    ++count;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  acc *= Complex(1.0 / count);
  return acc;
}

bool is_hermitian(const ManyBodyOperator& op, double tol) {
  const double scale = std::max(op.mat().norm(), 1.0);
  return (op.mat() - op.mat().adjoint()).norm() <= tol * scale;
}

bool is_symmetric(const ManyBodyOperator& op, double tol) {
  const int n = op.n();
  if (n < 2) return true;
  const double scale = std::max(op.mat().norm(), 1.0);
  // Adjacent transpositions generate the symmetric group.
  std::vector<int> sigma(static_cast<std::size_t>(n));
  for (int i = 0; i + 1 < n; ++i) {
    std::iota(sigma.begin(), sigma.end(), 1);
    std::swap(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(i + 1)]);
    if ((permute(op, sigma).mat() - op.mat()).norm() > tol * scale) return false;
  }
  return true;
}

double operator_norm(const ManyBodyOperator& op) {
  Eigen::JacobiSVD<Matrix> svd(op.mat());
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double trace_norm(const ManyBodyOperator& op) {
  Eigen::JacobiSVD<Matrix> svd(op.mat());
  return svd.singularValues().sum();
}

double frobenius_norm(const ManyBodyOperator& op) { return op.mat().norm(); }

double relative_deviation(const ManyBodyOperator& a, const ManyBodyOperator& b, double floor) {
  if (a.n() != b.n() || a.d() != b.d()) throw std::invalid_argument("relative_deviation: shape mismatch");
  return (a.mat() - b.mat()).norm() / std::max(b.mat().norm(), floor);
}

// ---------------------------------------------------------------------------
// OperatorSequence

OperatorSequence::OperatorSequence(int d, std::vector<ManyBodyOperator> items) : d_(d), items_(std::move(items)) {
  if (items_.empty()) throw std::invalid_argument("sequence needs at least sector 0");
  for (std::size_t n = 0; n < items_.size(); ++n) {
    if (items_[n].n() != static_cast<int>(n) || items_[n].d() != d) {
      throw std::invalid_argument("sequence item " + std::to_string(n) + " has n=" + std::to_string(items_[n].n()) +
                                  ", d=" + std::to_string(items_[n].d()));
    }
  }
}

OperatorSequence OperatorSequence::zero(int d, int n_max) {
  std::vector<ManyBodyOperator> items;
  for (int n = 0; n <= n_max; ++n) items.push_back(ManyBodyOperator::zero(n, d));
  return {d, std::move(items)};
}

OperatorSequence OperatorSequence::identity(int d, int n_max) {
  std::vector<ManyBodyOperator> items;
  for (int n = 0; n <= n_max; ++n) items.push_back(ManyBodyOperator::identity(n, d));
  return {d, std::move(items)};
}

OperatorSequence OperatorSequence::truncated(int n_max) const {
  std::vector<ManyBodyOperator> items;
  for (int n = 0; n <= n_max; ++n) {
    items.push_back(n <= this->n_max() ? items_[static_cast<std::size_t>(n)] : ManyBodyOperator::zero(n, d_));
  }
  return {d_, std::move(items)};
}

OperatorSequence& OperatorSequence::operator+=(const OperatorSequence& other) {
  if (other.d_ != d_ || other.n_max() != n_max()) throw std::invalid_argument("sequence shapes differ");
  for (std::size_t n = 0; n < items_.size(); ++n) items_[n] += other.items_[n];
  return *this;
}

OperatorSequence& OperatorSequence::operator*=(Complex factor) {
  for (auto& item : items_) item *= factor;
  return *this;
}

void require_symmetric(const OperatorSequence& seq, double tol) {
  for (int n = 0; n <= seq.n_max(); ++n) {
    if (!is_symmetric(seq[n], tol)) {
      throw std::invalid_argument("sector " + std::to_string(n) + " is not permutation symmetric");
    }
  }
}

double seq_norm_gamma(const OperatorSequence& b, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  double best = 0.0;
  for (int n = 0; n <= b.n_max(); ++n) {
    best = std::max(best, std::pow(gamma, n) / factorial(n) * operator_norm(b[n]));
  }
  return best;
}

double seq_norm_alpha(const OperatorSequence& f, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  double total = 0.0;
  for (int n = 0; n <= f.n_max(); ++n) total += std::pow(alpha, n) * trace_norm(f[n]);
  return total;
}

Complex pair(const OperatorSequence& b, const OperatorSequence& f) {
  if (b.d() != f.d()) throw std::invalid_argument("pair: dimension mismatch");
  const int top = std::min(b.n_max(), f.n_max());
  Complex total{};
  for (int n = 0; n <= top; ++n) {
    // Tr(b f) without forming the product.
    total += (b[n].mat().transpose().cwiseProduct(f[n].mat())).sum() / factorial(n);
  }
  return total;
}

Complex normalizer(const OperatorSequence& f) {
  Complex total{};
  for (int n = 0; n <= f.n_max(); ++n) total += f[n].trace() / factorial(n);
  return total;
}

Complex checked_normalizer(const OperatorSequence& f) {
  const Complex norm = normalizer(f);
  double scale = 0.0;
  for (int n = 0; n <= f.n_max(); ++n) scale += trace_norm(f[n]) / factorial(n);
  if (scale == 0.0 || std::abs(norm) <= 1e-12 * scale) {
    throw DegenerateStateError("normalizing coefficient (I, f) vanishes");
  }
  return norm;
}

Complex mean(const OperatorSequence& b, const OperatorSequence& f) { return pair(b, f) / checked_normalizer(f); }

}  // namespace bbgky
