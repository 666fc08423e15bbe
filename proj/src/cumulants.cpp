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

#include "bbgky/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "bbgky/random.hpp"

namespace bbgky {

namespace {

std::vector<int> iota_labels(int first, int count) {
  std::vector<int> v(static_cast<std::size_t>(std::max(count, 0)));
  std::iota(v.begin(), v.end(), first);
  return v;
}

// Embedded group matrix for the labelled particles (e^{-itH} for states,
// e^{+itH} for observables).
Matrix embedded_group(const Dynamics& dyn, double t, std::span<const int> labels, int n, Direction dir) {
  const int k = static_cast<int>(labels.size());
  const Matrix& U = dyn.propagator(k, t);
  std::vector<int> slots;
  slots.reserve(labels.size());
  for (int label : labels) slots.push_back(label - 1);
  const Matrix W = dir == Direction::VonNeumann ? U : Matrix(U.adjoint());
  if (k == n) {
    // Full support: permute the slot order only when needed.
    if (std::is_sorted(slots.begin(), slots.end())) return W;
  }
  return embed_matrix(W, dyn.d(), slots, n);
}

void conjugate_in_place(const Matrix& W, Matrix& x) { x = W * x * W.adjoint(); }

void check_labels(std::span<const int> labels, int n) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int label : labels) {
    if (label < 1 || label > n) throw std::out_of_range("label " + std::to_string(label) + " outside 1.." + std::to_string(n));
    if (seen[static_cast<std::size_t>(label - 1)]) throw std::invalid_argument("overlapping indices in cumulant arguments");
    seen[static_cast<std::size_t>(label - 1)] = true;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

ClusterArgs::ClusterArgs(std::vector<ClusterArg> args) : args_(std::move(args)) {
  std::vector<int> all = decluster();
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw std::invalid_argument("overlapping indices in cumulant arguments");
  }
  for (const auto& a : args_) {
    if (!a.is_cluster && a.labels.size() != 1) throw std::invalid_argument("a bare argument carries exactly one index");
  }
}

ClusterArgs ClusterArgs::singles(std::vector<int> labels) {
  std::vector<ClusterArg> args;
  for (int label : labels) args.push_back(ClusterArg::single(label));
  return ClusterArgs(std::move(args));
}

ClusterArgs ClusterArgs::clustered(std::vector<int> cluster, std::vector<int> singles) {
  std::vector<ClusterArg> args;
  args.push_back(ClusterArg::cluster(std::move(cluster)));
  for (int label : singles) args.push_back(ClusterArg::single(label));
  return ClusterArgs(std::move(args));
}

std::vector<int> ClusterArgs::decluster() const {
  std::vector<int> out;
  for (const auto& a : args_) out.insert(out.end(), a.labels.begin(), a.labels.end());
  return out;
}

std::vector<int> ClusterArgs::decluster(std::span<const int> positions) const {
  std::vector<int> out;
  for (int p : positions) {
    const auto& labels = args_.at(static_cast<std::size_t>(p)).labels;
    out.insert(out.end(), labels.begin(), labels.end());
  }
  return out;
}

std::vector<ClusterArgs> enumerate_cluster_args(int total) {
  if (total < 1 || total > kMaxPartitionSize) throw std::out_of_range("enumerate_cluster_args: total out of range");
  std::vector<ClusterArgs> out;
  for (const auto& partition : partitions_of(iota_labels(1, total))) {
    std::vector<std::size_t> singleton_blocks;
    for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
      if (partition.blocks[b].size() == 1) singleton_blocks.push_back(b);
    }
    for (std::uint32_t mask = 0; mask < (1u << singleton_blocks.size()); ++mask) {
      std::vector<ClusterArg> args;
      for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
        const auto& block = partition.blocks[b];
        bool bare = false;
        if (block.size() == 1) {
          const auto pos = std::find(singleton_blocks.begin(), singleton_blocks.end(), b) - singleton_blocks.begin();
          bare = ((mask >> pos) & 1u) == 0;
        }
        args.push_back(bare ? ClusterArg::single(block.front()) : ClusterArg::cluster(block));
      }
      out.emplace_back(std::move(args));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ManyBodyOperator group_on(const Dynamics& dyn, double t, std::span<const int> labels, const ManyBodyOperator& target,
                          Direction dir) {
  check_labels(labels, target.n());
  if (labels.empty()) return target;
  Matrix x = target.mat();
  conjugate_in_place(embedded_group(dyn, t, labels, target.n(), dir), x);
  return {target.n(), target.d(), std::move(x)};
}

ManyBodyOperator apply_cumulant(const Dynamics& dyn, const CumulantSpec& spec, const ManyBodyOperator& target,
                                BlockOrder order) {
  const int n = target.n();
  const auto labels = spec.args.decluster();
  check_labels(labels, n);
  if (static_cast<int>(labels.size()) > dyn.max_particles()) {
    throw std::out_of_range("cumulant particle count exceeds n_max");
  }
  const int m = static_cast<int>(spec.args.size());
  if (m == 0) throw std::invalid_argument("cumulant needs at least one argument");

  Matrix total = Matrix::Zero(target.mat().rows(), target.mat().cols());
  std::vector<std::vector<int>> blocks;
  for_each_rgs(m, [&](std::span<const int> rgs, int nblocks) {
    blocks.assign(static_cast<std::size_t>(nblocks), {});
    for (int i = 0; i < m; ++i) blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i);
    if (order == BlockOrder::Reversed) std::reverse(blocks.begin(), blocks.end());
    Matrix term = target.mat();
    for (const auto& block : blocks) {
      const auto theta = spec.args.decluster(block);
      if (theta.empty()) continue;  // the group of an empty cluster is the identity
      conjugate_in_place(embedded_group(dyn, spec.t, theta, n, spec.direction), term);
    }
    total += static_cast<double>(partition_weight(nblocks)) * term;
  });
  return {n, target.d(), std::move(total)};
}

ManyBodyOperator cumulant(const Dynamics& dyn, const CumulantSpec& spec, const ManyBodyOperator& target,
                          BlockOrder order) {
  if (spec.args.total() != target.n()) {
    throw std::invalid_argument("cumulant: target has " + std::to_string(target.n()) + " particles, arguments carry " +
                                std::to_string(spec.args.total()));
  }
  return apply_cumulant(dyn, spec, target, order);
}

ManyBodyOperator cluster_expansion_rhs(const Dynamics& dyn, double t, const ClusterArgs& args,
                                       const ManyBodyOperator& target, Direction dir) {
  if (args.total() != target.n()) throw std::invalid_argument("cluster_expansion_rhs: particle count mismatch");
  const int m = static_cast<int>(args.size());
  ManyBodyOperator total = ManyBodyOperator::zero(target.n(), target.d());
  for_each_rgs(m, [&](std::span<const int> rgs, int nblocks) {
    std::vector<std::vector<ClusterArg>> blocks(static_cast<std::size_t>(nblocks));
    for (int i = 0; i < m; ++i) blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(args[static_cast<std::size_t>(i)]);
    ManyBodyOperator term = target;
    for (auto& block : blocks) {
      term = apply_cumulant(dyn, CumulantSpec{t, ClusterArgs(std::move(block)), dir}, term);
    }
    total += term;
  });
  return total;
}

ManyBodyOperator reduced_cumulant(const Dynamics& dyn, double t, int s, int n, Direction dir,
                                  const ManyBodyOperator& target) {
  if (s < 1 || n < 0) throw std::out_of_range("reduced_cumulant: need s >= 1 and n >= 0");
  if (s + n > dyn.max_particles()) throw std::out_of_range("reduced_cumulant: s + n exceeds n_max");
  if (target.n() != s + n) throw std::invalid_argument("reduced_cumulant: target must carry s + n particles");
  ManyBodyOperator total = ManyBodyOperator::zero(target.n(), target.d());
  for (int k = 0; k <= n; ++k) {
    const double coeff = (k % 2 == 0 ? 1.0 : -1.0) * binomial(n, k);
    const auto leading = iota_labels(1, s + n - k);
    total += group_on(dyn, t, leading, target, dir) * Complex(coeff);
  }
  return total;
}

ManyBodyOperator reduced_cumulant_subsets(const Dynamics& dyn, double t, std::span<const int> cluster,
                                          std::span<const int> singles, Direction dir,
                                          const ManyBodyOperator& target) {
  std::vector<int> all(cluster.begin(), cluster.end());
  all.insert(all.end(), singles.begin(), singles.end());
  check_labels(all, target.n());
  ManyBodyOperator total = ManyBodyOperator::zero(target.n(), target.d());
  for (const auto& Y : subsets_of(singles)) {
    std::vector<int> labels(cluster.begin(), cluster.end());
    labels.insert(labels.end(), Y.begin(), Y.end());
    const int missing = static_cast<int>(singles.size() - Y.size());
    total += group_on(dyn, t, labels, target, dir) * Complex(missing % 2 == 0 ? 1.0 : -1.0);
  }
  return total;
}

// ---------------------------------------------------------------------------

namespace {

double superoperator_norm(const ManyBodyOperator& op, Direction dir) {
  return dir == Direction::Heisenberg ? operator_norm(op) : trace_norm(op);
}

NormBoundReport sample_bound(const Dynamics& dyn, const CumulantSpec& spec, int particles, double bound,
                             std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  NormBoundReport report;
  report.t = spec.t;
  report.direction = spec.direction;
  report.samples = samples;
  report.bound = bound;
  for (int k = 0; k < samples; ++k) {
    auto b = random_hermitian(particles, dyn.d(), rng);
    b *= Complex(1.0 / superoperator_norm(b, spec.direction));
    const auto out = cumulant(dyn, spec, b);
    report.max_ratio = std::max(report.max_ratio, superoperator_norm(out, spec.direction));
  }
  report.pass = report.max_ratio <= report.bound;
  return report;
}

}  // namespace

NormBoundReport check_norm_bound(const Dynamics& dyn, int s, double t, Direction dir, std::uint64_t seed,
                                 int samples) {
  if (s < 1 || s > dyn.max_particles()) throw std::out_of_range("check_norm_bound: s out of range");
  CumulantSpec spec{t, ClusterArgs::singles(iota_labels(1, s)), dir};
  auto report = sample_bound(dyn, spec, s, factorial(s) * std::exp(static_cast<double>(s)), seed, samples);
  report.s = s;
  return report;
}

NormBoundReport check_clustered_norm_bound(const Dynamics& dyn, int s, int n, double t, Direction dir,
                                           std::uint64_t seed, int samples) {
  if (s < 1 || n < 0 || s + n > dyn.max_particles()) throw std::out_of_range("check_clustered_norm_bound: range");
  CumulantSpec spec{t, ClusterArgs::clustered(iota_labels(1, s), iota_labels(s + 1, n)), dir};
  auto report = sample_bound(dyn, spec, s + n, factorial(n) * std::exp(static_cast<double>(n + 2)), seed, samples);
  report.s = s;
  report.n = n;
  return report;
}

}  // namespace bbgky
