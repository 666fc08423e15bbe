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
#include <span>
#include <vector>

#include "bbgky/dynamics.hpp"
#include "bbgky/partitions.hpp"

namespace bbgky {

/// One cumulant argument: a bare particle index or a cluster of indices that
/// always moves as a unit. Labels are 1-based particle indices.
struct ClusterArg {
  std::vector<int> labels;
  bool is_cluster = false;

  static ClusterArg single(int label) { return {{label}, false}; }
  static ClusterArg cluster(std::vector<int> labels) { return {std::move(labels), true}; }
};

class ClusterArgs {
 public:
  ClusterArgs() = default;
  explicit ClusterArgs(std::vector<ClusterArg> args);

  /// (j_1, ..., j_m), all bare.
  static ClusterArgs singles(std::vector<int> labels);
  /// ({cluster}, j_1, ..., j_m).
  static ClusterArgs clustered(std::vector<int> cluster, std::vector<int> singles);

  std::size_t size() const { return args_.size(); }
  const ClusterArg& operator[](std::size_t i) const { return args_.at(i); }
  const std::vector<ClusterArg>& args() const { return args_; }

  /// The declustering map: flattens every argument into its labels.
  std::vector<int> decluster() const;
  /// Declustering restricted to the arguments at `positions`.
  std::vector<int> decluster(std::span<const int> positions) const;
  int total() const { return static_cast<int>(decluster().size()); }

 private:
  std::vector<ClusterArg> args_;
};

/// Every argument list over the labels 1..total: each set partition of the
/// labels, with singleton blocks taken both bare and as one-element clusters.
std::vector<ClusterArgs> enumerate_cluster_args(int total);

struct CumulantSpec {
  double t = 0.0;
  ClusterArgs args;
  Direction direction = Direction::Heisenberg;
};

enum class BlockOrder { Canonical, Reversed };

/// The group of the labelled particles acting on a larger target (identity on
/// the remaining slots). Labels are 1-based slots of `target`.
ManyBodyOperator group_on(const Dynamics& dyn, double t, std::span<const int> labels,
                          const ManyBodyOperator& target, Direction dir);

/// Cumulant of the groups of operators:
///   sum_P (-1)^{|P|-1} (|P|-1)! prod_{X in P} G_{|theta(X)|}(t, theta(X))
/// applied to `target`. Requires the declustered labels to be exactly
/// 1..target.n().
ManyBodyOperator cumulant(const Dynamics& dyn, const CumulantSpec& spec, const ManyBodyOperator& target,
                          BlockOrder order = BlockOrder::Canonical);

/// Same superoperator, but the labels may be any subset of 1..target.n();
/// the other slots are left alone.
ManyBodyOperator apply_cumulant(const Dynamics& dyn, const CumulantSpec& spec, const ManyBodyOperator& target,
                                BlockOrder order = BlockOrder::Canonical);

/// sum_P prod_{X in P} cumulant(X) applied to `target`. Equals the full group
/// on the declustered labels whenever the cumulants invert the cluster
/// expansion.
ManyBodyOperator cluster_expansion_rhs(const Dynamics& dyn, double t, const ClusterArgs& args,
                                       const ManyBodyOperator& target, Direction dir);

/// Reduced cumulant of order 1+n for a cluster of s particles:
///   sum_k (-1)^k C(n,k) G_{s+n-k}(t, 1..s+n-k)
/// with the group acting on the leading slots and the identity on the rest.
/// target.n() must be s + n.
ManyBodyOperator reduced_cumulant(const Dynamics& dyn, double t, int s, int n, Direction dir,
                                  const ManyBodyOperator& target);

/// Subset form of the reduced cumulant on arbitrary labels:
///   sum_{Y subset singles} (-1)^{|singles \ Y|} G(cluster u Y).
ManyBodyOperator reduced_cumulant_subsets(const Dynamics& dyn, double t, std::span<const int> cluster,
                                          std::span<const int> singles, Direction dir,
                                          const ManyBodyOperator& target);

/// Sampled lower bound on the cumulant superoperator norm versus the
/// analytic bound. Observables use the operator norm, states the trace norm.
struct NormBoundReport {
  int s = 0;            // cluster size (all-singleton check: number of particles)
  int n = 0;            // extra particles (clustered check only)
  double t = 0.0;
  Direction direction = Direction::Heisenberg;
  int samples = 0;
  double max_ratio = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// ||A_s(t) b|| / ||b|| over random Hermitian b, against s! e^s.
NormBoundReport check_norm_bound(const Dynamics& dyn, int s, double t, Direction dir, std::uint64_t seed = 20240,
                                 int samples = 20);

/// ||A_{1+n}(t, {1..s}, s+1..s+n) f|| / ||f|| against n! e^{n+2}.
NormBoundReport check_clustered_norm_bound(const Dynamics& dyn, int s, int n, double t, Direction dir,
                                           std::uint64_t seed = 20240, int samples = 20);

}  // namespace bbgky
