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
#include <functional>
#include <span>
#include <vector>

namespace bbgky {

/// Set partition of a ground list. Blocks appear in order of their first
/// element in the ground list; elements keep ground-list order.
struct Partition {
  std::vector<std::vector<int>> blocks;

  int size() const { return static_cast<int>(blocks.size()); }
};

/// Largest ground-set size accepted by the exact integer routines. Keeps
/// (|P| - 1)! and Bell numbers inside 64 bits.
inline constexpr int kMaxPartitionSize = 12;

/// Calls `visit(rgs, blocks)` for every restricted-growth string of length m:
/// rgs[i] is the block of element i, rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i)).
void for_each_rgs(int m, const std::function<void(std::span<const int>, int)>& visit);

/// Every set partition of `items`, in restricted-growth order.
std::vector<Partition> partitions_of(std::span<const int> items);

/// All 2^|items| subsets in bitmask order (bit i selects items[i]).
std::vector<std::vector<int>> subsets_of(std::span<const int> items, bool nonempty = false);

std::int64_t stirling2(int s, int k);
std::int64_t bell(int s);

/// (-1)^{|P|-1} (|P|-1)!
std::int64_t partition_weight(const Partition& p);
std::int64_t partition_weight(int blocks);

/// sum over partitions of (1..s) of (-1)^{|P|-1}(|P|-1)!, by enumeration.
std::int64_t signed_identity(int s);

/// sum over partitions of an m-element set of (-1)^{|P|}|P|!, by enumeration.
std::int64_t alternating_subset_identity(int m);

}  // namespace bbgky
