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

#include "bbgky/partitions.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bbgky {

namespace {

void check_size(int m) {
  if (m < 0) throw std::invalid_argument("negative set size");
  if (m > kMaxPartitionSize) {
    throw std::invalid_argument("set size " + std::to_string(m) + " exceeds cap " + std::to_string(kMaxPartitionSize));
  }
}

std::int64_t factorial_exact(int n) {
  std::int64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

void for_each_rgs(int m, const std::function<void(std::span<const int>, int)>& visit) {
  check_size(m);
  if (m == 0) {
    visit({}, 0);
    return;
  }
  std::vector<int> a(static_cast<std::size_t>(m), 0);
  // prefix_max[i] = max(a[0..i])
  std::vector<int> prefix_max(static_cast<std::size_t>(m), 0);
  while (true) {
    visit(a, prefix_max.back() + 1);
    // Rightmost position that can still grow.
    int i = m - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) return;
    ++a[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < m; ++j) {
      a[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(i)];
    }
  }
}

std::vector<Partition> partitions_of(std::span<const int> items) {
  std::vector<int> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("partitions_of: duplicate items");
  }
  std::vector<Partition> out;
  for_each_rgs(static_cast<int>(items.size()), [&](std::span<const int> rgs, int blocks) {
    Partition p;
    p.blocks.resize(static_cast<std::size_t>(blocks));
    for (std::size_t i = 0; i < rgs.size(); ++i) p.blocks[static_cast<std::size_t>(rgs[i])].push_back(items[i]);
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<std::vector<int>> subsets_of(std::span<const int> items, bool nonempty) {
  const int m = static_cast<int>(items.size());
  if (m > 30) throw std::invalid_argument("subsets_of: too many items");
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = nonempty ? 1u : 0u; mask < (1u << m); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) subset.push_back(items[static_cast<std::size_t>(i)]);
    }
    out.push_back(std::move(subset));
  }
  return out;
}

std::int64_t stirling2(int s, int k) {
  check_size(s);
  if (k < 0 || k > s) throw std::invalid_argument("stirling2: need 0 <= k <= s");
  // S(n, j) = j S(n-1, j) + S(n-1, j-1)
  std::vector<std::int64_t> row(static_cast<std::size_t>(s + 1), 0);
  row[0] = 1;
  for (int n = 1; n <= s; ++n) {
    for (int j = n; j >= 1; --j) row[static_cast<std::size_t>(j)] = j * row[static_cast<std::size_t>(j)] + row[static_cast<std::size_t>(j - 1)];
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(k)];
}

std::int64_t bell(int s) {
  std::int64_t total = 0;
  for (int k = 0; k <= s; ++k) total += stirling2(s, k);
  return total;
}

std::int64_t partition_weight(int blocks) {
  if (blocks < 1) throw std::invalid_argument("partition_weight: need at least one block");
  check_size(blocks);
  const std::int64_t magnitude = factorial_exact(blocks - 1);
  return (blocks - 1) % 2 == 0 ? magnitude : -magnitude;
}

std::int64_t partition_weight(const Partition& p) { return partition_weight(p.size()); }

std::int64_t signed_identity(int s) {
  if (s < 1) throw std::invalid_argument("signed_identity: need s >= 1");
  std::int64_t total = 0;
  for_each_rgs(s, [&](std::span<const int>, int blocks) { total += partition_weight(blocks); });
  return total;
}

std::int64_t alternating_subset_identity(int m) {
  std::int64_t total = 0;
  for_each_rgs(m, [&](std::span<const int>, int blocks) {
    const std::int64_t magnitude = factorial_exact(blocks);
    total += blocks % 2 == 0 ? magnitude : -magnitude;
  });
  return total;
}

}  // namespace bbgky
