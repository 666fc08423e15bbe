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

#include <algorithm>
#include <set>

#include "bbgky/partitions.hpp"
#include "test_support.hpp"

using namespace bbgky;

namespace {

// Bell numbers from the triangle recurrence, independent of stirling2.
std::int64_t bell_triangle(int s) {
  std::vector<std::int64_t> row{1};
  for (int i = 1; i <= s; ++i) {
    std::vector<std::int64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = next;
  }
  return row.front();
}

std::vector<int> range(int s) {
  std::vector<int> v(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  return v;
}

}  // namespace

TEST_CASE("partitions_of enumerates every partition once") {
  const std::vector<int> one{1};
  const auto p1 = partitions_of(one);
  REQUIRE(p1.size() == 1);
  CHECK(p1[0].blocks == std::vector<std::vector<int>>{{1}});
  CHECK(partitions_of(range(3)).size() == 5);
  CHECK(partitions_of(range(5)).size() == 52);

  for (int s = 1; s <= 8; ++s) {
    const auto parts = partitions_of(range(s));
    CHECK(static_cast<std::int64_t>(parts.size()) == bell_triangle(s));
    std::set<std::vector<std::vector<int>>> unique;
    for (const auto& p : parts) {
      std::vector<int> all;
      for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        CHECK_FALSE(p.blocks[b].empty());
        CHECK(std::is_sorted(p.blocks[b].begin(), p.blocks[b].end()));
        if (b > 0) CHECK(p.blocks[b - 1].front() < p.blocks[b].front());
        all.insert(all.end(), p.blocks[b].begin(), p.blocks[b].end());
      }
      std::sort(all.begin(), all.end());
      CHECK(all == range(s));
      unique.insert(p.blocks);
    }
    CHECK(unique.size() == parts.size());
  }
  const std::vector<int> dup{1, 2, 1};
  CHECK_THROWS(partitions_of(dup));
}

TEST_CASE("subsets") {
  const std::vector<int> empty{};
  CHECK(subsets_of(empty) == std::vector<std::vector<int>>{{}});
  CHECK(subsets_of(range(3)).size() == 8);
  const std::vector<int> two{1, 2};
  CHECK(subsets_of(two, true) == std::vector<std::vector<int>>{{1}, {2}, {1, 2}});
}

TEST_CASE("Stirling and Bell numbers") {
  CHECK(stirling2(3, 3) == 1);
  CHECK(stirling2(3, 2) == 3);
  CHECK(stirling2(4, 2) == 7);
  CHECK_THROWS(stirling2(2, 3));
  for (int s = 1; s <= 8; ++s) {
    const auto parts = partitions_of(range(s));
    std::int64_t total = 0;
    for (int k = 0; k <= s; ++k) {
      const auto count = std::count_if(parts.begin(), parts.end(), [k](const Partition& p) { return p.size() == k; });
      CHECK(stirling2(s, k) == count);
      total += stirling2(s, k);
    }
    CHECK(total == bell(s));
    CHECK(bell(s) == bell_triangle(s));
  }
}

TEST_CASE("partition weights") {
  CHECK(partition_weight(Partition{{{1, 2, 3}}}) == 1);
  CHECK(partition_weight(Partition{{{1}, {2, 3}}}) == -1);
  CHECK(partition_weight(Partition{{{1}, {2}, {3}}}) == 2);
  CHECK(partition_weight(5) == 24);
}

TEST_CASE("signed and alternating identities") {
  CHECK(signed_identity(1) == 1);
  CHECK(signed_identity(3) == 0);
  CHECK(signed_identity(6) == 0);
  CHECK(alternating_subset_identity(0) == 1);
  CHECK(alternating_subset_identity(1) == -1);
  CHECK(alternating_subset_identity(4) == 1);
  for (int s = 1; s <= 8; ++s) CHECK(signed_identity(s) == (s == 1 ? 1 : 0));
  for (int m = 0; m <= 8; ++m) CHECK(alternating_subset_identity(m) == (m % 2 == 0 ? 1 : -1));
}

TEST_CASE("restricted growth strings") {
  int visits = 0;
  for_each_rgs(0, [&](std::span<const int> rgs, int blocks) {
    CHECK(rgs.empty());
    CHECK(blocks == 0);
    ++visits;
  });
  CHECK(visits == 1);
  visits = 0;
  for_each_rgs(4, [&](std::span<const int> rgs, int blocks) {
    CHECK(rgs[0] == 0);
    int seen = 0;
    for (int v : rgs) {
      CHECK(v <= seen);
      seen = std::max(seen, v + 1);
    }
    CHECK(seen == blocks);
    ++visits;
  });
  CHECK(visits == 15);
}
