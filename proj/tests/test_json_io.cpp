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

#include <random>

#include "bbgky/json_io.hpp"
#include "bbgky/random.hpp"
#include "test_support.hpp"

using namespace bbgky;

TEST_CASE("operator JSON round trip") {
  std::mt19937_64 rng(1);
  const auto op = random_matrix(2, 2, rng);
  const auto j = to_json(op);
  CHECK(j.at("n") == 2);
  CHECK(j.at("d") == 2);
  CHECK(j.at("re").size() == 4);
  const auto back = operator_from_json(nlohmann::json::parse(j.dump()));
  CHECK((back.mat() - op.mat()).norm() == 0.0);
}

TEST_CASE("imaginary part is optional") {
  const auto j = nlohmann::json::parse(R"({"d":2,"n":1,"re":[[1,0],[0,-1]]})");
  const auto op = operator_from_json(j);
  CHECK(op.mat()(1, 1) == Complex(-1.0));
}

TEST_CASE("malformed operators are rejected") {
  CHECK_THROWS(operator_from_json(nlohmann::json::parse(R"({"d":2,"n":1,"re":[[1,0]]})")));
  CHECK_THROWS(operator_from_json(nlohmann::json::parse(R"({"d":2,"n":2,"re":[[1,0],[0,1]]})")));
}

TEST_CASE("sequence JSON round trip") {
  std::mt19937_64 rng(2);
  const auto seq = random_state_sequence(2, 2, rng);
  const auto back = sequence_from_json(to_json(seq));
  CHECK(back.n_max() == 2);
  for (int n = 0; n <= 2; ++n) CHECK((back[n].mat() - seq[n].mat()).norm() == 0.0);
}
