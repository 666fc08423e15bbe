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

#include "bbgky/json_io.hpp"

#include <stdexcept>

namespace bbgky {

nlohmann::json to_json(const ManyBodyOperator& op) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < op.mat().rows(); ++r) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < op.mat().cols(); ++c) {
      re_row.push_back(op.mat()(r, c).real());
      im_row.push_back(op.mat()(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"d", op.d()}, {"n", op.n()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ManyBodyOperator operator_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("n") || !j.contains("re")) {
    throw std::invalid_argument("matrix object needs \"d\", \"n\" and \"re\"");
  }
  const int d = j.at("d").get<int>();
  const int n = j.at("n").get<int>();
  const auto& re = j.at("re");
  const auto side = static_cast<Eigen::Index>(re.size());
  Matrix mat = Matrix::Zero(side, side);
  for (Eigen::Index r = 0; r < side; ++r) {
    const auto& row = re.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != side) throw std::invalid_argument("matrix rows must be square");
    for (Eigen::Index c = 0; c < side; ++c) mat(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  if (j.contains("im")) {
    const auto& im = j.at("im");
    if (static_cast<Eigen::Index>(im.size()) != side) throw std::invalid_argument("\"im\" shape differs from \"re\"");
    for (Eigen::Index r = 0; r < side; ++r) {
      const auto& row = im.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != side) throw std::invalid_argument("\"im\" shape differs from \"re\"");
      for (Eigen::Index c = 0; c < side; ++c) mat(r, c) += Complex(0.0, row.at(static_cast<std::size_t>(c)).get<double>());
    }
  }
  return {n, d, std::move(mat)};
}

nlohmann::json to_json(const OperatorSequence& seq) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& item : seq.items()) arr.push_back(to_json(item));
  return arr;
}

OperatorSequence sequence_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("sequence must be a non-empty array");
  std::vector<ManyBodyOperator> items;
  for (const auto& item : j) items.push_back(operator_from_json(item));
  const int d = items.front().d();
  return {d, std::move(items)};
}

}  // namespace bbgky
