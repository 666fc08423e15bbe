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

#include <json.hpp>

#include "bbgky/tensorspace.hpp"

namespace bbgky {

/// {"d": d, "n": n, "re": [[...]], "im": [[...]]}, row-major.
nlohmann::json to_json(const ManyBodyOperator& op);
ManyBodyOperator operator_from_json(const nlohmann::json& j);

/// Array of operator objects, sector 0 first.
nlohmann::json to_json(const OperatorSequence& seq);
OperatorSequence sequence_from_json(const nlohmann::json& j);

}  // namespace bbgky
