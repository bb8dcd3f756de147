// Copyright 2026 The smallaug Authors
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

#ifndef SMALLAUG_POLICY_IO_HPP_
#define SMALLAUG_POLICY_IO_HPP_

#include <span>
#include <string>
#include <vector>

#include "smallaug/augment.hpp"
#include "smallaug/tpe.hpp"

namespace smallaug {

/// The searched space: operation x p x m.
tpe::ParamSpace policy_space();

Policy point_to_policy(const tpe::Point& point);
tpe::Point policy_to_point(const Policy& policy);

/// Policy file: either a bare array [{"op","p","m"}, ...] or an object
/// {"policies": [...]} as written by the search. Unknown fields (provenance)
/// are ignored. Throws SchemaError naming the offending field.
std::vector<Policy> parse_policies(const std::string& json_text);
std::vector<Policy> load_policy_file(const std::string& path);

/// Trial history, one JSON object per line:
///   {"index":n,"op":"...","p":f,"m":k,"loss":f}
void write_trials_jsonl(const std::string& path, std::span<const tpe::Trial> trials);

struct TrialRecord {
  uint64_t index = 0;
  Policy policy;
  double loss = 0.0;
};

std::vector<TrialRecord> read_trials_jsonl(const std::string& path);

}  // namespace smallaug

#endif  // SMALLAUG_POLICY_IO_HPP_
