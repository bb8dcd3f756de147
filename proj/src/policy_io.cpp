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

#include "smallaug/policy_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smallaug/errors.hpp"

namespace smallaug {

using nlohmann::json;
using nlohmann::ordered_json;

tpe::ParamSpace policy_space() {
  tpe::ParamSpace space;
  space.dims.push_back(tpe::Categorical{{"single", "multiple", "all"}});
  space.dims.push_back(tpe::Uniform{0.0, 1.0});
  space.dims.push_back(tpe::IntUniform{1, 3});
  return space;
}

Policy point_to_policy(const tpe::Point& point) {
  Policy policy;
  policy.op = static_cast<Operation>(std::get<int64_t>(point.at(0)));
  policy.p = std::get<double>(point.at(1));
  policy.m = static_cast<uint8_t>(std::get<int64_t>(point.at(2)));
  return policy;
}

tpe::Point policy_to_point(const Policy& policy) {
  return tpe::Point{tpe::Value{static_cast<int64_t>(policy.op)}, tpe::Value{policy.p},
                    tpe::Value{static_cast<int64_t>(policy.m)}};
}

namespace {

Policy parse_policy_object(const json& entry, const std::string& path) {
  if (!entry.is_object()) {
    throw SchemaError(path, "expected object");
  }
  Policy policy;
  if (!entry.contains("op") || !entry.at("op").is_string()) {
    throw SchemaError(path + ".op", "expected string");
  }
  const auto op = operation_from_string(entry.at("op").get<std::string>());
  if (!op.has_value()) {
    throw SchemaError(path + ".op", "expected \"single\", \"multiple\" or \"all\"");
  }
  policy.op = *op;
  if (!entry.contains("p") || !entry.at("p").is_number()) {
    throw SchemaError(path + ".p", "expected number");
  }
  policy.p = entry.at("p").get<double>();
  if (!(policy.p >= 0.0 && policy.p <= 1.0)) {
    throw SchemaError(path + ".p", "probability must be in [0, 1]");
  }
  if (!entry.contains("m") || !entry.at("m").is_number_integer()) {
    throw SchemaError(path + ".m", "expected integer");
  }
  const int64_t m = entry.at("m").get<int64_t>();
  if (m < 1 || m > 3) {
    throw SchemaError(path + ".m", "paste count must be in {1, 2, 3}");
  }
  policy.m = static_cast<uint8_t>(m);
  return policy;
}

}  // namespace

std::vector<Policy> parse_policies(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  const json* entries = nullptr;
  std::string base;
  if (doc.is_array()) {
    entries = &doc;
    base = "$";
  } else if (doc.is_object() && doc.contains("policies") && doc.at("policies").is_array()) {
    entries = &doc.at("policies");
    base = "policies";
  } else {
    throw SchemaError("$", "expected a policy array or an object with a policies array");
  }
  std::vector<Policy> policies;
  policies.reserve(entries->size());
  for (size_t i = 0; i < entries->size(); ++i) {
    policies.push_back(parse_policy_object((*entries)[i], base + "[" + std::to_string(i) + "]"));
  }
  return policies;
}

std::vector<Policy> load_policy_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_policies(buf.str());
}

void write_trials_jsonl(const std::string& path, std::span<const tpe::Trial> trials) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  for (const tpe::Trial& t : trials) {
    const Policy policy = point_to_policy(t.params);
    ordered_json line;
    line["index"] = t.index;
    line["op"] = std::string(to_string(policy.op));
    line["p"] = policy.p;
    line["m"] = static_cast<int>(policy.m);
    line["loss"] = t.loss;
    out << line.dump() << "\n";
  }
  if (!out) {
    throw IoError("write failed for '" + path + "'");
  }
}

std::vector<TrialRecord> read_trials_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::vector<TrialRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    json entry;
    try {
      entry = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError(path + ":" + std::to_string(line_no), std::string("invalid JSON: ") + e.what());
    }
    TrialRecord rec;
    const std::string where = path + ":" + std::to_string(line_no);
    if (!entry.contains("index") || !entry.at("index").is_number_integer()) {
      throw SchemaError(where + ".index", "expected integer");
    }
    rec.index = entry.at("index").get<uint64_t>();
    rec.policy = parse_policy_object(entry, where);
    if (!entry.contains("loss") || !entry.at("loss").is_number()) {
      throw SchemaError(where + ".loss", "expected number");
    }
    rec.loss = entry.at("loss").get<double>();
    if (!std::isfinite(rec.loss)) {
      throw SchemaError(where + ".loss", "loss must be finite");
    }
    records.push_back(rec);
  }
  return records;
}

}  // namespace smallaug
