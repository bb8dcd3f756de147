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

#include "smallaug/annotations.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "smallaug/errors.hpp"

namespace smallaug {

namespace {

bool parse_double(const std::string& token, double& out) {
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end != nullptr && *end == '\0' && end != token.c_str();
}

bool parse_int(const std::string& token, long& out) {
  char* end = nullptr;
  out = std::strtol(token.c_str(), &end, 10);
  return end != nullptr && *end == '\0' && end != token.c_str();
}

bool is_header_line(const std::string& line) {
  return line.rfind("imagesource", 0) == 0 || line.rfind("gsd", 0) == 0;
}

}  // namespace

std::vector<Instance> parse_dota(std::string_view text, uint32_t image_width,
                                 uint32_t image_height) {
  std::vector<Instance> instances;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (fields >> tok) {
      tokens.push_back(tok);
    }
    if (tokens.empty() || is_header_line(line)) {
      continue;
    }
    if (tokens.size() < 10) {
      throw MalformedLine(line_no, "expected at least 10 fields, got " +
                                       std::to_string(tokens.size()));
    }
    double coords[8];
    for (int i = 0; i < 8; ++i) {
      if (!parse_double(tokens[i], coords[i])) {
        throw MalformedLine(line_no, "non-numeric coordinate '" + tokens[i] + "'");
      }
    }
    long difficult = 0;
    if (!parse_int(tokens[9], difficult)) {
      throw MalformedLine(line_no, "non-numeric difficult flag '" + tokens[9] + "'");
    }

    // Axis-aligned hull of the quad, clipped to the image.
    double min_x = coords[0], max_x = coords[0];
    double min_y = coords[1], max_y = coords[1];
    for (int i = 1; i < 4; ++i) {
      min_x = std::min(min_x, coords[2 * i]);
      max_x = std::max(max_x, coords[2 * i]);
      min_y = std::min(min_y, coords[2 * i + 1]);
      max_y = std::max(max_y, coords[2 * i + 1]);
    }
    const double x0 = std::max(0.0, min_x);
    const double y0 = std::max(0.0, min_y);
    const double x1 = std::min(static_cast<double>(image_width), max_x);
    const double y1 = std::min(static_cast<double>(image_height), max_y);
    if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) {
      throw DegenerateBox(line_no, "clipped hull is empty");
    }

    Instance inst;
    inst.bbox = BBox{x0, y0, x1 - x0, y1 - y0};
    inst.category = tokens[8];
    inst.difficult = difficult != 0;
    inst.origin = Origin::Original;
    instances.push_back(std::move(inst));
  }
  return instances;
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& require_field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(path + "." + key, "missing field");
  }
  return obj.at(key);
}

std::string require_id(const json& v, const std::string& path) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_number_integer()) {
    return std::to_string(v.get<int64_t>());
  }
  throw SchemaError(path, "expected string or integer id");
}

uint32_t require_dimension(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<int64_t>() <= 0) {
    throw SchemaError(path, "expected positive integer");
  }
  return static_cast<uint32_t>(v.get<int64_t>());
}

double require_number(const json& v, const std::string& path) {
  if (!v.is_number()) {
    throw SchemaError(path, "expected number");
  }
  return v.get<double>();
}

const json& require_array(const json& doc, const char* key) {
  const json& v = require_field(doc, key, "$");
  if (!v.is_array()) {
    throw SchemaError(std::string("$.") + key, "expected array");
  }
  return v;
}

}  // namespace

Dataset parse_coco(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw SchemaError("$", "expected top-level object");
  }

  Dataset d;
  const json& categories = require_array(doc, "categories");
  std::unordered_map<int64_t, std::string> category_by_id;
  for (size_t i = 0; i < categories.size(); ++i) {
    const std::string path = "categories[" + std::to_string(i) + "]";
    const json& c = categories[i];
    const json& id = require_field(c, "id", path);
    if (!id.is_number_integer()) {
      throw SchemaError(path + ".id", "expected integer");
    }
    const json& name = require_field(c, "name", path);
    if (!name.is_string() || name.get<std::string>().empty()) {
      throw SchemaError(path + ".name", "expected non-empty string");
    }
    if (!category_by_id.emplace(id.get<int64_t>(), name.get<std::string>()).second) {
      throw SchemaError(path + ".id", "duplicate category id");
    }
    d.categories.push_back(name.get<std::string>());
  }

  const json& images = require_array(doc, "images");
  std::unordered_map<std::string, size_t> image_index;
  for (size_t i = 0; i < images.size(); ++i) {
    const std::string path = "images[" + std::to_string(i) + "]";
    const json& im = images[i];
    AnnotatedImage img;
    img.id = require_id(require_field(im, "id", path), path + ".id");
    img.width = require_dimension(require_field(im, "width", path), path + ".width");
    img.height = require_dimension(require_field(im, "height", path), path + ".height");
    if (im.contains("file_name")) {
      if (!im.at("file_name").is_string()) {
        throw SchemaError(path + ".file_name", "expected string");
      }
      img.file = im.at("file_name").get<std::string>();
    }
    if (!image_index.emplace(img.id, d.images.size()).second) {
      throw SchemaError(path + ".id", "duplicate image id '" + img.id + "'");
    }
    d.images.push_back(std::move(img));
  }

  const json& annotations = require_array(doc, "annotations");
  for (size_t i = 0; i < annotations.size(); ++i) {
    const std::string path = "annotations[" + std::to_string(i) + "]";
    const json& a = annotations[i];
    const std::string image_id = require_id(require_field(a, "image_id", path), path + ".image_id");
    const auto img_it = image_index.find(image_id);
    if (img_it == image_index.end()) {
      throw SchemaError(path + ".image_id", "unknown image id '" + image_id + "'");
    }
    const json& cat = require_field(a, "category_id", path);
    if (!cat.is_number_integer()) {
      throw SchemaError(path + ".category_id", "expected integer");
    }
    const auto cat_it = category_by_id.find(cat.get<int64_t>());
    if (cat_it == category_by_id.end()) {
      throw SchemaError(path + ".category_id", "unknown category id");
    }
    const json& bbox = require_field(a, "bbox", path);
    if (!bbox.is_array() || bbox.size() != 4) {
      throw SchemaError(path + ".bbox", "expected [x, y, w, h]");
    }
    double v[4];
    for (size_t j = 0; j < 4; ++j) {
      v[j] = require_number(bbox[j], path + ".bbox[" + std::to_string(j) + "]");
    }

    AnnotatedImage& img = d.images[img_it->second];
    const double x0 = std::max(0.0, v[0]);
    const double y0 = std::max(0.0, v[1]);
    const double x1 = std::min(static_cast<double>(img.width), v[0] + v[2]);
    const double y1 = std::min(static_cast<double>(img.height), v[1] + v[3]);
    if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) {
      throw SchemaError(path + ".bbox", "box is empty after clipping to the image");
    }

    Instance inst;
    inst.bbox = BBox{x0, y0, x1 - x0, y1 - y0};
    inst.category = cat_it->second;
    if (a.contains("difficult")) {
      const json& df = a.at("difficult");
      if (df.is_boolean()) {
        inst.difficult = df.get<bool>();
      } else if (df.is_number_integer()) {
        inst.difficult = df.get<int64_t>() != 0;
      } else {
        throw SchemaError(path + ".difficult", "expected 0/1 or boolean");
      }
    }
    if (a.contains("origin")) {
      const json& org = a.at("origin");
      if (org.is_string() && org.get<std::string>() == "original") {
        inst.origin = Origin::Original;
      } else if (org.is_string() && org.get<std::string>() == "pasted") {
        inst.origin = Origin::Pasted;
      } else {
        throw SchemaError(path + ".origin", "expected \"original\" or \"pasted\"");
      }
    }
    img.instances.push_back(std::move(inst));
  }
  return d;
}

std::string write_coco(const Dataset& d) {
  ordered_json doc;
  doc["images"] = ordered_json::array();
  for (const AnnotatedImage& img : d.images) {
    ordered_json im;
    im["id"] = img.id;
    im["file_name"] = img.file;
    im["width"] = img.width;
    im["height"] = img.height;
    doc["images"].push_back(std::move(im));
  }

  std::unordered_map<std::string, int64_t> category_ids;
  for (size_t i = 0; i < d.categories.size(); ++i) {
    category_ids.emplace(d.categories[i], static_cast<int64_t>(i) + 1);
  }

  doc["annotations"] = ordered_json::array();
  int64_t next_id = 1;
  for (const AnnotatedImage& img : d.images) {
    for (const Instance& inst : img.instances) {
      ordered_json a;
      a["id"] = next_id++;
      a["image_id"] = img.id;
      a["category_id"] = category_ids.at(inst.category);
      a["bbox"] = {inst.bbox.x, inst.bbox.y, inst.bbox.w, inst.bbox.h};
      a["difficult"] = inst.difficult ? 1 : 0;
      a["origin"] = inst.origin == Origin::Pasted ? "pasted" : "original";
      doc["annotations"].push_back(std::move(a));
    }
  }

  doc["categories"] = ordered_json::array();
  for (size_t i = 0; i < d.categories.size(); ++i) {
    ordered_json c;
    c["id"] = static_cast<int64_t>(i) + 1;
    c["name"] = d.categories[i];
    doc["categories"].push_back(std::move(c));
  }
  return doc.dump(2) + "\n";
}

}  // namespace smallaug
