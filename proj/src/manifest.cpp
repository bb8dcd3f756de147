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

#include "smallaug/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "smallaug/annotations.hpp"
#include "smallaug/errors.hpp"
#include "smallaug/image_io.hpp"

namespace smallaug {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw IoError("write failed for '" + path + "'");
  }
}

}  // namespace

Dataset load_manifest(const std::string& manifest_path) {
  const std::string text = read_text_file(manifest_path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON in manifest: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("images") || !doc.at("images").is_array()) {
    throw SchemaError("$.images", "manifest must contain an images array");
  }
  if (!doc.contains("annotations_file") || !doc.at("annotations_file").is_string()) {
    throw SchemaError("$.annotations_file", "missing annotations_file");
  }

  const fs::path base = fs::path(manifest_path).parent_path();
  const fs::path ann_path = base / doc.at("annotations_file").get<std::string>();
  Dataset d = parse_coco(read_text_file(ann_path.string()));
  d.base_dir = base.string();

  // The manifest is authoritative for image files and order; cross-check ids.
  std::unordered_map<std::string, size_t> by_id;
  for (size_t i = 0; i < d.images.size(); ++i) {
    by_id.emplace(d.images[i].id, i);
  }
  const json& images = doc.at("images");
  std::vector<AnnotatedImage> ordered;
  ordered.reserve(images.size());
  for (size_t i = 0; i < images.size(); ++i) {
    const std::string path = "images[" + std::to_string(i) + "]";
    const json& im = images[i];
    for (const char* key : {"id", "file", "width", "height"}) {
      if (!im.is_object() || !im.contains(key)) {
        throw SchemaError(path + "." + key, "missing field");
      }
    }
    const std::string id =
        im.at("id").is_string() ? im.at("id").get<std::string>() : im.at("id").dump();
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw SchemaError(path + ".id", "image '" + id + "' has no annotations entry");
    }
    AnnotatedImage img = std::move(d.images[it->second]);
    img.file = im.at("file").get<std::string>();
    if (!im.at("width").is_number_integer() || !im.at("height").is_number_integer()) {
      throw SchemaError(path + ".width", "expected integer dimensions");
    }
    img.width = im.at("width").get<uint32_t>();
    img.height = im.at("height").get<uint32_t>();
    ordered.push_back(std::move(img));
  }
  d.images = std::move(ordered);
  return d;
}

AnnotatedImage load_image(const Dataset& d, size_t index) {
  AnnotatedImage img = d.images.at(index);
  if (img.has_pixels()) {
    return img;
  }
  if (img.file.empty()) {
    throw IoError("image '" + img.id + "' has neither pixel data nor a file");
  }
  const fs::path path = fs::path(d.base_dir) / img.file;
  DecodedImage decoded = read_image(path.string());
  if (decoded.width != img.width || decoded.height != img.height) {
    throw IoError("image '" + img.id + "': file is " + std::to_string(decoded.width) + "x" +
                  std::to_string(decoded.height) + " but manifest says " +
                  std::to_string(img.width) + "x" + std::to_string(img.height));
  }
  img.pixels = std::move(decoded.rgb);
  return img;
}

void write_manifest(const Dataset& d, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create '" + dir + "': " + ec.message());
  }

  Dataset out = d;  // image `file` fields are rewritten below
  bool have_materialized = false;
  for (AnnotatedImage& img : out.images) {
    if (img.has_pixels()) {
      if (!have_materialized) {
        fs::create_directories(fs::path(dir) / "images", ec);
        if (ec) {
          throw IoError("cannot create '" + dir + "/images': " + ec.message());
        }
        have_materialized = true;
      }
      img.file = "images/" + img.id + ".png";
      write_png((fs::path(dir) / img.file).string(), img.width, img.height, img.pixels);
    } else if (!img.file.empty()) {
      // Reference the existing file instead of copying it.
      const fs::path target = fs::absolute(fs::path(d.base_dir) / img.file);
      fs::path rel = fs::relative(target, fs::absolute(dir), ec);
      img.file = (ec || rel.empty()) ? target.string() : rel.string();
    } else {
      throw IoError("image '" + img.id + "' has neither pixel data nor a file");
    }
  }

  write_text_file((fs::path(dir) / "annotations.json").string(), write_coco(out));

  ordered_json manifest;
  manifest["images"] = ordered_json::array();
  for (const AnnotatedImage& img : out.images) {
    ordered_json im;
    im["id"] = img.id;
    im["file"] = img.file;
    im["width"] = img.width;
    im["height"] = img.height;
    manifest["images"].push_back(std::move(im));
  }
  manifest["annotations_file"] = "annotations.json";
  write_text_file((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

}  // namespace smallaug
