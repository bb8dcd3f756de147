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

#include "smallaug/data_model.hpp"

#include <algorithm>
#include <unordered_set>

#include "smallaug/errors.hpp"

namespace smallaug {

double intersection_area(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) {
    return 0.0;
  }
  return iw * ih;
}

bool interiors_intersect(const BBox& a, const BBox& b) {
  return a.x < b.right() && b.x < a.right() && a.y < b.bottom() && b.y < a.bottom();
}

SizeClass classify_size(const BBox& b) {
  const double area = b.area();
  if (area <= kSmallAreaMax) {
    return SizeClass::Small;
  }
  if (area <= kMediumAreaMax) {
    return SizeClass::Medium;
  }
  return SizeClass::Large;
}

const char* to_string(SizeClass s) {
  switch (s) {
    case SizeClass::Small:
      return "small";
    case SizeClass::Medium:
      return "medium";
    case SizeClass::Large:
      return "large";
  }
  return "unknown";
}

void validate(const Dataset& d) {
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> categories(d.categories.begin(), d.categories.end());
  for (size_t i = 0; i < d.images.size(); ++i) {
    const AnnotatedImage& img = d.images[i];
    const std::string base = "images[" + std::to_string(i) + "]";
    if (img.id.empty()) {
      throw SchemaError(base + ".id", "empty image id");
    }
    if (!ids.insert(img.id).second) {
      throw SchemaError(base + ".id", "duplicate image id '" + img.id + "'");
    }
    if (img.has_pixels() &&
        img.pixels.size() != static_cast<size_t>(img.width) * img.height * 3) {
      throw SchemaError(base + ".pixels", "pixel buffer size does not match width*height*3");
    }
    for (size_t j = 0; j < img.instances.size(); ++j) {
      const Instance& inst = img.instances[j];
      const std::string path = base + ".instances[" + std::to_string(j) + "]";
      if (inst.category.empty()) {
        throw SchemaError(path + ".category", "empty category");
      }
      if (!categories.empty() && categories.find(inst.category) == categories.end()) {
        throw SchemaError(path + ".category", "category '" + inst.category + "' not in dataset categories");
      }
      const BBox& b = inst.bbox;
      if (!b.valid() || b.x < 0.0 || b.y < 0.0 || b.right() > img.width || b.bottom() > img.height) {
        throw SchemaError(path + ".bbox", "box out of bounds or degenerate");
      }
    }
  }
}

}  // namespace smallaug
