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

#ifndef SMALLAUG_DATA_MODEL_HPP_
#define SMALLAUG_DATA_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace smallaug {

/// Axis-aligned box in pixel units, top-left anchored.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  bool valid() const { return w > 0.0 && h > 0.0; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Area of the intersection of two boxes, 0 when disjoint.
double intersection_area(const BBox& a, const BBox& b);

/// True when the open interiors of the boxes intersect. Boxes that only
/// share an edge or a corner do not count as overlapping.
bool interiors_intersect(const BBox& a, const BBox& b);

enum class SizeClass : uint8_t { Small, Medium, Large };

inline constexpr double kSmallAreaMax = 32.0 * 32.0;
inline constexpr double kMediumAreaMax = 96.0 * 96.0;

/// Buckets a box by area: Small <= 32*32 < Medium <= 96*96 < Large.
/// Boundary areas fall into the smaller bucket.
SizeClass classify_size(const BBox& b);

const char* to_string(SizeClass s);

enum class Origin : uint8_t { Original, Pasted };

struct Instance {
  BBox bbox;
  std::string category;
  bool difficult = false;
  Origin origin = Origin::Original;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// One image plus its annotations. `pixels` is a row-major RGB byte buffer
/// (width*height*3); it is empty while the image is manifest-backed and not
/// yet loaded. `file` is the image path relative to the owning manifest,
/// empty for purely in-memory images.
struct AnnotatedImage {
  std::string id;
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> pixels;
  std::vector<Instance> instances;
  std::string file;

  bool has_pixels() const { return !pixels.empty(); }
};

/// An ordered image collection plus the category vocabulary. Pixel data is
/// loaded lazily relative to `base_dir` (see manifest.hpp).
struct Dataset {
  std::vector<AnnotatedImage> images;
  std::vector<std::string> categories;
  std::string base_dir;
};

/// Checks dataset invariants: image ids unique, pixel buffer sizes
/// consistent, every instance box in-bounds and every category known.
/// Throws SchemaError naming the violating field.
void validate(const Dataset& d);

}  // namespace smallaug

#endif  // SMALLAUG_DATA_MODEL_HPP_
