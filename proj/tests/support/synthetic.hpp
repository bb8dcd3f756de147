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

#ifndef SMALLAUG_TESTS_SUPPORT_SYNTHETIC_HPP_
#define SMALLAUG_TESTS_SUPPORT_SYNTHETIC_HPP_

#include <string>
#include <vector>

#include "smallaug/data_model.hpp"
#include "smallaug/rng.hpp"

namespace smallaug::testsupport {

struct ObjectSpec {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  std::string category = "plane";
  bool difficult = false;
  Origin origin = Origin::Original;
};

/// Deterministic image: patterned background, solid-color object rectangles.
inline AnnotatedImage make_image(const std::string& id, uint32_t width, uint32_t height,
                                 const std::vector<ObjectSpec>& objects) {
  AnnotatedImage img;
  img.id = id;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<size_t>(width) * height * 3);
  const uint64_t tag = derive_seed(0, id);
  for (uint32_t y = 0; y < height; ++y) {
    for (uint32_t x = 0; x < width; ++x) {
      uint8_t* px = img.pixels.data() + (static_cast<size_t>(y) * width + x) * 3;
      px[0] = static_cast<uint8_t>((x * 7 + y * 13 + tag) & 0xff);
      px[1] = static_cast<uint8_t>((x * 3 + y * 5 + (tag >> 8)) & 0xff);
      px[2] = static_cast<uint8_t>((x * 11 + y * 2 + (tag >> 16)) & 0xff);
    }
  }
  for (size_t i = 0; i < objects.size(); ++i) {
    const ObjectSpec& obj = objects[i];
    const uint8_t r = static_cast<uint8_t>(50 + 37 * i);
    const uint8_t g = static_cast<uint8_t>(200 - 23 * (i % 8));
    const uint8_t b = static_cast<uint8_t>(90 + 61 * i);
    for (int y = obj.y; y < obj.y + obj.h; ++y) {
      for (int x = obj.x; x < obj.x + obj.w; ++x) {
        uint8_t* px = img.pixels.data() + (static_cast<size_t>(y) * width + x) * 3;
        px[0] = r;
        px[1] = g;
        px[2] = b;
      }
    }
    Instance inst;
    inst.bbox = BBox{double(obj.x), double(obj.y), double(obj.w), double(obj.h)};
    inst.category = obj.category;
    inst.difficult = obj.difficult;
    inst.origin = obj.origin;
    img.instances.push_back(std::move(inst));
  }
  return img;
}

struct FixtureOptions {
  uint32_t width = 64;
  uint32_t height = 64;
  uint32_t min_smalls = 4;
  uint32_t max_smalls = 6;
  uint32_t min_side = 5;
  uint32_t max_side = 9;
  bool add_large = false;  // one 40x40 extra object
  std::vector<std::string> categories = {"plane", "ship", "vehicle"};
};

/// Random image whose small objects have pairwise distinct (w, h) so a
/// pasted copy identifies its source unambiguously. Objects never overlap.
inline AnnotatedImage random_image(const std::string& id, Rng& rng,
                                   const FixtureOptions& opt = {}) {
  const uint32_t n_smalls =
      opt.min_smalls + static_cast<uint32_t>(rng.next_below(opt.max_smalls - opt.min_smalls + 1));

  // Distinct (w, h) pairs for the small objects.
  std::vector<std::pair<int, int>> dims;
  for (uint32_t w = opt.min_side; w <= opt.max_side; ++w) {
    for (uint32_t h = opt.min_side; h <= opt.max_side; ++h) {
      dims.emplace_back(static_cast<int>(w), static_cast<int>(h));
    }
  }
  for (size_t i = 0; i < n_smalls && i < dims.size(); ++i) {
    const size_t j = i + rng.next_below(dims.size() - i);
    std::swap(dims[i], dims[j]);
  }

  std::vector<ObjectSpec> objects;
  const auto try_place = [&](int w, int h) -> bool {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const int x = static_cast<int>(rng.next_below(opt.width - w + 1));
      const int y = static_cast<int>(rng.next_below(opt.height - h + 1));
      const BBox candidate{double(x), double(y), double(w), double(h)};
      bool clear = true;
      for (const ObjectSpec& existing : objects) {
        const BBox other{double(existing.x), double(existing.y), double(existing.w),
                         double(existing.h)};
        if (interiors_intersect(candidate, other)) {
          clear = false;
          break;
        }
      }
      if (clear) {
        ObjectSpec obj;
        obj.x = x;
        obj.y = y;
        obj.w = w;
        obj.h = h;
        objects.push_back(obj);
        return true;
      }
    }
    return false;
  };

  if (opt.add_large) {
    try_place(40, 40);
    if (!objects.empty()) {
      objects.back().category = opt.categories[0];
    }
  }
  const size_t first_small = objects.size();
  for (uint32_t i = 0; i < n_smalls; ++i) {
    const auto [w, h] = dims[i % dims.size()];
    if (try_place(w, h)) {
      objects.back().category = opt.categories[objects.size() % opt.categories.size()];
    }
  }
  (void)first_small;
  return make_image(id, opt.width, opt.height, objects);
}

inline Dataset random_dataset(size_t n_images, uint64_t seed, const FixtureOptions& opt = {}) {
  Dataset d;
  d.categories = opt.categories;
  Rng rng(seed);
  for (size_t i = 0; i < n_images; ++i) {
    d.images.push_back(random_image("img" + std::to_string(i), rng, opt));
  }
  return d;
}

}  // namespace smallaug::testsupport

#endif  // SMALLAUG_TESTS_SUPPORT_SYNTHETIC_HPP_
