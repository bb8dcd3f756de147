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

#include "smallaug/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "smallaug/log.hpp"

namespace smallaug {

std::string_view to_string(Operation op) {
  switch (op) {
    case Operation::SingleObject:
      return "single";
    case Operation::MultipleObjects:
      return "multiple";
    case Operation::AllObjects:
      return "all";
  }
  return "?";
}

std::optional<Operation> operation_from_string(std::string_view name) {
  if (name == "single") return Operation::SingleObject;
  if (name == "multiple") return Operation::MultipleObjects;
  if (name == "all") return Operation::AllObjects;
  return std::nullopt;
}

namespace {

bool eligible_source(const Instance& inst) {
  return inst.origin == Origin::Original && !inst.difficult &&
         classify_size(inst.bbox) == SizeClass::Small;
}

// Integer pixel rectangle covering the box, clipped to the image.
struct PixelRect {
  int32_t x = 0;
  int32_t y = 0;
  int32_t w = 0;
  int32_t h = 0;
};

PixelRect pixel_rect(const BBox& b, uint32_t img_w, uint32_t img_h) {
  PixelRect r;
  r.x = std::max<int32_t>(0, static_cast<int32_t>(std::floor(b.x)));
  r.y = std::max<int32_t>(0, static_cast<int32_t>(std::floor(b.y)));
  const int32_t x1 = std::min<int32_t>(static_cast<int32_t>(img_w),
                                       static_cast<int32_t>(std::ceil(b.right())));
  const int32_t y1 = std::min<int32_t>(static_cast<int32_t>(img_h),
                                       static_cast<int32_t>(std::ceil(b.bottom())));
  r.w = x1 - r.x;
  r.h = y1 - r.y;
  return r;
}

void blit(const AnnotatedImage& src_img, const PixelRect& src, AnnotatedImage& dst_img,
          int32_t dst_x, int32_t dst_y) {
  const size_t stride = static_cast<size_t>(dst_img.width) * 3;
  for (int32_t row = 0; row < src.h; ++row) {
    const uint8_t* from =
        src_img.pixels.data() + (static_cast<size_t>(src.y + row) * src_img.width + src.x) * 3;
    uint8_t* to = dst_img.pixels.data() + static_cast<size_t>(dst_y + row) * stride +
                  static_cast<size_t>(dst_x) * 3;
    std::memcpy(to, from, static_cast<size_t>(src.w) * 3);
  }
}

}  // namespace

std::vector<size_t> select_sources(const AnnotatedImage& img, Operation op, Rng& rng) {
  std::vector<size_t> eligible;
  for (size_t i = 0; i < img.instances.size(); ++i) {
    if (eligible_source(img.instances[i])) {
      eligible.push_back(i);
    }
  }
  switch (op) {
    case Operation::SingleObject: {
      if (eligible.empty()) {
        return {};
      }
      return {eligible[rng.next_below(eligible.size())]};
    }
    case Operation::MultipleObjects: {
      if (eligible.size() < 2) {
        return {};
      }
      const size_t subset_size =
          static_cast<size_t>(rng.next_int(2, static_cast<int64_t>(eligible.size())));
      // Partial Fisher-Yates: the first subset_size slots are a uniform subset.
      for (size_t i = 0; i < subset_size; ++i) {
        const size_t j = i + rng.next_below(eligible.size() - i);
        std::swap(eligible[i], eligible[j]);
      }
      eligible.resize(subset_size);
      std::sort(eligible.begin(), eligible.end());
      return eligible;
    }
    case Operation::AllObjects:
      return eligible;
  }
  return {};
}

std::optional<BBox> find_paste_location(const AnnotatedImage& img, const BBox& source,
                                        std::span<const BBox> occupied,
                                        const PlacementConfig& cfg, Rng& rng) {
  const int64_t margin = cfg.margin;
  const int64_t span_w = static_cast<int64_t>(std::ceil(source.w));
  const int64_t span_h = static_cast<int64_t>(std::ceil(source.h));
  const int64_t count_x = static_cast<int64_t>(img.width) - 2 * margin - span_w + 1;
  const int64_t count_y = static_cast<int64_t>(img.height) - 2 * margin - span_h + 1;
  if (count_x <= 0 || count_y <= 0) {
    throw SourceTooLarge("source " + std::to_string(span_w) + "x" + std::to_string(span_h) +
                         " does not fit in " + std::to_string(img.width) + "x" +
                         std::to_string(img.height) + " with margin " + std::to_string(margin));
  }
  for (uint32_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    BBox candidate;
    candidate.x = static_cast<double>(margin + static_cast<int64_t>(rng.next_below(count_x)));
    candidate.y = static_cast<double>(margin + static_cast<int64_t>(rng.next_below(count_y)));
    candidate.w = source.w;
    candidate.h = source.h;
    const bool clear = std::none_of(occupied.begin(), occupied.end(), [&](const BBox& b) {
      return interiors_intersect(candidate, b);
    });
    if (clear) {
      return candidate;
    }
  }
  return std::nullopt;
}

namespace {

AnnotatedImage run_operator(const AnnotatedImage& img, Operation op, uint8_t m,
                            const PlacementConfig& cfg, Rng& rng, AugmentStats* stats) {
  if (!img.has_pixels()) {
    throw Error("augment: image '" + img.id + "' has no pixel data");
  }
  AnnotatedImage out = img;
  const std::vector<size_t> sources = select_sources(img, op, rng);
  if (stats != nullptr) {
    stats->selected = static_cast<uint32_t>(sources.size());
  }

  std::vector<BBox> occupied;
  occupied.reserve(img.instances.size() + sources.size() * m);
  for (const Instance& inst : img.instances) {
    occupied.push_back(inst.bbox);
  }

  for (const size_t src_index : sources) {
    const Instance& src_inst = img.instances[src_index];
    const PixelRect rect = pixel_rect(src_inst.bbox, img.width, img.height);
    const BBox src_box{static_cast<double>(rect.x), static_cast<double>(rect.y),
                       static_cast<double>(rect.w), static_cast<double>(rect.h)};
    for (uint8_t paste = 0; paste < m; ++paste) {
      std::optional<BBox> loc;
      try {
        loc = find_paste_location(out, src_box, occupied, cfg, rng);
      } catch (const SourceTooLarge&) {
        loc = std::nullopt;
      }
      if (!loc.has_value()) {
        if (stats != nullptr) {
          ++stats->skipped;
        }
        log_debug("augment: image '" + img.id + "': no free spot for " +
                  std::to_string(rect.w) + "x" + std::to_string(rect.h) + " paste");
        continue;
      }
      blit(img, rect, out, static_cast<int32_t>(loc->x), static_cast<int32_t>(loc->y));
      Instance pasted;
      pasted.bbox = *loc;
      pasted.category = src_inst.category;
      pasted.difficult = false;
      pasted.origin = Origin::Pasted;
      out.instances.push_back(std::move(pasted));
      occupied.push_back(*loc);
      if (stats != nullptr) {
        ++stats->pasted;
      }
    }
  }
  return out;
}

}  // namespace

AnnotatedImage apply_operator(const AnnotatedImage& img, Operation op, uint8_t m,
                              const PlacementConfig& cfg, Rng& rng, AugmentStats* stats) {
  if (stats != nullptr) {
    *stats = AugmentStats{};
    stats->applied = true;
  }
  return run_operator(img, op, m, cfg, rng, stats);
}

AnnotatedImage apply_policy(const AnnotatedImage& img, const Policy& policy,
                            const PlacementConfig& cfg, Rng& rng, AugmentStats* stats) {
  if (stats != nullptr) {
    *stats = AugmentStats{};
  }
  // Per-image gate, drawn once before source selection.
  if (rng.next_double() >= policy.p) {
    return img;
  }
  if (stats != nullptr) {
    stats->applied = true;
  }
  return run_operator(img, policy.op, policy.m, cfg, rng, stats);
}

AnnotatedImage apply_policy_set(const AnnotatedImage& img, std::span<const Policy> policies,
                                const PlacementConfig& cfg, Rng& rng, AugmentStats* stats) {
  if (policies.empty()) {
    throw EmptyPolicySet("policy set is empty");
  }
  // A singleton set needs no draw, so it matches apply_policy bit for bit.
  const size_t pick = policies.size() == 1 ? 0 : rng.next_below(policies.size());
  return apply_policy(img, policies[pick], cfg, rng, stats);
}

}  // namespace smallaug
