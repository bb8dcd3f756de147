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

#ifndef SMALLAUG_METRICS_HPP_
#define SMALLAUG_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smallaug/data_model.hpp"
#include "smallaug/errors.hpp"

namespace smallaug {

struct Detection {
  std::string image_id;
  BBox bbox;
  std::string category;
  double score = 0.0;
};

/// A detection references an image id absent from the ground truth.
class UnknownImageId : public Error {
 public:
  using Error::Error;
};

struct EvalConfig {
  double iou_thresh = 0.5;
  bool include_difficult = true;  // difficult ground truths count as regular
  uint32_t recall_points = 101;   // 101-point COCO-style; 11 for VOC-style
};

struct CategoryResult {
  std::optional<double> ap, ap_s, ap_m, ap_l;
};

struct BucketCounts {
  uint64_t small = 0;
  uint64_t medium = 0;
  uint64_t large = 0;

  uint64_t total() const { return small + medium + large; }
};

/// Size-bucketed AP scores. A value is absent when its bucket has zero
/// ground-truth instances; absent buckets are excluded from the means.
struct EvalResult {
  std::optional<double> map, map_s, map_m, map_l;
  std::map<std::string, CategoryResult> per_category;
  BucketCounts counts;
};

/// Intersection over union of two boxes, in [0, 1].
double iou(const BBox& a, const BBox& b);

struct DetMatch {
  size_t det_index = 0;              // into the input span
  std::optional<size_t> gt_index;    // none = false positive
};

/// Greedy one-to-one matching for one image/category group: detections are
/// taken in descending score order (ties by insertion order) and each grabs
/// the unmatched ground truth with the highest IoU >= iou_thresh. Returns one
/// entry per detection in rank order.
std::vector<DetMatch> match_detections(std::span<const Detection> dets,
                                       std::span<const BBox> gts, double iou_thresh);

/// AP from rank-ordered TP/FP flags: area under the precision envelope
/// sampled at `recall_points` evenly spaced recall values, with precision
/// interpolated as the maximum at recall >= r. Absent when n_gt == 0.
std::optional<double> average_precision(std::span<const bool> tp_by_rank, uint64_t n_gt,
                                        uint32_t recall_points = 101);

/// Full evaluation: per-category AP over all sizes plus per-bucket APs where
/// ground truth is restricted to the bucket. Detections matched to an
/// out-of-bucket ground truth are ignored for that bucket; unmatched
/// detections count against the bucket of their own box size.
/// Throws UnknownImageId for detections on unknown images.
EvalResult evaluate(std::span<const Detection> dets, const Dataset& gt,
                    const EvalConfig& cfg = {});

/// Parses a detections file: a JSON array of
///   {"image_id", "category", "bbox": [x, y, w, h], "score"}.
/// Throws SchemaError naming the first bad field.
std::vector<Detection> parse_detections(const std::string& json_text);

/// Renders the mAP / mAP_L / mAP_M / mAP_S summary as an aligned text table.
std::string render_table(const EvalResult& r, std::string_view label = "ours");

/// Machine-readable twin of the table, including per-category scores.
std::string to_json(const EvalResult& r);

}  // namespace smallaug

#endif  // SMALLAUG_METRICS_HPP_
