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

#include "smallaug/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_map>

#include <json.hpp>

namespace smallaug {

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) {
    return 0.0;
  }
  return inter / (a.area() + b.area() - inter);
}

std::vector<DetMatch> match_detections(std::span<const Detection> dets,
                                       std::span<const BBox> gts, double iou_thresh) {
  std::vector<size_t> rank(dets.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](size_t a, size_t b) { return dets[a].score > dets[b].score; });

  std::vector<bool> gt_taken(gts.size(), false);
  std::vector<DetMatch> matches;
  matches.reserve(dets.size());
  for (const size_t di : rank) {
    double best_iou = 0.0;
    std::optional<size_t> best_gt;
    for (size_t gi = 0; gi < gts.size(); ++gi) {
      if (gt_taken[gi]) {
        continue;
      }
      const double ov = iou(dets[di].bbox, gts[gi]);
      if (ov < iou_thresh) {
        continue;
      }
      if (!best_gt.has_value() || ov > best_iou) {
        best_iou = ov;
        best_gt = gi;
      }
    }
    if (best_gt.has_value()) {
      gt_taken[*best_gt] = true;
    }
    matches.push_back(DetMatch{di, best_gt});
  }
  return matches;
}

std::optional<double> average_precision(std::span<const bool> tp_by_rank, uint64_t n_gt,
                                        uint32_t recall_points) {
  if (n_gt == 0) {
    return std::nullopt;
  }
  const size_t n = tp_by_rank.size();
  std::vector<double> precision(n);
  std::vector<double> recall(n);
  uint64_t tp = 0;
  for (size_t k = 0; k < n; ++k) {
    tp += tp_by_rank[k] ? 1 : 0;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    recall[k] = static_cast<double>(tp) / static_cast<double>(n_gt);
  }
  // Precision envelope: max precision at recall >= r.
  for (size_t k = n; k-- > 1;) {
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  }

  double sum = 0.0;
  size_t k = 0;
  for (uint32_t i = 0; i < recall_points; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(recall_points - 1);
    while (k < n && recall[k] < r) {
      ++k;
    }
    if (k < n) {
      sum += precision[k];
    }
  }
  return sum / static_cast<double>(recall_points);
}

namespace {

struct GtRecord {
  BBox bbox;
  bool counted = true;   // false for difficult boxes when they are excluded
  SizeClass size = SizeClass::Small;
};

constexpr SizeClass kBuckets[3] = {SizeClass::Small, SizeClass::Medium, SizeClass::Large};

}  // namespace

EvalResult evaluate(std::span<const Detection> dets, const Dataset& gt, const EvalConfig& cfg) {
  std::unordered_map<std::string, size_t> image_index;
  for (size_t i = 0; i < gt.images.size(); ++i) {
    image_index.emplace(gt.images[i].id, i);
  }
  for (const Detection& det : dets) {
    if (image_index.find(det.image_id) == image_index.end()) {
      throw UnknownImageId("detection references unknown image '" + det.image_id + "'");
    }
  }

  std::set<std::string> categories(gt.categories.begin(), gt.categories.end());
  for (const AnnotatedImage& img : gt.images) {
    for (const Instance& inst : img.instances) {
      categories.insert(inst.category);
    }
  }
  for (const Detection& det : dets) {
    categories.insert(det.category);
  }

  EvalResult result;
  double sum_all = 0.0, sum_s = 0.0, sum_m = 0.0, sum_l = 0.0;
  uint64_t n_all = 0, n_s = 0, n_m = 0, n_l = 0;

  for (const std::string& category : categories) {
    // Ground truth of this category, grouped by image.
    std::unordered_map<size_t, std::vector<GtRecord>> gts_by_image;
    uint64_t n_gt = 0;
    uint64_t n_gt_bucket[3] = {0, 0, 0};
    for (size_t ii = 0; ii < gt.images.size(); ++ii) {
      for (const Instance& inst : gt.images[ii].instances) {
        if (inst.category != category) {
          continue;
        }
        GtRecord rec;
        rec.bbox = inst.bbox;
        rec.counted = cfg.include_difficult || !inst.difficult;
        rec.size = classify_size(inst.bbox);
        if (rec.counted) {
          ++n_gt;
          ++n_gt_bucket[static_cast<int>(rec.size)];
        }
        gts_by_image[ii].push_back(rec);
      }
    }

    // Detections of this category in global rank order.
    std::vector<size_t> rank;
    for (size_t di = 0; di < dets.size(); ++di) {
      if (dets[di].category == category) {
        rank.push_back(di);
      }
    }
    std::stable_sort(rank.begin(), rank.end(),
                     [&](size_t a, size_t b) { return dets[a].score > dets[b].score; });

    // Greedy matching; matching is per-image, so global rank order gives the
    // same matches as matching each image independently.
    struct RankedMatch {
      const GtRecord* gt = nullptr;  // nullptr = unmatched
      SizeClass det_size = SizeClass::Small;
    };
    std::vector<RankedMatch> ranked(rank.size());
    std::unordered_map<size_t, std::vector<bool>> taken;
    for (auto& [ii, recs] : gts_by_image) {
      taken[ii].assign(recs.size(), false);
    }
    for (size_t r = 0; r < rank.size(); ++r) {
      const Detection& det = dets[rank[r]];
      ranked[r].det_size = classify_size(det.bbox);
      const size_t ii = image_index.at(det.image_id);
      const auto it = gts_by_image.find(ii);
      if (it == gts_by_image.end()) {
        continue;
      }
      const std::vector<GtRecord>& recs = it->second;
      std::vector<bool>& used = taken[ii];
      double best_iou = 0.0;
      int best_gi = -1;
      for (size_t gi = 0; gi < recs.size(); ++gi) {
        if (used[gi]) {
          continue;
        }
        const double ov = iou(det.bbox, recs[gi].bbox);
        if (ov >= cfg.iou_thresh && ov > best_iou) {
          best_iou = ov;
          best_gi = static_cast<int>(gi);
        }
      }
      if (best_gi >= 0) {
        used[best_gi] = true;
        ranked[r].gt = &recs[best_gi];
      }
    }

    CategoryResult cat;
    {
      std::vector<bool> tp;
      tp.reserve(ranked.size());
      for (const RankedMatch& m : ranked) {
        if (m.gt != nullptr && !m.gt->counted) {
          continue;  // matched an excluded difficult box: ignored
        }
        tp.push_back(m.gt != nullptr);
      }
      cat.ap = average_precision(tp, n_gt, cfg.recall_points);
    }
    for (int b = 0; b < 3; ++b) {
      const SizeClass bucket = kBuckets[b];
      std::vector<bool> tp;
      for (const RankedMatch& m : ranked) {
        if (m.gt != nullptr) {
          if (m.gt->counted && m.gt->size == bucket) {
            tp.push_back(true);
          }
          // matched out-of-bucket or excluded: ignored
        } else if (m.det_size == bucket) {
          tp.push_back(false);
        }
      }
      const std::optional<double> ap = average_precision(tp, n_gt_bucket[b], cfg.recall_points);
      if (bucket == SizeClass::Small) {
        cat.ap_s = ap;
      } else if (bucket == SizeClass::Medium) {
        cat.ap_m = ap;
      } else {
        cat.ap_l = ap;
      }
    }

    const auto add = [](double& sum, uint64_t& n, const std::optional<double>& v) {
      if (v.has_value()) {
        sum += *v;
        ++n;
      }
    };
    add(sum_all, n_all, cat.ap);
    add(sum_s, n_s, cat.ap_s);
    add(sum_m, n_m, cat.ap_m);
    add(sum_l, n_l, cat.ap_l);
    result.counts.small += n_gt_bucket[0];
    result.counts.medium += n_gt_bucket[1];
    result.counts.large += n_gt_bucket[2];
    result.per_category.emplace(category, cat);
  }

  if (n_all > 0) result.map = sum_all / static_cast<double>(n_all);
  if (n_s > 0) result.map_s = sum_s / static_cast<double>(n_s);
  if (n_m > 0) result.map_m = sum_m / static_cast<double>(n_m);
  if (n_l > 0) result.map_l = sum_l / static_cast<double>(n_l);
  return result;
}

std::vector<Detection> parse_detections(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw SchemaError("$", "expected an array of detections");
  }
  std::vector<Detection> dets;
  dets.reserve(doc.size());
  for (size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "$[" + std::to_string(i) + "]";
    const nlohmann::json& entry = doc[i];
    if (!entry.is_object()) {
      throw SchemaError(path, "expected object");
    }
    Detection det;
    if (!entry.contains("image_id") || !entry.at("image_id").is_string()) {
      throw SchemaError(path + ".image_id", "expected string");
    }
    det.image_id = entry.at("image_id").get<std::string>();
    if (!entry.contains("category") || !entry.at("category").is_string()) {
      throw SchemaError(path + ".category", "expected string");
    }
    det.category = entry.at("category").get<std::string>();
    if (!entry.contains("bbox") || !entry.at("bbox").is_array() || entry.at("bbox").size() != 4) {
      throw SchemaError(path + ".bbox", "expected [x, y, w, h]");
    }
    double v[4];
    for (size_t j = 0; j < 4; ++j) {
      if (!entry.at("bbox")[j].is_number()) {
        throw SchemaError(path + ".bbox[" + std::to_string(j) + "]", "expected number");
      }
      v[j] = entry.at("bbox")[j].get<double>();
    }
    det.bbox = BBox{v[0], v[1], v[2], v[3]};
    if (!det.bbox.valid()) {
      throw SchemaError(path + ".bbox", "box must have positive extent");
    }
    if (!entry.contains("score") || !entry.at("score").is_number()) {
      throw SchemaError(path + ".score", "expected number");
    }
    det.score = entry.at("score").get<double>();
    if (!std::isfinite(det.score)) {
      throw SchemaError(path + ".score", "score must be finite");
    }
    dets.push_back(std::move(det));
  }
  return dets;
}

namespace {

std::string format_cell(const std::optional<double>& v) {
  if (!v.has_value()) {
    return "-";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

}  // namespace

std::string render_table(const EvalResult& r, std::string_view label) {
  // Column layout follows the usual detection result tables:
  // mAP, mAP_L, mAP_M, mAP_S.
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line), "%-10s %7s %7s %7s %7s\n", "method", "mAP", "mAP_L", "mAP_M",
                "mAP_S");
  out += line;
  std::snprintf(line, sizeof(line), "%-10s %7s %7s %7s %7s\n", std::string(label).c_str(),
                format_cell(r.map).c_str(), format_cell(r.map_l).c_str(),
                format_cell(r.map_m).c_str(), format_cell(r.map_s).c_str());
  out += line;
  return out;
}

std::string to_json(const EvalResult& r) {
  nlohmann::ordered_json doc;
  const auto put = [](nlohmann::ordered_json& obj, const char* key,
                      const std::optional<double>& v) {
    if (v.has_value()) {
      obj[key] = *v;
    } else {
      obj[key] = nullptr;
    }
  };
  put(doc, "map", r.map);
  put(doc, "map_l", r.map_l);
  put(doc, "map_m", r.map_m);
  put(doc, "map_s", r.map_s);
  doc["per_category"] = nlohmann::ordered_json::object();
  for (const auto& [name, cat] : r.per_category) {
    nlohmann::ordered_json c;
    put(c, "ap", cat.ap);
    put(c, "ap_l", cat.ap_l);
    put(c, "ap_m", cat.ap_m);
    put(c, "ap_s", cat.ap_s);
    doc["per_category"][name] = std::move(c);
  }
  doc["counts"] = {{"small", r.counts.small},
                   {"medium", r.counts.medium},
                   {"large", r.counts.large}};
  return doc.dump(2) + "\n";
}

}  // namespace smallaug
