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

#ifndef SMALLAUG_TESTS_SUPPORT_NAIVE_METRICS_HPP_
#define SMALLAUG_TESTS_SUPPORT_NAIVE_METRICS_HPP_

// Brute-force re-implementation of the evaluation convention, kept
// deliberately independent of smallaug/metrics.cpp internals: everything is
// recomputed with plain nested loops so it can serve as an oracle.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smallaug/data_model.hpp"
#include "smallaug/metrics.hpp"

namespace smallaug::testsupport {

inline double naive_iou(const BBox& a, const BBox& b) {
  const double ix0 = std::max(a.x, b.x);
  const double iy0 = std::max(a.y, b.y);
  const double ix1 = std::min(a.x + a.w, b.x + b.w);
  const double iy1 = std::min(a.y + a.h, b.y + b.h);
  const double iw = ix1 - ix0;
  const double ih = iy1 - iy0;
  if (iw <= 0.0 || ih <= 0.0) {
    return 0.0;
  }
  const double inter = iw * ih;
  return inter / (a.w * a.h + b.w * b.h - inter);
}

inline std::optional<double> naive_ap(const std::vector<bool>& tp, uint64_t n_gt,
                                      uint32_t recall_points) {
  if (n_gt == 0) {
    return std::nullopt;
  }
  double total = 0.0;
  for (uint32_t s = 0; s < recall_points; ++s) {
    const double r = double(s) / double(recall_points - 1);
    // Max precision over all prefixes whose recall reaches r, recomputed from
    // scratch for every sample point.
    double best = 0.0;
    uint64_t hits = 0;
    for (size_t k = 0; k < tp.size(); ++k) {
      if (tp[k]) {
        ++hits;
      }
      const double recall = double(hits) / double(n_gt);
      if (recall >= r) {
        const double precision = double(hits) / double(k + 1);
        best = std::max(best, precision);
      }
    }
    total += best;
  }
  return total / double(recall_points);
}

inline EvalResult naive_evaluate(const std::vector<Detection>& dets, const Dataset& gt,
                                 const EvalConfig& cfg = {}) {
  struct NaiveGt {
    BBox bbox;
    std::string image_id;
    std::string category;
    bool counted = true;
    bool matched = false;
  };

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
  std::map<SizeClass, std::pair<double, uint64_t>> bucket_means;
  double sum_all = 0.0;
  uint64_t n_all = 0;

  for (const std::string& category : categories) {
    std::vector<NaiveGt> gts;
    for (const AnnotatedImage& img : gt.images) {
      for (const Instance& inst : img.instances) {
        if (inst.category == category) {
          NaiveGt g;
          g.bbox = inst.bbox;
          g.image_id = img.id;
          g.category = category;
          g.counted = cfg.include_difficult || !inst.difficult;
          gts.push_back(g);
        }
      }
    }

    std::vector<size_t> order;
    for (size_t i = 0; i < dets.size(); ++i) {
      if (dets[i].category == category) {
        order.push_back(i);
      }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return dets[a].score > dets[b].score; });

    std::vector<int> matched_gt(order.size(), -1);
    for (size_t r = 0; r < order.size(); ++r) {
      const Detection& det = dets[order[r]];
      double best = 0.0;
      int best_gi = -1;
      for (size_t gi = 0; gi < gts.size(); ++gi) {
        if (gts[gi].matched || gts[gi].image_id != det.image_id) {
          continue;
        }
        const double ov = naive_iou(det.bbox, gts[gi].bbox);
        if (ov >= cfg.iou_thresh && ov > best) {
          best = ov;
          best_gi = int(gi);
        }
      }
      if (best_gi >= 0) {
        gts[size_t(best_gi)].matched = true;
        matched_gt[r] = best_gi;
      }
    }

    CategoryResult cat;
    {
      uint64_t n_gt = 0;
      for (const NaiveGt& g : gts) {
        if (g.counted) {
          ++n_gt;
        }
      }
      std::vector<bool> tp;
      for (size_t r = 0; r < order.size(); ++r) {
        if (matched_gt[r] >= 0) {
          if (gts[size_t(matched_gt[r])].counted) {
            tp.push_back(true);
          }
        } else {
          tp.push_back(false);
        }
      }
      cat.ap = naive_ap(tp, n_gt, cfg.recall_points);
      if (cat.ap.has_value()) {
        sum_all += *cat.ap;
        ++n_all;
      }
    }

    for (const SizeClass bucket :
         {SizeClass::Small, SizeClass::Medium, SizeClass::Large}) {
      uint64_t n_gt = 0;
      for (const NaiveGt& g : gts) {
        if (g.counted && classify_size(g.bbox) == bucket) {
          ++n_gt;
        }
      }
      std::vector<bool> tp;
      for (size_t r = 0; r < order.size(); ++r) {
        if (matched_gt[r] >= 0) {
          const NaiveGt& g = gts[size_t(matched_gt[r])];
          if (g.counted && classify_size(g.bbox) == bucket) {
            tp.push_back(true);
          }
        } else if (classify_size(dets[order[r]].bbox) == bucket) {
          tp.push_back(false);
        }
      }
      const std::optional<double> ap = naive_ap(tp, n_gt, cfg.recall_points);
      if (bucket == SizeClass::Small) {
        cat.ap_s = ap;
      } else if (bucket == SizeClass::Medium) {
        cat.ap_m = ap;
      } else {
        cat.ap_l = ap;
      }
      if (ap.has_value()) {
        bucket_means[bucket].first += *ap;
        bucket_means[bucket].second += 1;
      }
    }

    for (const NaiveGt& g : gts) {
      if (!g.counted) {
        continue;
      }
      switch (classify_size(g.bbox)) {
        case SizeClass::Small:
          ++result.counts.small;
          break;
        case SizeClass::Medium:
          ++result.counts.medium;
          break;
        case SizeClass::Large:
          ++result.counts.large;
          break;
      }
    }
    result.per_category.emplace(category, cat);
  }

  if (n_all > 0) {
    result.map = sum_all / double(n_all);
  }
  const auto mean_of = [&](SizeClass b) -> std::optional<double> {
    const auto it = bucket_means.find(b);
    if (it == bucket_means.end() || it->second.second == 0) {
      return std::nullopt;
    }
    return it->second.first / double(it->second.second);
  };
  result.map_s = mean_of(SizeClass::Small);
  result.map_m = mean_of(SizeClass::Medium);
  result.map_l = mean_of(SizeClass::Large);
  return result;
}

}  // namespace smallaug::testsupport

#endif  // SMALLAUG_TESTS_SUPPORT_NAIVE_METRICS_HPP_
