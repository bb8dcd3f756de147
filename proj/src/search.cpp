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

#include "smallaug/search.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "smallaug/log.hpp"
#include "smallaug/manifest.hpp"
#include "smallaug/policy_io.hpp"

namespace smallaug {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void validate(const SearchConfig& cfg) {
  if (cfg.k_folds < 2) {
    throw ConfigError("search: k_folds must be >= 2");
  }
  if (cfg.num_search < 1) {
    throw ConfigError("search: num_search must be >= 1");
  }
  if (cfg.top_n < 1) {
    throw ConfigError("search: top_n must be >= 1");
  }
  if (cfg.top_n > cfg.num_search) {
    throw ConfigError("search: top_n must not exceed num_search");
  }
  if (cfg.placement.max_attempts < 1) {
    throw ConfigError("search: placement.max_attempts must be >= 1");
  }
  tpe::validate(cfg.tpe);
}

std::vector<FoldPair> kfold_split(const Dataset& d, uint32_t k, uint64_t seed) {
  const size_t n = d.images.size();
  if (k < 2) {
    throw ConfigError("kfold_split: k must be >= 2");
  }
  if (n < k) {
    throw TooFewImages("kfold_split: " + std::to_string(n) + " images cannot fill " +
                       std::to_string(k) + " folds");
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (size_t i = n; i-- > 1;) {  // Fisher-Yates
    const size_t j = rng.next_below(i + 1);
    std::swap(order[i], order[j]);
  }

  // Chunk sizes differ by at most one, larger chunks first.
  std::vector<size_t> sizes(k, n / k);
  for (size_t i = 0; i < n % k; ++i) {
    ++sizes[i];
  }

  std::vector<FoldPair> folds;
  folds.reserve(k);
  size_t offset = 0;
  for (uint32_t fold = 0; fold < k; ++fold) {
    FoldPair pair;
    pair.fold_index = fold;
    pair.d_a.categories = d.categories;
    pair.d_a.base_dir = d.base_dir;
    pair.d_m.categories = d.categories;
    pair.d_m.base_dir = d.base_dir;
    const size_t begin = offset;
    const size_t end = offset + sizes[fold];
    for (size_t i = 0; i < n; ++i) {
      const AnnotatedImage& img = d.images[order[i]];
      if (i >= begin && i < end) {
        pair.d_a.images.push_back(img);
      } else {
        pair.d_m.images.push_back(img);
      }
    }
    offset = end;
    folds.push_back(std::move(pair));
  }
  return folds;
}

Dataset apply_operator_to_all(const Dataset& d, const Policy& policy,
                              const PlacementConfig& placement, uint64_t stream_seed) {
  Dataset out;
  out.categories = d.categories;
  out.images.reserve(d.images.size());
  for (size_t i = 0; i < d.images.size(); ++i) {
    AnnotatedImage img = load_image(d, i);
    Rng rng(derive_seed(stream_seed, img.id));
    out.images.push_back(apply_operator(img, policy.op, policy.m, placement, rng));
  }
  return out;
}

std::vector<tpe::Trial> search_fold(const FoldPair& fold, LossEvaluator& evaluator,
                                    const SearchConfig& cfg) {
  const uint64_t fold_seed = cfg.seed ^ fold.fold_index;

  std::unique_ptr<Model> model;
  try {
    model = evaluator.train(fold.d_m, fold.fold_index);
  } catch (const std::exception& e) {
    throw EvaluatorFailure(fold.fold_index, 0, {}, std::string("train: ") + e.what());
  }

  uint64_t trial_counter = 0;
  const auto objective = [&](const tpe::Point& point) {
    const Policy policy = point_to_policy(point);
    const uint64_t trial_seed = derive_seed(fold_seed, trial_counter);
    ++trial_counter;
    const Dataset augmented = apply_operator_to_all(fold.d_a, policy, cfg.placement, trial_seed);
    return evaluator.loss(*model, augmented);
  };

  tpe::TpeConfig tpe_cfg = cfg.tpe;
  tpe_cfg.rng_seed = fold_seed;
  Rng rng(fold_seed);
  try {
    return tpe::optimize(policy_space(), objective, cfg.num_search, tpe_cfg, rng);
  } catch (const tpe::ObjectiveFailure& e) {
    throw EvaluatorFailure(fold.fold_index, e.index(), e.history(), e.what());
  }
}

std::vector<tpe::Trial> select_top_n(std::span<const tpe::Trial> history, uint32_t n) {
  if (history.size() < n) {
    throw NotEnoughTrials("select_top_n: need " + std::to_string(n) + " trials, have " +
                          std::to_string(history.size()));
  }
  std::vector<tpe::Trial> sorted(history.begin(), history.end());
  std::sort(sorted.begin(), sorted.end(), [](const tpe::Trial& a, const tpe::Trial& b) {
    if (a.loss != b.loss) {
      return a.loss < b.loss;
    }
    return a.index < b.index;
  });
  sorted.resize(n);
  return sorted;
}

namespace {

struct FoldOutcome {
  std::vector<tpe::Trial> trials;
  bool failed = false;
  std::string error;
};

void write_policy_set(const PolicySet& set, const std::string& path) {
  ordered_json doc;
  doc["policies"] = ordered_json::array();
  for (const SearchedPolicy& sp : set.policies) {
    ordered_json entry;
    entry["op"] = std::string(to_string(sp.policy.op));
    entry["p"] = sp.policy.p;
    entry["m"] = static_cast<int>(sp.policy.m);
    entry["fold"] = sp.fold;
    entry["trial"] = sp.trial;
    entry["loss"] = sp.loss;
    doc["policies"].push_back(std::move(entry));
  }
  doc["failed_folds"] = set.failed_folds;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out << doc.dump(2) << "\n";
}

}  // namespace

PolicySet run_search(const Dataset& d, LossEvaluator& evaluator, const SearchConfig& cfg,
                     const std::string& out_dir, const FoldProgress& on_fold_done) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create '" + out_dir + "': " + ec.message());
  }

  const std::vector<FoldPair> folds = kfold_split(d, cfg.k_folds, cfg.seed);
  std::vector<FoldOutcome> outcomes(folds.size());

  const auto run_one = [&](size_t i) {
    try {
      outcomes[i].trials = search_fold(folds[i], evaluator, cfg);
    } catch (const EvaluatorFailure& e) {
      outcomes[i].failed = true;
      outcomes[i].error = e.what();
      outcomes[i].trials = e.history();
    }
    if (on_fold_done) {
      on_fold_done(static_cast<uint32_t>(i), outcomes[i].trials);
    }
  };

  uint32_t workers = std::max<uint32_t>(1, cfg.workers);
  if (!evaluator.concurrent_loss_ok()) {
    workers = 1;
  }
  if (workers <= 1) {
    for (size_t i = 0; i < folds.size(); ++i) {
      run_one(i);
    }
  } else {
    for (size_t begin = 0; begin < folds.size(); begin += workers) {
      std::vector<std::thread> batch;
      const size_t end = std::min(folds.size(), begin + workers);
      for (size_t i = begin; i < end; ++i) {
        batch.emplace_back(run_one, i);
      }
      for (std::thread& t : batch) {
        t.join();
      }
    }
  }

  PolicySet set;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const FoldOutcome& outcome = outcomes[i];
    write_trials_jsonl(
        (fs::path(out_dir) / ("trials_fold" + std::to_string(i) + ".jsonl")).string(),
        outcome.trials);
    if (outcome.failed) {
      log_warn("search: fold " + std::to_string(i) + " failed: " + outcome.error);
      set.failed_folds.push_back(static_cast<uint32_t>(i));
      continue;
    }
    for (const tpe::Trial& t : select_top_n(outcome.trials, cfg.top_n)) {
      set.policies.push_back(
          SearchedPolicy{point_to_policy(t.params), static_cast<uint32_t>(i), t.index, t.loss});
    }
  }

  write_policy_set(set, (fs::path(out_dir) / "policies.json").string());

  ordered_json report;
  report["config"] = {
      {"k_folds", cfg.k_folds},
      {"num_search", cfg.num_search},
      {"top_n", cfg.top_n},
      {"seed", cfg.seed},
      {"workers", cfg.workers},
      {"placement",
       {{"max_attempts", cfg.placement.max_attempts}, {"margin", cfg.placement.margin}}},
      {"tpe",
       {{"gamma", cfg.tpe.gamma},
        {"n_startup", cfg.tpe.n_startup},
        {"n_candidates", cfg.tpe.n_candidates},
        {"bandwidth_floor", cfg.tpe.bandwidth_floor},
        {"prior_weight", cfg.tpe.prior_weight}}},
  };
  report["folds"] = ordered_json::array();
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const FoldOutcome& outcome = outcomes[i];
    ordered_json fold_report;
    fold_report["fold"] = i;
    fold_report["status"] = outcome.failed ? "failed" : "ok";
    fold_report["trials"] = outcome.trials.size();
    if (outcome.trials.empty()) {
      fold_report["best_loss"] = nullptr;
    } else {
      fold_report["best_loss"] =
          std::min_element(outcome.trials.begin(), outcome.trials.end(),
                           [](const tpe::Trial& a, const tpe::Trial& b) {
                             return a.loss < b.loss;
                           })
              ->loss;
    }
    if (outcome.failed) {
      fold_report["error"] = outcome.error;
    }
    report["folds"].push_back(std::move(fold_report));
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  report["wall_clock_seconds"] = elapsed.count();
  {
    const std::string path = (fs::path(out_dir) / "search_report.json").string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write '" + path + "'");
    }
    out << report.dump(2) << "\n";
  }
  return set;
}

}  // namespace smallaug
