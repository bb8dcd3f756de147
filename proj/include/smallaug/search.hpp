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

#ifndef SMALLAUG_SEARCH_HPP_
#define SMALLAUG_SEARCH_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smallaug/augment.hpp"
#include "smallaug/data_model.hpp"
#include "smallaug/errors.hpp"
#include "smallaug/tpe.hpp"

namespace smallaug {

struct SearchConfig {
  uint32_t k_folds = 5;
  uint32_t num_search = 200;
  uint32_t top_n = 4;
  uint64_t seed = 0;
  uint32_t workers = 1;  // folds run in parallel up to this many threads
  PlacementConfig placement;
  tpe::TpeConfig tpe;
};

/// Throws ConfigError when k_folds < 2, num_search < 1, top_n < 1 or
/// top_n > num_search.
void validate(const SearchConfig& cfg);

class TooFewImages : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NotEnoughTrials : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// One cross-validation fold: the model is trained on d_m and candidate
/// policies are scored on the augmented d_a.
struct FoldPair {
  Dataset d_m;
  Dataset d_a;
  uint32_t fold_index = 0;
};

/// Shuffles image order by seed, then partitions into k chunks whose sizes
/// differ by at most one (larger chunks first). Fold i holds chunk i as d_a
/// and the remaining images as d_m. Throws TooFewImages when |images| < k.
std::vector<FoldPair> kfold_split(const Dataset& d, uint32_t k, uint64_t seed);

/// Opaque per-fold model handle produced by LossEvaluator::train.
struct Model {
  virtual ~Model() = default;
};

/// Boundary to the detector stand-in. train() fits the fold's probe model on
/// un-augmented data once; loss() scores an augmented dataset against it
/// (finite, lower = distributionally closer to the training data).
class LossEvaluator {
 public:
  virtual ~LossEvaluator() = default;

  virtual std::unique_ptr<Model> train(const Dataset& d_m, uint32_t fold) = 0;
  virtual double loss(Model& model, const Dataset& augmented) = 0;

  /// Whether loss() calls may run concurrently (folds in parallel share this
  /// evaluator). When false, run_search serializes folds regardless of the
  /// configured worker count.
  virtual bool concurrent_loss_ok() const { return false; }
};

/// A fold's evaluator broke down; carries the trials completed before the
/// failure so the run can be persisted.
class EvaluatorFailure : public Error {
 public:
  EvaluatorFailure(uint32_t fold, uint64_t trial, std::vector<tpe::Trial> history,
                   const std::string& what)
      : Error("fold " + std::to_string(fold) + ", trial " + std::to_string(trial) + ": " + what),
        fold_(fold),
        trial_(trial),
        history_(std::move(history)) {}

  uint32_t fold() const noexcept { return fold_; }
  uint64_t trial() const noexcept { return trial_; }
  const std::vector<tpe::Trial>& history() const noexcept { return history_; }

 private:
  uint32_t fold_ = 0;
  uint64_t trial_ = 0;
  std::vector<tpe::Trial> history_;
};

/// Applies the policy's operator to every image (probability gate bypassed:
/// the search must see the operator's effect on each evaluation). Each image
/// gets its own stream derived from (stream_seed, image id). Pixel data is
/// loaded on demand; the result is fully in memory.
Dataset apply_operator_to_all(const Dataset& d, const Policy& policy,
                              const PlacementConfig& placement, uint64_t stream_seed);

/// Algorithm core for one fold: trains the probe model on d_m, then runs
/// num_search TPE trials where each candidate policy is applied to d_a and
/// scored by the evaluator. The fold's rng stream is seed XOR fold_index.
/// Throws EvaluatorFailure with partial history on evaluator breakdown.
std::vector<tpe::Trial> search_fold(const FoldPair& fold, LossEvaluator& evaluator,
                                    const SearchConfig& cfg);

/// The n lowest-loss trials, ties broken by lower index; duplicates of equal
/// parameters are retained. Throws NotEnoughTrials when |history| < n.
std::vector<tpe::Trial> select_top_n(std::span<const tpe::Trial> history, uint32_t n);

struct SearchedPolicy {
  Policy policy;
  uint32_t fold = 0;     // provenance
  uint64_t trial = 0;
  double loss = 0.0;
};

/// The final policy collection T_*: each completed fold contributes its top-N
/// trials. failed_folds is the failure marker for partial runs.
struct PolicySet {
  std::vector<SearchedPolicy> policies;
  std::vector<uint32_t> failed_folds;
};

/// Called as each fold finishes (possibly from a worker thread).
using FoldProgress = std::function<void(uint32_t fold, const std::vector<tpe::Trial>& trials)>;

/// Runs the full search: K-fold split, per-fold search (parallel up to
/// cfg.workers when the evaluator allows it), top-N accumulation. Writes
/// policies.json, trials_fold{k}.jsonl and search_report.json into out_dir.
/// A failed fold is skipped with a marker; completed folds still contribute.
PolicySet run_search(const Dataset& d, LossEvaluator& evaluator, const SearchConfig& cfg,
                     const std::string& out_dir, const FoldProgress& on_fold_done = {});

}  // namespace smallaug

#endif  // SMALLAUG_SEARCH_HPP_
