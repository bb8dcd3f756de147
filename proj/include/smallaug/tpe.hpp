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

#ifndef SMALLAUG_TPE_HPP_
#define SMALLAUG_TPE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "smallaug/errors.hpp"
#include "smallaug/rng.hpp"

namespace smallaug::tpe {

// ---------------------------------------------------------------------------
// Search space
// ---------------------------------------------------------------------------

struct Categorical {
  std::vector<std::string> choices;
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};

/// Discrete range [lo, hi], both inclusive. Modeled like a categorical over
/// its levels, which avoids kernel edge effects on tiny grids.
struct IntUniform {
  int64_t lo = 0;
  int64_t hi = 1;
};

using Dim = std::variant<Categorical, Uniform, IntUniform>;

struct ParamSpace {
  std::vector<Dim> dims;
};

/// One coordinate of a sampled point: the choice index for Categorical, the
/// value for IntUniform, the real value for Uniform.
using Value = std::variant<int64_t, double>;
using Point = std::vector<Value>;

bool in_space(const ParamSpace& space, const Point& p);

struct Trial {
  Point params;
  double loss = 0.0;  // finite, lower is better
  uint64_t index = 0;
};

struct TpeConfig {
  double gamma = 0.25;          // fraction of trials modeled as "good"
  uint32_t n_startup = 10;      // random trials before density modeling
  uint32_t n_candidates = 24;   // candidates scored per suggestion
  double bandwidth_floor = 1e-3;
  double prior_weight = 1.0;    // additive smoothing for discrete dims
  uint64_t rng_seed = 0;
};

void validate(const TpeConfig& cfg);  // throws ConfigError

// ---------------------------------------------------------------------------
// Parzen estimators
// ---------------------------------------------------------------------------

/// Splits the history into (good, bad): good is the ceil(gamma*n) lowest-loss
/// trials, ties broken by lower index. History must be non-empty.
std::pair<std::vector<Trial>, std::vector<Trial>> split_trials(std::span<const Trial> history,
                                                               double gamma);

/// Per-dimension density model.
///  - Categorical / IntUniform: frequencies with additive prior_weight
///    smoothing, P(c) = (count(c) + w) / (n + w*k).
///  - Uniform: Gaussian kernel per observation, Silverman bandwidth
///    max(bandwidth_floor, 1.06 * sigma * n^(-1/5)), each kernel truncated to
///    [lo, hi] and renormalized. No observations: uniform over the range.
class DensityModel {
 public:
  static DensityModel fit(const Dim& dim, std::span<const Value> observations,
                          const TpeConfig& cfg);

  double log_density(const Value& v) const;
  Value sample(Rng& rng) const;

 private:
  struct Discrete {
    int64_t base = 0;  // value of level 0 (0 for Categorical)
    std::vector<double> probs;
  };
  struct Kernels {
    double lo = 0.0;
    double hi = 1.0;
    double bandwidth = 1.0;
    std::vector<double> centers;     // empty means uniform over [lo, hi]
    std::vector<double> log_norms;   // per-kernel log of truncated mass
  };
  std::variant<Discrete, Kernels> model_;
};

// ---------------------------------------------------------------------------
// Suggestion loop
// ---------------------------------------------------------------------------

Point uniform_sample(const ParamSpace& space, Rng& rng);

/// Proposes the next point. Below n_startup history entries this is a uniform
/// draw; afterwards candidates are sampled from the good-trial density l and
/// the one maximizing sum over dims of log l(x) - log g(x) wins. The policy
/// space is flat, so dimensions are sampled independently.
Point suggest(const ParamSpace& space, std::span<const Trial> history, const TpeConfig& cfg,
              Rng& rng);

/// The objective threw or returned a non-finite loss. Carries the completed
/// trials so callers can persist partial progress.
class ObjectiveFailure : public Error {
 public:
  ObjectiveFailure(uint64_t index, std::vector<Trial> history, const std::string& what)
      : Error("trial " + std::to_string(index) + ": " + what),
        index_(index),
        history_(std::move(history)) {}

  uint64_t index() const noexcept { return index_; }
  const std::vector<Trial>& history() const noexcept { return history_; }

 private:
  uint64_t index_ = 0;
  std::vector<Trial> history_;
};

using Objective = std::function<double(const Point&)>;

/// Runs n_trials suggest/evaluate rounds and returns the full history with
/// sequential indices. Throws ObjectiveFailure on a failing objective.
std::vector<Trial> optimize(const ParamSpace& space, const Objective& objective,
                            uint32_t n_trials, const TpeConfig& cfg, Rng& rng);

}  // namespace smallaug::tpe

#endif  // SMALLAUG_TPE_HPP_
