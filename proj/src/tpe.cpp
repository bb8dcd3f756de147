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

#include "smallaug/tpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace smallaug::tpe {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double log_normal_pdf(double diff, double sigma) {
  const double z = diff / sigma;
  return -0.5 * kLogTwoPi - std::log(sigma) - 0.5 * z * z;
}

double log_sum_exp(std::span<const double> logs) {
  const double max = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(max)) {
    return max;
  }
  double sum = 0.0;
  for (const double v : logs) {
    sum += std::exp(v - max);
  }
  return max + std::log(sum);
}

}  // namespace

void validate(const TpeConfig& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    throw ConfigError("tpe: gamma must be in (0, 1)");
  }
  if (cfg.n_startup < 1) {
    throw ConfigError("tpe: n_startup must be >= 1");
  }
  if (cfg.n_candidates < 1) {
    throw ConfigError("tpe: n_candidates must be >= 1");
  }
  if (!(cfg.bandwidth_floor > 0.0)) {
    throw ConfigError("tpe: bandwidth_floor must be > 0");
  }
  if (cfg.prior_weight < 0.0) {
    throw ConfigError("tpe: prior_weight must be >= 0");
  }
}

bool in_space(const ParamSpace& space, const Point& p) {
  if (p.size() != space.dims.size()) {
    return false;
  }
  for (size_t i = 0; i < p.size(); ++i) {
    const bool ok = std::visit(
        [&](const auto& dim) -> bool {
          using D = std::decay_t<decltype(dim)>;
          if constexpr (std::is_same_v<D, Categorical>) {
            const auto* v = std::get_if<int64_t>(&p[i]);
            return v != nullptr && *v >= 0 && *v < static_cast<int64_t>(dim.choices.size());
          } else if constexpr (std::is_same_v<D, IntUniform>) {
            const auto* v = std::get_if<int64_t>(&p[i]);
            return v != nullptr && *v >= dim.lo && *v <= dim.hi;
          } else {
            const auto* v = std::get_if<double>(&p[i]);
            return v != nullptr && *v >= dim.lo && *v <= dim.hi;
          }
        },
        space.dims[i]);
    if (!ok) {
      return false;
    }
  }
  return true;
}

std::pair<std::vector<Trial>, std::vector<Trial>> split_trials(std::span<const Trial> history,
                                                               double gamma) {
  std::vector<Trial> sorted(history.begin(), history.end());
  std::sort(sorted.begin(), sorted.end(), [](const Trial& a, const Trial& b) {
    if (a.loss != b.loss) {
      return a.loss < b.loss;
    }
    return a.index < b.index;
  });
  const size_t n_good =
      static_cast<size_t>(std::ceil(gamma * static_cast<double>(sorted.size())));
  std::vector<Trial> good(sorted.begin(), sorted.begin() + n_good);
  std::vector<Trial> bad(sorted.begin() + n_good, sorted.end());
  return {std::move(good), std::move(bad)};
}

DensityModel DensityModel::fit(const Dim& dim, std::span<const Value> observations,
                               const TpeConfig& cfg) {
  DensityModel model;
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Categorical> || std::is_same_v<D, IntUniform>) {
          Discrete disc;
          size_t levels = 0;
          if constexpr (std::is_same_v<D, Categorical>) {
            disc.base = 0;
            levels = d.choices.size();
          } else {
            disc.base = d.lo;
            levels = static_cast<size_t>(d.hi - d.lo + 1);
          }
          std::vector<double> counts(levels, 0.0);
          for (const Value& v : observations) {
            counts[static_cast<size_t>(std::get<int64_t>(v) - disc.base)] += 1.0;
          }
          const double total = static_cast<double>(observations.size()) +
                               cfg.prior_weight * static_cast<double>(levels);
          disc.probs.resize(levels);
          for (size_t i = 0; i < levels; ++i) {
            disc.probs[i] = (counts[i] + cfg.prior_weight) / total;
          }
          model.model_ = std::move(disc);
        } else {
          Kernels k;
          k.lo = d.lo;
          k.hi = d.hi;
          for (const Value& v : observations) {
            k.centers.push_back(std::get<double>(v));
          }
          const size_t n = k.centers.size();
          if (n > 0) {
            double sigma = 0.0;
            if (n >= 2) {
              const double mean =
                  std::accumulate(k.centers.begin(), k.centers.end(), 0.0) / double(n);
              double ss = 0.0;
              for (const double c : k.centers) {
                ss += (c - mean) * (c - mean);
              }
              sigma = std::sqrt(ss / double(n - 1));
            }
            // Silverman's rule with a floor so repeated observations keep a
            // proper density.
            k.bandwidth =
                std::max(cfg.bandwidth_floor, 1.06 * sigma * std::pow(double(n), -0.2));
            k.log_norms.resize(n);
            for (size_t i = 0; i < n; ++i) {
              const double mass = normal_cdf((k.hi - k.centers[i]) / k.bandwidth) -
                                  normal_cdf((k.lo - k.centers[i]) / k.bandwidth);
              k.log_norms[i] = std::log(std::max(mass, 1e-300));
            }
          }
          model.model_ = std::move(k);
        }
      },
      dim);
  return model;
}

double DensityModel::log_density(const Value& v) const {
  if (const auto* disc = std::get_if<Discrete>(&model_)) {
    const size_t level = static_cast<size_t>(std::get<int64_t>(v) - disc->base);
    return std::log(disc->probs[level]);
  }
  const Kernels& k = std::get<Kernels>(model_);
  const double x = std::get<double>(v);
  if (k.centers.empty()) {
    return -std::log(k.hi - k.lo);
  }
  std::vector<double> logs(k.centers.size());
  const double log_weight = -std::log(static_cast<double>(k.centers.size()));
  for (size_t i = 0; i < k.centers.size(); ++i) {
    logs[i] = log_weight + log_normal_pdf(x - k.centers[i], k.bandwidth) - k.log_norms[i];
  }
  return log_sum_exp(logs);
}

Value DensityModel::sample(Rng& rng) const {
  if (const auto* disc = std::get_if<Discrete>(&model_)) {
    double u = rng.next_double();
    size_t level = disc->probs.size() - 1;
    for (size_t i = 0; i < disc->probs.size(); ++i) {
      if (u < disc->probs[i]) {
        level = i;
        break;
      }
      u -= disc->probs[i];
    }
    return Value{disc->base + static_cast<int64_t>(level)};
  }
  const Kernels& k = std::get<Kernels>(model_);
  if (k.centers.empty()) {
    return Value{k.lo + rng.next_double() * (k.hi - k.lo)};
  }
  const double center = k.centers[rng.next_below(k.centers.size())];
  // Truncated normal by rejection; centers lie inside [lo, hi], so the
  // acceptance probability is at least ~1/2.
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double x = center + k.bandwidth * rng.next_gaussian();
    if (x >= k.lo && x <= k.hi) {
      return Value{x};
    }
  }
  return Value{std::clamp(center, k.lo, k.hi)};
}

Point uniform_sample(const ParamSpace& space, Rng& rng) {
  Point p;
  p.reserve(space.dims.size());
  for (const Dim& dim : space.dims) {
    p.push_back(std::visit(
        [&](const auto& d) -> Value {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, Categorical>) {
            return Value{static_cast<int64_t>(rng.next_below(d.choices.size()))};
          } else if constexpr (std::is_same_v<D, IntUniform>) {
            return Value{rng.next_int(d.lo, d.hi)};
          } else {
            return Value{d.lo + rng.next_double() * (d.hi - d.lo)};
          }
        },
        dim));
  }
  return p;
}

Point suggest(const ParamSpace& space, std::span<const Trial> history, const TpeConfig& cfg,
              Rng& rng) {
  if (history.size() < cfg.n_startup) {
    return uniform_sample(space, rng);
  }
  auto [good, bad] = split_trials(history, cfg.gamma);
  if (good.empty() || bad.empty()) {
    return uniform_sample(space, rng);
  }

  const size_t n_dims = space.dims.size();
  std::vector<DensityModel> l_models;
  std::vector<DensityModel> g_models;
  l_models.reserve(n_dims);
  g_models.reserve(n_dims);
  std::vector<Value> column;
  for (size_t d = 0; d < n_dims; ++d) {
    column.clear();
    for (const Trial& t : good) {
      column.push_back(t.params[d]);
    }
    l_models.push_back(DensityModel::fit(space.dims[d], column, cfg));
    column.clear();
    for (const Trial& t : bad) {
      column.push_back(t.params[d]);
    }
    g_models.push_back(DensityModel::fit(space.dims[d], column, cfg));
  }

  Point best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (uint32_t c = 0; c < cfg.n_candidates; ++c) {
    Point candidate;
    candidate.reserve(n_dims);
    for (size_t d = 0; d < n_dims; ++d) {
      candidate.push_back(l_models[d].sample(rng));
    }
    double score = 0.0;
    for (size_t d = 0; d < n_dims; ++d) {
      score += l_models[d].log_density(candidate[d]) - g_models[d].log_density(candidate[d]);
    }
    if (score > best_score) {
      best_score = score;
      best = std::move(candidate);
    }
  }
  return best;
}

std::vector<Trial> optimize(const ParamSpace& space, const Objective& objective,
                            uint32_t n_trials, const TpeConfig& cfg, Rng& rng) {
  if (n_trials < 1) {
    throw ConfigError("tpe: n_trials must be >= 1");
  }
  validate(cfg);
  std::vector<Trial> history;
  history.reserve(n_trials);
  for (uint32_t i = 0; i < n_trials; ++i) {
    Point point = suggest(space, history, cfg, rng);
    double loss = 0.0;
    try {
      loss = objective(point);
    } catch (const std::exception& e) {
      throw ObjectiveFailure(i, std::move(history), e.what());
    }
    if (!std::isfinite(loss)) {
      throw ObjectiveFailure(i, std::move(history), "objective returned a non-finite loss");
    }
    history.push_back(Trial{std::move(point), loss, i});
  }
  return history;
}

}  // namespace smallaug::tpe
