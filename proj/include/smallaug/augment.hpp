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

#ifndef SMALLAUG_AUGMENT_HPP_
#define SMALLAUG_AUGMENT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "smallaug/data_model.hpp"
#include "smallaug/errors.hpp"
#include "smallaug/rng.hpp"

namespace smallaug {

/// The three copy-paste operators: duplicate one, a random subset (two or
/// more), or all of the image's small objects.
enum class Operation : uint8_t { SingleObject = 0, MultipleObjects = 1, AllObjects = 2 };

inline constexpr Operation kAllOperations[] = {Operation::SingleObject,
                                               Operation::MultipleObjects,
                                               Operation::AllObjects};

std::string_view to_string(Operation op);  // "single" | "multiple" | "all"
std::optional<Operation> operation_from_string(std::string_view name);

/// One augmentation policy: operator, per-image application probability and
/// per-object paste count.
struct Policy {
  Operation op = Operation::SingleObject;
  double p = 0.0;
  uint8_t m = 1;  // in {1, 2, 3}

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct PlacementConfig {
  uint32_t max_attempts = 50;  // rejection-sampling budget per paste
  uint32_t margin = 0;         // pixels kept clear of the image border
  uint64_t rng_seed = 0;       // base seed; per-image streams derive from it
};

/// Source selection or placement counters for one augmented image.
struct AugmentStats {
  uint32_t selected = 0;  // copy sources chosen
  uint32_t pasted = 0;    // pastes that found a spot
  uint32_t skipped = 0;   // pastes abandoned after max_attempts
  bool applied = false;   // the probability gate fired

  AugmentStats& operator+=(const AugmentStats& o) {
    selected += o.selected;
    pasted += o.pasted;
    skipped += o.skipped;
    applied = applied || o.applied;
    return *this;
  }
};

/// The source box or paste target does not fit between the image margins.
class SourceTooLarge : public Error {
 public:
  using Error::Error;
};

class EmptyPolicySet : public Error {
 public:
  using Error::Error;
};

/// Picks copy sources among the image's small, non-difficult, original
/// instances and returns their indices in ascending order. SingleObject picks
/// one uniformly; MultipleObjects a uniform subset of uniform size in
/// [2, count]; AllObjects every eligible instance. Returns an empty list when
/// the operator cannot be satisfied (no eligible objects, or fewer than two
/// for MultipleObjects) — a no-op, not an error.
std::vector<size_t> select_sources(const AnnotatedImage& img, Operation op, Rng& rng);

/// Rejection-samples an in-bounds location of source's size whose interior
/// intersects no box in `occupied`. Returns nullopt after max_attempts
/// failures. Throws SourceTooLarge when no in-bounds location exists at all.
std::optional<BBox> find_paste_location(const AnnotatedImage& img, const BBox& source,
                                        std::span<const BBox> occupied,
                                        const PlacementConfig& cfg, Rng& rng);

/// Applies one policy to the image: with probability 1-p the image is
/// returned unchanged; otherwise each selected source is pasted m times to
/// non-overlapping random locations. Pasted rectangles are verbatim pixel
/// copies (no edge blending) and are appended as origin=Pasted instances.
/// Failed placements are skipped. Requires pixel data to be loaded.
AnnotatedImage apply_policy(const AnnotatedImage& img, const Policy& policy,
                            const PlacementConfig& cfg, Rng& rng,
                            AugmentStats* stats = nullptr);

/// apply_policy without the probability gate; the operator always runs.
/// The policy search evaluates candidates through this entry point.
AnnotatedImage apply_operator(const AnnotatedImage& img, Operation op, uint8_t m,
                              const PlacementConfig& cfg, Rng& rng,
                              AugmentStats* stats = nullptr);

/// Draws one policy uniformly from the set and applies it.
/// Throws EmptyPolicySet when `policies` is empty.
AnnotatedImage apply_policy_set(const AnnotatedImage& img, std::span<const Policy> policies,
                                const PlacementConfig& cfg, Rng& rng,
                                AugmentStats* stats = nullptr);

}  // namespace smallaug

#endif  // SMALLAUG_AUGMENT_HPP_
