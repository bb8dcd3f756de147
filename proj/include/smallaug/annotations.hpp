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

#ifndef SMALLAUG_ANNOTATIONS_HPP_
#define SMALLAUG_ANNOTATIONS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "smallaug/data_model.hpp"

namespace smallaug {

/// Parses DOTA annotation text for one image. Each content line is
///   x1 y1 x2 y2 x3 y3 x4 y4 category difficult
/// with at least 10 whitespace-separated fields; extra trailing fields are
/// ignored. Lines starting with "imagesource" or "gsd" and blank lines are
/// skipped. The oriented quad is reduced to its axis-aligned hull and clipped
/// to the image.
///
/// Throws MalformedLine on a wrong field count or non-numeric coordinate and
/// DegenerateBox when the clipped hull has zero width or height.
std::vector<Instance> parse_dota(std::string_view text, uint32_t image_width,
                                 uint32_t image_height);

/// Parses a COCO-style JSON document (images[], annotations[], categories[])
/// into a Dataset. Boxes are taken verbatim from bbox=[x,y,w,h] and clipped
/// to the image bounds. Image ids may be JSON strings or integers; they are
/// canonicalized to strings. Throws SchemaError naming the first
/// missing/ill-typed field.
Dataset parse_coco(std::string_view json_text);

/// Serializes a Dataset to COCO-style JSON with deterministic field order.
/// parse_coco(write_coco(d)) reproduces d (annotation-level fields; pixel
/// buffers are not part of the document).
std::string write_coco(const Dataset& d);

}  // namespace smallaug

#endif  // SMALLAUG_ANNOTATIONS_HPP_
