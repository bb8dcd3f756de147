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

#ifndef SMALLAUG_MANIFEST_HPP_
#define SMALLAUG_MANIFEST_HPP_

#include <cstddef>
#include <string>

#include "smallaug/data_model.hpp"

namespace smallaug {

/// Loads a dataset manifest:
///   {"images": [{"id", "file", "width", "height"}...], "annotations_file": "..."}
/// Paths are relative to the manifest location. Annotations are read from the
/// referenced COCO-style file; pixel data stays on disk until load_image().
/// Throws IoError when files are unreadable and SchemaError on bad structure.
Dataset load_manifest(const std::string& manifest_path);

/// Returns a copy of d.images[index] with pixels decoded from its file.
/// A no-op copy when the pixels are already in memory.
AnnotatedImage load_image(const Dataset& d, size_t index);

/// Writes `dir/manifest.json`, `dir/annotations.json` and the image files.
/// Images with in-memory pixels are materialized as PNGs under `dir/images/`;
/// manifest-backed images are referenced by a path relative to `dir` without
/// copying. Creates `dir` if needed. Throws IoError on failure.
void write_manifest(const Dataset& d, const std::string& dir);

}  // namespace smallaug

#endif  // SMALLAUG_MANIFEST_HPP_
