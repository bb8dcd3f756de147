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

#ifndef SMALLAUG_IMAGE_IO_HPP_
#define SMALLAUG_IMAGE_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace smallaug {

struct DecodedImage {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> rgb;  // row-major, width*height*3
};

/// Reads a PNG or JPEG file (format detected from magic bytes) as 8-bit RGB.
/// Grayscale and paletted inputs are expanded, alpha is stripped.
/// Throws IoError on unreadable files or unsupported formats.
DecodedImage read_image(const std::string& path);

/// Writes an 8-bit RGB buffer as a PNG file. Output bytes are deterministic
/// for identical input. Throws IoError on failure.
void write_png(const std::string& path, uint32_t width, uint32_t height,
               const std::vector<uint8_t>& rgb);

}  // namespace smallaug

#endif  // SMALLAUG_IMAGE_IO_HPP_
