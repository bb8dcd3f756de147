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

#ifndef SMALLAUG_ERRORS_HPP_
#define SMALLAUG_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace smallaug {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument values. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or OS failure. The CLI maps this to exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A required field of a structured document is missing or ill-typed.
/// `path()` names the first offending field, e.g. "annotations[0].image_id".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Line-level error in a text annotation file. Line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(int line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what), line_no_(line_no) {}

  int line_no() const noexcept { return line_no_; }

 private:
  int line_no_ = 0;
};

/// A DOTA line has the wrong field count or a non-numeric coordinate.
class MalformedLine : public ParseError {
 public:
  using ParseError::ParseError;
};

/// The axis-aligned hull of a quad is empty after clipping to the image.
class DegenerateBox : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace smallaug

#endif  // SMALLAUG_ERRORS_HPP_
