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

#ifndef SMALLAUG_CLI_HPP_
#define SMALLAUG_CLI_HPP_

#include <string>
#include <vector>

namespace smallaug::cli {

/// Entry point shared by the binary and the tests. Exit codes:
/// 0 success, 2 configuration/validation error, 3 I/O error,
/// 4 evaluator protocol failure.
int run(int argc, const char* const* argv);

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace smallaug::cli

#endif  // SMALLAUG_CLI_HPP_
