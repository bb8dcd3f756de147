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

#ifndef SMALLAUG_CHART_HPP_
#define SMALLAUG_CHART_HPP_

#include <array>
#include <string>

namespace smallaug {

/// Grouped bar chart of the summed p and m values per operation
/// (x: operation, y: parameter sums), written as a PNG. Best-effort
/// presentation output; the CSV next to it is the machine contract.
void write_policy_chart(const std::string& path, const std::array<double, 3>& p_sums,
                        const std::array<double, 3>& m_sums);

}  // namespace smallaug

#endif  // SMALLAUG_CHART_HPP_
