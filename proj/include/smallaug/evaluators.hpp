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

#ifndef SMALLAUG_EVALUATORS_HPP_
#define SMALLAUG_EVALUATORS_HPP_

#include <memory>
#include <string>

#include "smallaug/augment.hpp"
#include "smallaug/errors.hpp"
#include "smallaug/search.hpp"

namespace smallaug {

/// Target for the synthetic oracle. The oracle reconstructs the applied
/// operator, application fraction and paste multiplicity purely from the
/// augmented dataset's Pasted-instance statistics and scores their distance
/// to this target — it observes data only, the way a trained model would.
struct OracleSpec {
  Policy target;        // (op*, p*, m*)
  double sigma = 0.0;   // stddev of additive Gaussian noise
  double w_op = 1.0;    // weight of the operator-mismatch term
  double w_p = 0.5;     // weight of |applied_fraction - p*|
  double w_m = 0.5;     // weight of |mean pastes per source - m*| / 2
  uint64_t seed = 0;    // noise stream seed (per-fold streams derive from it)
};

/// Parses an oracle spec file:
///   {"op":"multiple","p":0.6,"m":2,"sigma":0.02,"w_op":1,"w_p":0.5,"w_m":0.5,"seed":0}
/// Only op/p/m are required. Throws SchemaError on bad fields.
OracleSpec parse_oracle_spec(const std::string& json_text);
OracleSpec load_oracle_spec(const std::string& path);

/// Desk-scale stand-in for detector training; train() is a no-op and loss()
/// is computed from augmentation statistics. Noise is drawn from a
/// deterministic per-fold stream, so runs are reproducible.
std::unique_ptr<LossEvaluator> make_synthetic_oracle(const OracleSpec& spec);

/// The external command misbehaved: non-zero exit, unparseable output or a
/// non-finite loss. Captured stderr is attached to the message.
class EvaluatorProtocolError : public Error {
 public:
  EvaluatorProtocolError(const std::string& what, std::string stderr_text)
      : Error(stderr_text.empty() ? what : what + "\n--- stderr ---\n" + stderr_text),
        stderr_(std::move(stderr_text)) {}

  const std::string& stderr_output() const noexcept { return stderr_; }

 private:
  std::string stderr_;
};

/// Bridges to real detector training via shell commands.
///
/// train: writes the fold's training manifest to <workdir>/fold_<k>/train/,
/// then runs train_cmd with SMALLAUG_MANIFEST, SMALLAUG_FOLD and SMALLAUG_OUT
/// set; the command must exit 0 and print the model artifact path as its last
/// stdout line.
///
/// loss: writes the augmented manifest to <workdir>/fold_<k>/eval_<i>/, runs
/// loss_cmd with SMALLAUG_MANIFEST and SMALLAUG_MODEL set, and parses the
/// last stdout line as {"loss": <finite float>}.
///
/// Commands are stateless, so concurrent loss() calls are permitted.
std::unique_ptr<LossEvaluator> make_subprocess_evaluator(std::string train_cmd,
                                                         std::string loss_cmd,
                                                         std::string workdir);

}  // namespace smallaug

#endif  // SMALLAUG_EVALUATORS_HPP_
