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

#include "smallaug/evaluators.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "smallaug/manifest.hpp"
#include "smallaug/rng.hpp"

namespace smallaug {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Synthetic oracle
// ---------------------------------------------------------------------------

OracleSpec parse_oracle_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw SchemaError("$", "expected object");
  }
  OracleSpec spec;
  if (!doc.contains("op") || !doc.at("op").is_string()) {
    throw SchemaError("$.op", "expected string");
  }
  const auto op = operation_from_string(doc.at("op").get<std::string>());
  if (!op.has_value()) {
    throw SchemaError("$.op", "expected \"single\", \"multiple\" or \"all\"");
  }
  spec.target.op = *op;
  if (!doc.contains("p") || !doc.at("p").is_number()) {
    throw SchemaError("$.p", "expected number");
  }
  spec.target.p = doc.at("p").get<double>();
  if (!doc.contains("m") || !doc.at("m").is_number_integer()) {
    throw SchemaError("$.m", "expected integer");
  }
  const int64_t m = doc.at("m").get<int64_t>();
  if (m < 1 || m > 3) {
    throw SchemaError("$.m", "paste count must be in {1, 2, 3}");
  }
  spec.target.m = static_cast<uint8_t>(m);

  const auto opt_number = [&](const char* key, double& slot) {
    if (doc.contains(key)) {
      if (!doc.at(key).is_number()) {
        throw SchemaError(std::string("$.") + key, "expected number");
      }
      slot = doc.at(key).get<double>();
    }
  };
  opt_number("sigma", spec.sigma);
  opt_number("w_op", spec.w_op);
  opt_number("w_p", spec.w_p);
  opt_number("w_m", spec.w_m);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer()) {
      throw SchemaError("$.seed", "expected integer");
    }
    spec.seed = doc.at("seed").get<uint64_t>();
  }
  if (spec.sigma < 0.0) {
    throw SchemaError("$.sigma", "sigma must be >= 0");
  }
  return spec;
}

OracleSpec load_oracle_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_oracle_spec(buf.str());
}

namespace {

struct OracleModel : Model {
  explicit OracleModel(uint64_t noise_seed) : noise(noise_seed) {}
  Rng noise;  // trials within a fold are sequential, so this needs no lock
};

class SyntheticOracle : public LossEvaluator {
 public:
  explicit SyntheticOracle(OracleSpec spec) : spec_(spec) {}

  std::unique_ptr<Model> train(const Dataset& /*d_m*/, uint32_t fold) override {
    return std::make_unique<OracleModel>(derive_seed(spec_.seed, uint64_t{fold}));
  }

  double loss(Model& model, const Dataset& augmented) override {
    // Reconstruct the applied augmentation from the data alone. Pasted
    // rectangles keep their source's category and size, so the distinct
    // (category, w, h) keys of an image's Pasted instances estimate how many
    // sources were copied.
    uint64_t images_with_candidates = 0;  // images where pasting was possible
    uint64_t images_with_pastes = 0;
    double m_sum = 0.0;
    uint64_t m_n = 0;
    uint64_t votes[3] = {0, 0, 0};

    for (const AnnotatedImage& img : augmented.images) {
      uint64_t eligible = 0;
      for (const Instance& inst : img.instances) {
        if (inst.origin == Origin::Original && !inst.difficult &&
            classify_size(inst.bbox) == SizeClass::Small) {
          ++eligible;
        }
      }
      if (eligible == 0) {
        continue;
      }
      ++images_with_candidates;

      uint64_t pasted = 0;
      std::set<std::tuple<std::string, double, double>> source_keys;
      for (const Instance& inst : img.instances) {
        if (inst.origin == Origin::Pasted) {
          ++pasted;
          source_keys.emplace(inst.category, inst.bbox.w, inst.bbox.h);
        }
      }
      if (pasted == 0) {
        continue;
      }
      ++images_with_pastes;
      const uint64_t sources = source_keys.size();
      m_sum += static_cast<double>(pasted) / static_cast<double>(sources);
      ++m_n;
      if (eligible >= 2) {  // with one candidate the operators coincide
        if (sources == 1) {
          ++votes[static_cast<int>(Operation::SingleObject)];
        } else if (sources >= eligible) {
          ++votes[static_cast<int>(Operation::AllObjects)];
        } else {
          ++votes[static_cast<int>(Operation::MultipleObjects)];
        }
      }
    }

    const double applied_fraction =
        images_with_candidates == 0
            ? 0.0
            : static_cast<double>(images_with_pastes) / static_cast<double>(images_with_candidates);
    const double m_hat = m_n == 0 ? 0.0 : m_sum / static_cast<double>(m_n);

    bool op_matches = false;
    if (votes[0] + votes[1] + votes[2] > 0) {
      int dominant = 0;
      for (int i = 1; i < 3; ++i) {
        if (votes[i] > votes[dominant]) {
          dominant = i;
        }
      }
      op_matches = dominant == static_cast<int>(spec_.target.op);
    }

    double loss = spec_.w_op * (op_matches ? 0.0 : 1.0) +
                  spec_.w_p * std::abs(applied_fraction - spec_.target.p) +
                  spec_.w_m * std::abs(m_hat - static_cast<double>(spec_.target.m)) / 2.0;
    if (spec_.sigma > 0.0) {
      loss += spec_.sigma * static_cast<OracleModel&>(model).noise.next_gaussian();
    }
    return loss;
  }

  bool concurrent_loss_ok() const override { return true; }  // state is per fold handle

 private:
  OracleSpec spec_;
};

}  // namespace

std::unique_ptr<LossEvaluator> make_synthetic_oracle(const OracleSpec& spec) {
  return std::make_unique<SyntheticOracle>(spec);
}

// ---------------------------------------------------------------------------
// Subprocess evaluator
// ---------------------------------------------------------------------------

namespace {

std::string shell_quote(const std::string& s) {
  std::string quoted = "'";
  for (const char c : s) {
    if (c == '\'') {
      quoted += "'\\''";
    } else {
      quoted += c;
    }
  }
  quoted += "'";
  return quoted;
}

std::string read_file_or_empty(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return {};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ExecResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

ExecResult run_command(const std::string& command,
                       const std::vector<std::pair<std::string, std::string>>& env,
                       const std::string& stdout_path, const std::string& stderr_path) {
  std::string shell_line;
  for (const auto& [key, value] : env) {
    shell_line += "export " + key + "=" + shell_quote(value) + "; ";
  }
  shell_line += "( " + command + " ) > " + shell_quote(stdout_path) + " 2> " +
                shell_quote(stderr_path);

  const int status = std::system(shell_line.c_str());
  ExecResult result;
  if (status == -1) {
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = 128;
  }
  result.stdout_text = read_file_or_empty(stdout_path);
  result.stderr_text = read_file_or_empty(stderr_path);
  return result;
}

std::string last_nonempty_line(const std::string& text) {
  std::string last;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!line.empty()) {
      last = line;
    }
  }
  return last;
}

struct SubprocessModel : Model {
  uint32_t fold = 0;
  std::string artifact;
  std::atomic<uint64_t> next_eval{0};
};

class SubprocessEvaluator : public LossEvaluator {
 public:
  SubprocessEvaluator(std::string train_cmd, std::string loss_cmd, std::string workdir)
      : train_cmd_(std::move(train_cmd)),
        loss_cmd_(std::move(loss_cmd)),
        workdir_(std::move(workdir)) {}

  std::unique_ptr<Model> train(const Dataset& d_m, uint32_t fold) override {
    const fs::path fold_dir = fs::path(workdir_) / ("fold_" + std::to_string(fold));
    const fs::path train_dir = fold_dir / "train";
    write_manifest(d_m, train_dir.string());
    const fs::path model_dir = fold_dir / "model";
    std::error_code ec;
    fs::create_directories(model_dir, ec);
    if (ec) {
      throw IoError("cannot create '" + model_dir.string() + "': " + ec.message());
    }

    const ExecResult result =
        run_command(train_cmd_,
                    {{"SMALLAUG_MANIFEST", (train_dir / "manifest.json").string()},
                     {"SMALLAUG_FOLD", std::to_string(fold)},
                     {"SMALLAUG_OUT", model_dir.string()}},
                    (fold_dir / "train_stdout.txt").string(),
                    (fold_dir / "train_stderr.txt").string());
    if (result.exit_code != 0) {
      throw EvaluatorProtocolError(
          "train command exited with code " + std::to_string(result.exit_code),
          result.stderr_text);
    }
    auto model = std::make_unique<SubprocessModel>();
    model->fold = fold;
    model->artifact = last_nonempty_line(result.stdout_text);
    if (model->artifact.empty()) {
      throw EvaluatorProtocolError("train command printed no model artifact path",
                                   result.stderr_text);
    }
    return model;
  }

  double loss(Model& model, const Dataset& augmented) override {
    auto& sub = static_cast<SubprocessModel&>(model);
    const uint64_t seq = sub.next_eval.fetch_add(1);
    const fs::path fold_dir = fs::path(workdir_) / ("fold_" + std::to_string(sub.fold));
    const fs::path eval_dir = fold_dir / ("eval_" + std::to_string(seq));
    write_manifest(augmented, eval_dir.string());

    const ExecResult result =
        run_command(loss_cmd_,
                    {{"SMALLAUG_MANIFEST", (eval_dir / "manifest.json").string()},
                     {"SMALLAUG_MODEL", sub.artifact}},
                    (eval_dir / "loss_stdout.txt").string(),
                    (eval_dir / "loss_stderr.txt").string());
    if (result.exit_code != 0) {
      throw EvaluatorProtocolError(
          "loss command exited with code " + std::to_string(result.exit_code),
          result.stderr_text);
    }
    const std::string line = last_nonempty_line(result.stdout_text);
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error&) {
      throw EvaluatorProtocolError("loss command output is not JSON: '" + line + "'",
                                   result.stderr_text);
    }
    if (!doc.is_object() || !doc.contains("loss") || !doc.at("loss").is_number()) {
      throw EvaluatorProtocolError("loss command output lacks a numeric \"loss\": '" + line + "'",
                                   result.stderr_text);
    }
    const double loss = doc.at("loss").get<double>();
    if (!std::isfinite(loss)) {
      throw EvaluatorProtocolError("loss command returned a non-finite loss", result.stderr_text);
    }
    return loss;
  }

  bool concurrent_loss_ok() const override { return true; }  // commands are stateless

 private:
  std::string train_cmd_;
  std::string loss_cmd_;
  std::string workdir_;
};

}  // namespace

std::unique_ptr<LossEvaluator> make_subprocess_evaluator(std::string train_cmd,
                                                         std::string loss_cmd,
                                                         std::string workdir) {
  return std::make_unique<SubprocessEvaluator>(std::move(train_cmd), std::move(loss_cmd),
                                               std::move(workdir));
}

}  // namespace smallaug
