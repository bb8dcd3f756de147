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

#include "smallaug/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>

#include <glob.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "smallaug/augment.hpp"
#include "smallaug/chart.hpp"
#include "smallaug/errors.hpp"
#include "smallaug/evaluators.hpp"
#include "smallaug/log.hpp"
#include "smallaug/manifest.hpp"
#include "smallaug/metrics.hpp"
#include "smallaug/policy_io.hpp"
#include "smallaug/search.hpp"

namespace smallaug::cli {

namespace fs = std::filesystem;

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw IoError("write failed for '" + path + "'");
  }
}

// Shortest round-trip decimal form, the same one the JSON outputs use.
std::string format_number(double v) { return nlohmann::json(v).dump(); }

struct GlobalOptions {
  uint64_t seed = 0;
  uint32_t workers = 1;
  std::string log_level = "info";
};

void apply_log_level(const GlobalOptions& global) {
  std::string name = global.log_level;
  if (const char* env = std::getenv("SMALLAUG_LOG"); env != nullptr && *env != '\0') {
    name = env;  // the environment wins over the flag
  }
  const auto level = parse_log_level(name);
  if (!level.has_value()) {
    throw ConfigError("unknown log level '" + name + "'");
  }
  set_log_level(*level);
}

// ---------------------------------------------------------------------------
// augment
// ---------------------------------------------------------------------------

struct AugmentArgs {
  std::string input;
  std::string policies;
  std::string output;
  bool force_p1 = false;
  PlacementConfig placement;
};

int cmd_augment(const AugmentArgs& args, const GlobalOptions& global) {
  const std::vector<Policy> policies = load_policy_file(args.policies);
  if (policies.empty()) {
    throw ConfigError("policy file '" + args.policies + "' contains no policies");
  }
  Dataset input = load_manifest(args.input);
  validate(input);

  Dataset output;
  output.categories = input.categories;
  output.images.reserve(input.images.size());
  uint64_t pasted = 0;
  uint64_t skipped = 0;
  for (size_t i = 0; i < input.images.size(); ++i) {
    AnnotatedImage img = load_image(input, i);
    Rng rng(derive_seed(global.seed, img.id));
    AugmentStats stats;
    AnnotatedImage augmented;
    if (args.force_p1) {
      const size_t pick = policies.size() == 1 ? 0 : rng.next_below(policies.size());
      augmented = apply_operator(img, policies[pick].op, policies[pick].m, args.placement, rng,
                                 &stats);
    } else {
      augmented = apply_policy_set(img, policies, args.placement, rng, &stats);
    }
    pasted += stats.pasted;
    skipped += stats.skipped;
    output.images.push_back(std::move(augmented));
  }
  write_manifest(output, args.output);
  std::printf("images=%zu pasted_instances=%llu skipped_placements=%llu\n", output.images.size(),
              static_cast<unsigned long long>(pasted), static_cast<unsigned long long>(skipped));
  return 0;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

struct SearchArgs {
  std::string dataset;
  std::string evaluator;
  std::string out;
  SearchConfig cfg;
};

std::unique_ptr<LossEvaluator> make_evaluator(const std::string& spec, const std::string& out_dir) {
  const size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("evaluator must be synthetic:<spec-file> or subprocess:<train-cmd>,<loss-cmd>");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "synthetic") {
    return make_synthetic_oracle(load_oracle_spec(rest));
  }
  if (kind == "subprocess") {
    const size_t comma = rest.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("subprocess evaluator needs <train-cmd>,<loss-cmd>");
    }
    return make_subprocess_evaluator(rest.substr(0, comma), rest.substr(comma + 1),
                                     (fs::path(out_dir) / "work").string());
  }
  throw ConfigError("unknown evaluator kind '" + kind + "'");
}

int cmd_search(const SearchArgs& args) {
  validate(args.cfg);  // fail before any I/O
  const std::unique_ptr<LossEvaluator> evaluator = make_evaluator(args.evaluator, args.out);
  Dataset dataset = load_manifest(args.dataset);
  validate(dataset);

  std::mutex print_mutex;
  const PolicySet set = run_search(
      dataset, *evaluator, args.cfg, args.out,
      [&](uint32_t fold, const std::vector<tpe::Trial>& trials) {
        const std::lock_guard<std::mutex> lock(print_mutex);
        if (trials.empty()) {
          std::printf("fold %u: no completed trials\n", fold);
          return;
        }
        const auto best = std::min_element(
            trials.begin(), trials.end(),
            [](const tpe::Trial& a, const tpe::Trial& b) { return a.loss < b.loss; });
        std::printf("fold %u: trials=%zu best_loss=%s\n", fold, trials.size(),
                    format_number(best->loss).c_str());
        std::fflush(stdout);
      });

  std::printf("policies=%zu -> %s\n", set.policies.size(),
              (fs::path(args.out) / "policies.json").string().c_str());
  if (!set.failed_folds.empty()) {
    std::fprintf(stderr, "error: %zu fold(s) failed; partial outputs persisted in '%s'\n",
                 set.failed_folds.size(), args.out.c_str());
    return 4;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string gt;
  std::string dets;
  std::string json_out;  // default derived from dets
  EvalConfig cfg;
};

int cmd_evaluate(const EvaluateArgs& args) {
  Dataset gt = load_manifest(args.gt);
  validate(gt);
  const std::vector<Detection> dets = parse_detections(read_text_file(args.dets));
  const EvalResult result = evaluate(dets, gt, args.cfg);

  const std::string table = render_table(result);
  std::fputs(table.c_str(), stdout);

  std::string json_path = args.json_out;
  if (json_path.empty()) {
    json_path = fs::path(args.dets).replace_extension(".eval.json").string();
  }
  write_text_file(json_path, to_json(result));
  return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportArgs {
  std::string trials_glob;
  std::string out_prefix;
  uint32_t top = 20;
};

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t results;
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &results);
  std::vector<std::string> paths;
  if (rc == 0) {
    for (size_t i = 0; i < results.gl_pathc; ++i) {
      paths.emplace_back(results.gl_pathv[i]);
    }
  }
  ::globfree(&results);
  if (rc != 0 && rc != GLOB_NOMATCH) {
    throw IoError("glob failed for '" + pattern + "'");
  }
  return paths;
}

int cmd_report(const ReportArgs& args) {
  const std::vector<std::string> files = expand_glob(args.trials_glob);
  if (files.empty()) {
    throw IoError("no trials files match '" + args.trials_glob + "'");
  }

  struct Row {
    TrialRecord rec;
    size_t file_order = 0;
  };
  std::vector<Row> rows;
  for (size_t f = 0; f < files.size(); ++f) {
    for (TrialRecord& rec : read_trials_jsonl(files[f])) {
      rows.push_back(Row{std::move(rec), f});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.rec.loss != b.rec.loss) {
      return a.rec.loss < b.rec.loss;
    }
    if (a.file_order != b.file_order) {
      return a.file_order < b.file_order;
    }
    return a.rec.index < b.rec.index;
  });
  if (rows.size() > args.top) {
    rows.resize(args.top);
  }

  if (const fs::path parent = fs::path(args.out_prefix).parent_path(); !parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) {
      throw IoError("cannot create '" + parent.string() + "': " + ec.message());
    }
  }

  // CSV grouped by operation (rows within a group stay loss-sorted).
  std::string csv = "op,p,m,p_plus_m,loss\n";
  std::array<double, 3> p_sums{0.0, 0.0, 0.0};
  std::array<double, 3> m_sums{0.0, 0.0, 0.0};
  for (const Operation op : kAllOperations) {
    for (const Row& row : rows) {
      if (row.rec.policy.op != op) {
        continue;
      }
      const double p = row.rec.policy.p;
      const int m = row.rec.policy.m;
      csv += std::string(to_string(op)) + "," + format_number(p) + "," + std::to_string(m) + "," +
             format_number(p + m) + "," + format_number(row.rec.loss) + "\n";
      p_sums[static_cast<int>(op)] += p;
      m_sums[static_cast<int>(op)] += m;
    }
  }
  write_text_file(args.out_prefix + ".csv", csv);
  write_policy_chart(args.out_prefix + ".png", p_sums, m_sums);

  // Pearson correlation between p and m over the selected policies.
  double correlation = std::numeric_limits<double>::quiet_NaN();
  if (rows.size() >= 2) {
    double mean_p = 0.0;
    double mean_m = 0.0;
    for (const Row& row : rows) {
      mean_p += row.rec.policy.p;
      mean_m += row.rec.policy.m;
    }
    mean_p /= static_cast<double>(rows.size());
    mean_m /= static_cast<double>(rows.size());
    double cov = 0.0;
    double var_p = 0.0;
    double var_m = 0.0;
    for (const Row& row : rows) {
      const double dp = row.rec.policy.p - mean_p;
      const double dm = static_cast<double>(row.rec.policy.m) - mean_m;
      cov += dp * dm;
      var_p += dp * dp;
      var_m += dm * dm;
    }
    if (var_p > 0.0 && var_m > 0.0) {
      correlation = cov / std::sqrt(var_p * var_m);
    }
  }
  std::printf("top=%zu pearson(p,m) = %.4f\n", rows.size(), correlation);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Copy-paste augmentation for small-object detection: augment datasets, "
               "search policies, evaluate detections, report policy distributions"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Global random seed")->capture_default_str();
  app.add_option("--workers", global.workers, "Worker threads for parallel folds")
      ->capture_default_str();
  app.add_option("--log-level", global.log_level, "debug|info|warn|error|off")
      ->capture_default_str();

  AugmentArgs augment_args;
  CLI::App* augment = app.add_subcommand("augment", "Apply a policy set to a dataset");
  augment->fallthrough();
  augment->add_option("--input", augment_args.input, "Dataset manifest")->required();
  augment->add_option("--policies", augment_args.policies, "Policy JSON file")->required();
  augment->add_option("--output", augment_args.output, "Output directory")->required();
  augment->add_flag("--force-p1", augment_args.force_p1,
                    "Bypass the probability gate (always apply the drawn policy)");
  augment->add_option("--max-attempts", augment_args.placement.max_attempts,
                      "Placement attempts per paste")
      ->capture_default_str();
  augment->add_option("--margin", augment_args.placement.margin,
                      "Pixels kept clear of the image border")
      ->capture_default_str();

  SearchArgs search_args;
  CLI::App* search = app.add_subcommand("search", "Search augmentation policies (K-fold + TPE)");
  search->fallthrough();
  search->add_option("--dataset", search_args.dataset, "Dataset manifest")->required();
  search->add_option("--k", search_args.cfg.k_folds, "Number of folds")->capture_default_str();
  search->add_option("--num-search", search_args.cfg.num_search, "TPE trials per fold")
      ->capture_default_str();
  search->add_option("--top-n", search_args.cfg.top_n, "Policies kept per fold")
      ->capture_default_str();
  search
      ->add_option("--evaluator", search_args.evaluator,
                   "synthetic:<spec-file> or subprocess:<train-cmd>,<loss-cmd>")
      ->required();
  search->add_option("--out", search_args.out, "Output directory")->required();
  search->add_option("--max-attempts", search_args.cfg.placement.max_attempts,
                     "Placement attempts per paste")
      ->capture_default_str();
  search->add_option("--margin", search_args.cfg.placement.margin,
                     "Pixels kept clear of the image border")
      ->capture_default_str();

  EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Size-bucketed AP of a detections file");
  evaluate->fallthrough();
  evaluate->add_option("--gt", evaluate_args.gt, "Ground-truth dataset manifest")->required();
  evaluate->add_option("--dets", evaluate_args.dets, "Detections JSON file")->required();
  evaluate->add_option("--iou", evaluate_args.cfg.iou_thresh, "IoU matching threshold")
      ->capture_default_str();
  evaluate->add_option("--json-out", evaluate_args.json_out,
                       "Result JSON path (default: <dets>.eval.json)");
  evaluate
      ->add_flag("!--exclude-difficult", evaluate_args.cfg.include_difficult,
                 "Drop difficult ground truths from scoring")
      ->capture_default_str();
  evaluate->add_option("--recall-points", evaluate_args.cfg.recall_points,
                       "PR-curve sample count (101 or 11)")
      ->capture_default_str();

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "Top-policy distribution report from trials");
  report->fallthrough();
  report->add_option("--trials", report_args.trials_glob, "Glob of trials JSONL files")
      ->required();
  report->add_option("--out", report_args.out_prefix, "Output prefix for .csv and .png")
      ->required();
  report->add_option("--top", report_args.top, "Number of lowest-loss trials to keep")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    apply_log_level(global);
    if (augment->parsed()) {
      augment_args.placement.rng_seed = global.seed;
      return cmd_augment(augment_args, global);
    }
    if (search->parsed()) {
      search_args.cfg.seed = global.seed;
      search_args.cfg.workers = global.workers;
      search_args.cfg.placement.rng_seed = global.seed;
      return cmd_search(search_args);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(evaluate_args);
    }
    if (report->parsed()) {
      return cmd_report(report_args);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const EvaluatorProtocolError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const EvaluatorFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.emplace_back("smallaug");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& a : full) {
    argv.push_back(a.c_str());
  }
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace smallaug::cli
