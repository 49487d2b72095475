/*
 * Copyright 2026 The SelectorLab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "commands.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "selectorlab/atomic_file.h"
#include "selectorlab/binary_io.h"
#include "selectorlab/dataset.h"
#include "selectorlab/error.h"
#include "selectorlab/manifest.h"
#include "selectorlab/profiles.h"
#include "selectorlab/risk_coverage.h"
#include "selectorlab/score_pipeline.h"
#include "selectorlab/synthetic.h"
#include "selectorlab/theorems.h"

namespace selectorlab::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr std::string_view kToolVersion = "1.0.0";

std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw ValidationError(what + ": '" + text + "' is not a finite number");
  }
  return v;
}

std::size_t parse_size(const std::string& text, const std::string& what) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ValidationError(what + ": '" + text + "' is not a non-negative integer");
  }
  return v;
}

std::optional<bool> parse_bool_flag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError("--normalize expects true or false, got '" + text + "'");
}

// Display name of a dataset reference: the manifest entry or the file stem.
std::string ref_label(const std::string& ref) {
  const auto hash = ref.rfind('#');
  if (hash != std::string::npos) return ref.substr(hash + 1);
  return fs::path(ref).stem().string();
}

// File-system safe version of a score or dataset name.
std::string slug(const std::string& name) {
  std::string s = name;
  for (auto& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
      c = '_';
    }
  }
  return s;
}

std::string path_in(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

// Options shared by every command that scores data.
struct ScoringArgs {
  std::string train;
  std::vector<std::string> tests;
  std::string calibration;
  std::string scores;
  std::optional<std::size_t> k;
  std::string lambda;
  double temperature = 1.0;
  std::string normalize;
  double shrinkage = 1e-6;
  std::uint64_t seed = 0;
  std::string profile = "vision-clip";
  std::string out;
  double fraction = 1.0;
  bool plain_knn = false;
  std::optional<std::size_t> min_partition;
};

void add_scoring_options(CLI::App* cmd, ScoringArgs& a, bool multi_test) {
  cmd->add_option("--train", a.train, "Training set used to fit feature scores");
  if (multi_test) {
    cmd->add_option("--test", a.tests, "Evaluation set (repeatable)");
  } else {
    cmd->add_option("--test", a.tests, "Evaluation set")->expected(1);
  }
  cmd->add_option("--calibration", a.calibration,
                  "Held-out split for --lambda auto (disjoint from --test)");
  cmd->add_option("--scores", a.scores, "Comma-separated score names");
  cmd->add_option("--k", a.k, "Neighbors for KNN scores (overrides the profile)");
  cmd->add_option("--lambda", a.lambda, "Combination weight, or 'auto'");
  cmd->add_option("--temperature", a.temperature, "Energy temperature");
  cmd->add_option("--normalize", a.normalize, "L2-normalize KNN features (true|false)");
  cmd->add_option("--shrinkage", a.shrinkage, "Covariance ridge factor");
  cmd->add_option("--seed", a.seed, "Seed for subsampling");
  cmd->add_option("--profile", a.profile, "Hyperparameter profile name or JSON path");
  cmd->add_option("--out", a.out, "Output location")->required();
  cmd->add_option("--fraction", a.fraction, "Labeled fraction of --train to fit on");
  cmd->add_flag("--plain-knn", a.plain_knn, "Use the k-th distance instead of the average");
  cmd->add_option("--min-partition", a.min_partition,
                  "Minimum rows per delta-mds partition (default: feature dim)");
}

PipelineOptions pipeline_options(const ScoringArgs& a) {
  PipelineOptions o;
  o.profile = load_profile(a.profile);
  o.k = a.k;
  if (a.lambda == "auto") {
    o.lambda_auto = true;
  } else if (!a.lambda.empty()) {
    o.lambda = parse_double(a.lambda, "--lambda");
  }
  if (!(a.temperature > 0.0)) throw ValidationError("--temperature must be > 0");
  o.temperature = a.temperature;
  o.normalize = parse_bool_flag(a.normalize);
  o.shrinkage = a.shrinkage;
  o.averaged = !a.plain_knn;
  o.min_partition_samples = a.min_partition;
  return o;
}

std::vector<std::string> score_names(const std::string& list) {
  auto names = split_list(list);
  if (names.empty()) throw ValidationError("--scores is empty");
  for (const auto& n : names) {
    if (!is_known_score(n)) {
      std::string known;
      for (const auto& k : known_score_names()) known += (known.empty() ? "" : ", ") + k;
      throw ValidationError("unknown score '" + n + "' (known: " + known + ")");
    }
  }
  return names;
}

Dataset load_train(const ScoringArgs& a) {
  if (a.train.empty()) throw ValidationError("--train is required");
  Dataset train = load_dataset_ref(a.train);
  if (a.fraction != 1.0) train = subsample_labeled(train, a.fraction, a.seed);
  return train;
}

ojson params_json(const ScoreVector& s) {
  ojson j;
  j["name"] = s.name;
  j["method"] = std::string(method_name(s.method));
  if (s.params.k) j["k"] = *s.params.k;
  if (s.params.lambda) j["lambda"] = *s.params.lambda;
  if (s.params.temperature) j["temperature"] = *s.params.temperature;
  if (s.params.averaged) j["averaged"] = *s.params.averaged;
  if (s.params.normalized) j["normalized"] = *s.params.normalized;
  if (!s.params.first.empty()) j["first"] = s.params.first;
  if (!s.params.second.empty()) j["second"] = s.params.second;
  return j;
}

ojson run_metadata(const std::string& command, const ScoringArgs& a,
                   const PipelineOptions& o) {
  ojson j;
  j["tool"] = "selectorlab";
  j["version"] = std::string(kToolVersion);
  j["command"] = command;
  j["seed"] = a.seed;
  j["profile"] = o.profile.name;
  j["train"] = a.train;
  j["fraction"] = a.fraction;
  if (!a.calibration.empty()) j["calibration"] = a.calibration;
  j["shrinkage"] = a.shrinkage;
  j["temperature"] = a.temperature;
  return j;
}

void save_artifacts(const ScoringContext& ctx, const std::string& dir) {
  if (const auto* m = ctx.mds_model()) {
    write_file_atomic(path_in(dir, "mds.sst"), m->stats.encode());
  }
  if (const auto* m = ctx.knn_model()) {
    write_file_atomic(path_in(dir, "knn.snn"), m->index.encode());
  }
  if (const auto* m = ctx.delta_mds_model()) {
    write_file_atomic(path_in(dir, "delta_mds_correct.sst"), m->correct.encode());
    write_file_atomic(path_in(dir, "delta_mds_wrong.sst"), m->wrong.encode());
  }
  if (const auto* m = ctx.delta_knn_model()) {
    write_file_atomic(path_in(dir, "delta_knn_correct.snn"), m->correct.encode());
    write_file_atomic(path_in(dir, "delta_knn_wrong.snn"), m->wrong.encode());
  }
}

std::string bundle_csv(const ScoreBundle& bundle) {
  std::string out = "index";
  for (const auto& c : bundle.columns) out += "," + c.name;
  out += "\n";
  for (std::size_t i = 0; i < bundle.n; ++i) {
    out += std::to_string(i);
    for (const auto& c : bundle.columns) out += "," + num(c.values[i]);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------- score

int cmd_score(const ScoringArgs& a, std::ostream& out) {
  const auto names = score_names(a.scores);
  if (a.tests.size() != 1) throw ValidationError("score takes exactly one --test");
  const Dataset train = load_train(a);
  const Dataset test = load_dataset_ref(a.tests.front());
  std::optional<Dataset> calibration;
  if (!a.calibration.empty()) calibration = load_dataset_ref(a.calibration);
  const auto options = pipeline_options(a);
  ScoringContext ctx(train, options, calibration ? &*calibration : nullptr);

  ScoreBundle bundle;
  bundle.n = test.size();
  ojson meta = run_metadata("score", a, options);
  meta["test"] = a.tests.front();
  meta["n"] = test.size();
  ojson cols = ojson::array();
  for (const auto& name : names) {
    auto s = ctx.score(name, test);
    s.check_finite();
    ojson p = params_json(s);
    if (auto it = ctx.lambda_fits().find(name); it != ctx.lambda_fits().end()) {
      p["lambda_fit"] = {{"mean_abs_first", it->second.mean_abs_first},
                         {"mean_abs_second", it->second.mean_abs_second},
                         {"median_lambda", it->second.median_lambda}};
    }
    cols.push_back(std::move(p));
    bundle.append(std::move(s));
  }
  meta["scores"] = std::move(cols);
  bundle.metadata_json = meta.dump();

  save_bundle(bundle, path_in(a.out, "scores.scb"));
  write_file_atomic(path_in(a.out, "scores.csv"), bundle_csv(bundle));
  write_file_atomic(path_in(a.out, "metadata.json"), meta.dump(2) + "\n");
  save_artifacts(ctx, path_in(a.out, "artifacts"));
  out << "wrote " << names.size() << " score column(s) for " << test.size()
      << " samples to " << path_in(a.out, "scores.scb") << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalRow {
  std::string score;
  RiskCoverageReport report;
};

ojson report_object(const RiskCoverageReport& r) {
  return ojson::parse(report_json(r));
}

bool ranks_before(const EvalRow& a, const EvalRow& b) {
  const auto& na = a.report.naurc;
  const auto& nb = b.report.naurc;
  if (na.has_value() != nb.has_value()) return na.has_value();
  if (na && nb && *na != *nb) return *na < *nb;
  if (a.report.aurc != b.report.aurc) return a.report.aurc < b.report.aurc;
  return a.score < b.score;
}

std::string ranking_csv(std::vector<EvalRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), ranks_before);
  std::string csv = "rank,score,aurc,aurc_x100,naurc,oracle_aurc,full_risk,ties,n\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i].report;
    csv += std::to_string(i + 1) + "," + rows[i].score + "," + num(r.aurc) + "," +
           num(r.aurc * 100.0) + "," + (r.naurc ? num(*r.naurc) : "undefined") + "," +
           num(r.oracle_aurc) + "," + num(r.full_risk) + "," + std::to_string(r.ties) +
           "," + std::to_string(r.n) + "\n";
  }
  return csv;
}

void write_eval_outputs(const std::string& dir, const std::string& dataset,
                        const std::vector<EvalRow>& rows, bool svg) {
  ojson summary;
  summary["dataset"] = dataset;
  ojson list = ojson::array();
  std::vector<RiskCoverageReport> reports;
  for (const auto& row : rows) {
    write_file_atomic(path_in(dir, slug(row.score) + ".json"), report_json(row.report));
    write_file_atomic(path_in(dir, slug(row.score) + "_curve.csv"), curve_csv(row.report));
    list.push_back(report_object(row.report));
    reports.push_back(row.report);
  }
  summary["scores"] = std::move(list);
  write_file_atomic(path_in(dir, "summary.json"), summary.dump(2) + "\n");
  write_file_atomic(path_in(dir, "ranking.csv"), ranking_csv(rows));
  if (svg) write_file_atomic(path_in(dir, "risk_coverage.svg"), risk_coverage_svg(reports));
}

// dataset -> group, from a `dataset,group` CSV (header optional).
std::map<std::string, std::string> load_group_map(const std::string& path) {
  std::map<std::string, std::string> groups;
  std::stringstream ss(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto parts = split_list(line);
    if (parts.size() != 2) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": expected 'dataset,group'");
    }
    if (line_no == 1 && parts[0] == "dataset" && parts[1] == "group") continue;
    groups[parts[0]] = parts[1];
  }
  return groups;
}

struct Accumulator {
  double aurc = 0.0;
  double naurc = 0.0;
  std::size_t count = 0;
  std::size_t naurc_count = 0;

  void add(double a, std::optional<double> n) {
    aurc += a;
    ++count;
    if (n) {
      naurc += *n;
      ++naurc_count;
    }
  }
  double mean_aurc() const { return aurc / static_cast<double>(count); }
  std::optional<double> mean_naurc() const {
    if (naurc_count == 0) return std::nullopt;
    return naurc / static_cast<double>(naurc_count);
  }
};

// Averages within each group first, then across groups.
std::string grouped_csv(const std::vector<std::pair<std::string, std::vector<EvalRow>>>& runs,
                        const std::map<std::string, std::string>& groups) {
  std::vector<std::string> score_order;
  std::map<std::string, std::map<std::string, Accumulator>> per_score;
  for (const auto& [dataset, rows] : runs) {
    std::string group = dataset;
    if (!groups.empty()) {
      auto it = groups.find(dataset);
      if (it == groups.end()) {
        throw ValidationError("--group-by has no group for dataset '" + dataset + "'");
      }
      group = it->second;
    }
    for (const auto& row : rows) {
      if (!per_score.count(row.score)) score_order.push_back(row.score);
      per_score[row.score][group].add(row.report.aurc, row.report.naurc);
    }
  }
  auto fmt = [](std::optional<double> v) { return v ? num(*v) : std::string("undefined"); };
  std::string csv = "score,group,members,mean_aurc,mean_aurc_x100,mean_naurc\n";
  for (const auto& score : score_order) {
    Accumulator overall;
    for (const auto& [group, acc] : per_score[score]) {
      csv += score + "," + group + "," + std::to_string(acc.count) + "," +
             num(acc.mean_aurc()) + "," + num(acc.mean_aurc() * 100.0) + "," +
             fmt(acc.mean_naurc()) + "\n";
      overall.add(acc.mean_aurc(), acc.mean_naurc());
    }
    csv += score + ",overall," + std::to_string(overall.count) + "," +
           num(overall.mean_aurc()) + "," + num(overall.mean_aurc() * 100.0) + "," +
           fmt(overall.mean_naurc()) + "\n";
  }
  return csv;
}

struct EvalArgs {
  ScoringArgs scoring;
  std::string bundle;
  std::string group_by;
  bool svg = false;
};

std::vector<EvalRow> evaluate_all(const std::vector<ScoreVector>& scores,
                                  const Dataset& test) {
  const auto mask = correctness(test);
  std::vector<EvalRow> rows;
  for (const auto& s : scores) {
    if (s.size() != test.size()) {
      throw ValidationError("score '" + s.name + "' has " + std::to_string(s.size()) +
                            " values but the test set has " + std::to_string(test.size()));
    }
    rows.push_back({s.name, evaluate(s, mask.mask)});
  }
  return rows;
}

int cmd_eval(const EvalArgs& e, std::ostream& out) {
  const auto& a = e.scoring;
  if (a.tests.empty()) throw ValidationError("eval needs --test");
  std::vector<std::pair<std::string, std::vector<EvalRow>>> runs;

  if (!e.bundle.empty()) {
    if (a.tests.size() != 1) throw ValidationError("--bundle pairs with exactly one --test");
    const auto bundle = load_bundle(e.bundle);
    const Dataset test = load_dataset_ref(a.tests.front());
    std::vector<ScoreVector> columns;
    if (a.scores.empty()) {
      columns = bundle.columns;
    } else {
      for (const auto& n : split_list(a.scores)) columns.push_back(bundle.column(n));
    }
    runs.emplace_back(ref_label(a.tests.front()), evaluate_all(columns, test));
  } else {
    const auto names = score_names(a.scores);
    const Dataset train = load_train(a);
    std::optional<Dataset> calibration;
    if (!a.calibration.empty()) calibration = load_dataset_ref(a.calibration);
    ScoringContext ctx(train, pipeline_options(a), calibration ? &*calibration : nullptr);
    for (const auto& ref : a.tests) {
      const Dataset test = load_dataset_ref(ref);
      std::vector<ScoreVector> columns;
      for (const auto& n : names) columns.push_back(ctx.score(n, test));
      runs.emplace_back(ref_label(ref), evaluate_all(columns, test));
    }
  }

  std::set<std::string> seen;
  for (const auto& [label, rows] : runs) {
    if (!seen.insert(label).second) {
      throw ValidationError("two test sets share the name '" + label + "'");
    }
  }
  if (runs.size() == 1) {
    write_eval_outputs(a.out, runs.front().first, runs.front().second, e.svg);
  } else {
    for (const auto& [label, rows] : runs) {
      write_eval_outputs(path_in(a.out, slug(label)), label, rows, e.svg);
    }
  }
  if (runs.size() > 1 || !e.group_by.empty()) {
    std::map<std::string, std::string> groups;
    if (!e.group_by.empty()) groups = load_group_map(e.group_by);
    write_file_atomic(path_in(a.out, "grouped.csv"), grouped_csv(runs, groups));
  }

  for (const auto& [label, rows] : runs) {
    auto sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), ranks_before);
    out << label << ":\n";
    for (const auto& row : sorted) {
      out << "  " << row.score << "  AURC(x100)=" << num(row.report.aurc * 100.0)
          << "  NAURC=" << (row.report.naurc ? num(*row.report.naurc) : "undefined") << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  ScoringArgs scoring;
  std::string k_grid;
  std::string lambda_grid;
  std::string fraction_grid;
};

struct SweepRow {
  double fraction = 1.0;
  std::optional<std::size_t> k;
  std::optional<double> lambda;
  std::string lambda_source;
  std::optional<RiskCoverageReport> report;
  std::string status = "ok";
};

bool uses_k(const std::string& score) { return score.find("knn") != std::string::npos; }

int cmd_sweep(const SweepArgs& s, std::ostream& out) {
  const auto& a = s.scoring;
  const auto names = score_names(a.scores);
  if (names.size() != 1) throw ValidationError("sweep takes exactly one score in --scores");
  const std::string score = names.front();
  const bool is_combo = find_combination(score).has_value();
  if (a.tests.size() != 1) throw ValidationError("sweep takes exactly one --test");
  if (a.train.empty()) throw ValidationError("--train is required");

  std::vector<double> fractions{a.fraction};
  if (!s.fraction_grid.empty()) {
    fractions.clear();
    for (const auto& f : split_list(s.fraction_grid)) {
      const double v = parse_double(f, "--fraction-grid");
      if (!(v > 0.0 && v <= 1.0)) {
        throw ValidationError("--fraction-grid value " + f + " is outside (0, 1]");
      }
      fractions.push_back(v);
    }
  }
  std::vector<std::optional<std::size_t>> ks{a.k};
  if (!s.k_grid.empty()) {
    if (!uses_k(score)) throw ValidationError("score '" + score + "' takes no k");
    ks.clear();
    for (const auto& k : split_list(s.k_grid)) {
      const auto v = parse_size(k, "--k-grid");
      if (v < 1) throw ValidationError("--k-grid value " + k + " is below 1");
      ks.push_back(v);
    }
  }
  std::vector<std::string> lambdas{a.lambda};
  if (!s.lambda_grid.empty()) {
    if (!is_combo) throw ValidationError("score '" + score + "' takes no lambda");
    lambdas.clear();
    for (const auto& l : split_list(s.lambda_grid)) {
      if (l != "auto") parse_double(l, "--lambda-grid");
      lambdas.push_back(l);
    }
    if (!a.calibration.empty() &&
        std::find(lambdas.begin(), lambdas.end(), "auto") == lambdas.end()) {
      lambdas.push_back("auto");
    }
  }
  if (!is_combo) lambdas = {""};

  const Dataset full_train = load_dataset_ref(a.train);
  const Dataset test = load_dataset_ref(a.tests.front());
  std::optional<Dataset> calibration;
  if (!a.calibration.empty()) calibration = load_dataset_ref(a.calibration);
  const auto mask = correctness(test);

  std::vector<SweepRow> rows;
  for (double fraction : fractions) {
    const Dataset train =
        fraction == 1.0 ? full_train : subsample_labeled(full_train, fraction, a.seed);
    for (const auto& k : ks) {
      for (const auto& lambda : lambdas) {
        ScoringArgs cell = a;
        cell.k = k;
        cell.lambda = lambda;
        auto options = pipeline_options(cell);
        SweepRow row;
        row.fraction = fraction;
        try {
          ScoringContext ctx(train, options, calibration ? &*calibration : nullptr);
          if (uses_k(score)) row.k = ctx.k_for(score);
          if (is_combo) {
            row.lambda = ctx.lambda_for(score);
            row.lambda_source = options.lambda_auto ? "auto"
                                : options.lambda    ? "grid"
                                                    : "profile";
          }
          row.report = evaluate(ctx.score(score, test), mask.mask);
        } catch (const InsufficientPartitionError&) {
          // A labeled fraction too small for the score is a result, not an error.
          row.status = "not-applicable";
        }
        rows.push_back(std::move(row));
      }
    }
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].report || !rows[i].report->naurc) continue;
    if (!best || *rows[i].report->naurc < *rows[*best].report->naurc) best = i;
  }
  std::string csv = "score,fraction,k,lambda,lambda_source,aurc,aurc_x100,naurc,status,best\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    csv += score + "," + num(r.fraction) + "," + (r.k ? std::to_string(*r.k) : "") + "," +
           (r.lambda ? num(*r.lambda) : "") + "," + r.lambda_source + ",";
    if (r.report) {
      csv += num(r.report->aurc) + "," + num(r.report->aurc * 100.0) + "," +
             (r.report->naurc ? num(*r.report->naurc) : "undefined");
    } else {
      csv += ",,";
    }
    csv += "," + r.status + "," + (best && *best == i ? "*" : "") + "\n";
  }
  write_file_atomic(a.out, csv);
  out << "wrote " << rows.size() << " sweep row(s) to " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string preset;
  std::string spec;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string oracle_out;
};

int cmd_synth(const SynthArgs& s, std::ostream& out) {
  if (s.preset.empty() == s.spec.empty()) {
    throw ValidationError("synth needs exactly one of --preset or --spec");
  }
  if (s.n == 0) throw ValidationError("--n must be >= 1");
  if (s.preset == "region-error") {
    if (!s.oracle_out.empty()) {
      throw ValidationError("the region-error preset has no likelihood oracle");
    }
    RegionErrorSpec spec;
    spec.n = s.n;
    spec.seed = s.seed;
    save_dataset(generate_region_error_task(spec), s.out);
    out << "wrote " << s.n << " samples to " << s.out << "\n";
    return kExitOk;
  }
  SyntheticSpec spec;
  std::string name;
  if (!s.preset.empty()) {
    spec = synthetic_preset(s.preset, s.n, s.seed);
    name = s.preset;
  } else {
    const auto hash = s.spec.rfind('#');
    if (hash == std::string::npos) {
      throw ValidationError("--spec expects manifest.json#name");
    }
    name = s.spec.substr(hash + 1);
    spec = load_manifest(s.spec.substr(0, hash)).synthetic_spec(name).spec;
  }
  const auto data = generate(spec);
  save_dataset(data.dataset.with_name(name), s.out);
  if (!s.oracle_out.empty()) {
    const auto lr = data.oracle.log_lr_rows(data.points);
    std::string csv = "index,log_lr,correct\n";
    for (std::size_t i = 0; i < lr.size(); ++i) {
      csv += std::to_string(i) + "," + num(lr[i]) + "," + (data.correct[i] ? "1" : "0") + "\n";
    }
    write_file_atomic(s.oracle_out, csv);
  }
  out << "wrote " << spec.n << " samples to " << s.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::vector<std::string> ids;
  bool all = false;
  std::uint64_t seed = TheoremConfig{}.seed;
  bool true_parameters = false;
  std::string out;
};

int cmd_verify(const VerifyArgs& v, std::ostream& out) {
  std::vector<TheoremId> ids;
  if (v.all) {
    ids = all_theorems();
  } else {
    if (v.ids.empty()) throw ValidationError("verify needs theorem ids or --all");
    for (const auto& id : v.ids) ids.push_back(parse_theorem_id(id));
  }
  TheoremConfig config;
  config.seed = v.seed;
  config.true_parameters_only = v.true_parameters;
  std::vector<TheoremResult> results;
  for (auto id : ids) results.push_back(verify_theorem(id, config));
  const std::string report = theorem_report_json(results);
  if (!v.out.empty()) write_file_atomic(v.out, report);
  out << report;
  const bool pass = std::all_of(results.begin(), results.end(),
                                [](const TheoremResult& r) { return r.pass; });
  return pass ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out;
};

// Merges the summary.json of several eval runs into one table.
int cmd_report(const ReportArgs& r, std::ostream& out) {
  if (r.inputs.empty()) throw ValidationError("report needs --inputs");
  std::string csv = "run,dataset,score,aurc,aurc_x100,naurc,best\n";
  ojson merged = ojson::array();
  for (const auto& dir : r.inputs) {
    const std::string path = path_in(dir, "summary.json");
    ojson summary;
    try {
      summary = ojson::parse(read_file(path));
    } catch (const ojson::exception& e) {
      throw ValidationError(path + ": " + e.what());
    }
    const std::string run = fs::path(dir).filename().string();
    const std::string dataset = summary.value("dataset", run);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : summary.at("scores")) {
      if (!s.at("naurc").is_null()) best = std::min(best, s.at("naurc").get<double>());
    }
    for (const auto& s : summary.at("scores")) {
      const bool has_naurc = !s.at("naurc").is_null();
      csv += run + "," + dataset + "," + s.at("score").get<std::string>() + "," +
             num(s.at("aurc").get<double>()) + "," + num(s.at("aurc_x100").get<double>()) +
             "," + (has_naurc ? num(s.at("naurc").get<double>()) : "undefined") + "," +
             (has_naurc && s.at("naurc").get<double>() == best ? "*" : "") + "\n";
    }
    merged.push_back({{"run", run}, {"summary", summary}});
  }
  write_file_atomic(path_in(r.out, "report.csv"), csv);
  write_file_atomic(path_in(r.out, "report.json"), merged.dump(2) + "\n");
  out << "merged " << r.inputs.size() << " run(s) into " << path_in(r.out, "report.csv")
      << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Selective-classification scores and risk-coverage evaluation",
               "selectorlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  ScoringArgs score_args;
  auto* score_cmd = app.add_subcommand("score", "Compute score columns for a test set");
  add_scoring_options(score_cmd, score_args, false);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Risk-coverage reports for scores");
  add_scoring_options(eval_cmd, eval_args.scoring, true);
  eval_cmd->add_option("--bundle", eval_args.bundle, "Score bundle from 'score'");
  eval_cmd->add_option("--group-by", eval_args.group_by,
                       "CSV mapping dataset to group; groups are averaged first");
  eval_cmd->add_flag("--svg", eval_args.svg, "Also plot risk against coverage");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "NAURC over a k / lambda / fraction grid");
  add_scoring_options(sweep_cmd, sweep_args.scoring, false);
  sweep_cmd->add_option("--k-grid", sweep_args.k_grid, "Comma-separated k values");
  sweep_cmd->add_option("--lambda-grid", sweep_args.lambda_grid,
                        "Comma-separated lambda values ('auto' allowed)");
  sweep_cmd->add_option("--fraction-grid", sweep_args.fraction_grid,
                        "Comma-separated labeled fractions in (0, 1]");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--preset", synth_args.preset,
                        "calibrated-binary | class-gaussians | planar | separated-1d | "
                        "region-error");
  synth_cmd->add_option("--spec", synth_args.spec, "manifest.json#name");
  synth_cmd->add_option("--n", synth_args.n, "Sample count");
  synth_cmd->add_option("--seed", synth_args.seed, "Sampling seed");
  synth_cmd->add_option("--out", synth_args.out, "Dataset path (.csv or binary)")->required();
  synth_cmd->add_option("--oracle-out", synth_args.oracle_out,
                        "CSV of exact log-likelihood ratios");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Empirical checks of the optimality results");
  verify_cmd->add_option("ids", verify_args.ids, "Theorem ids");
  verify_cmd->add_flag("--all", verify_args.all, "Run every check");
  verify_cmd->add_option("--seed", verify_args.seed, "Seed for every generator");
  verify_cmd->add_flag("--true-parameters", verify_args.true_parameters,
                       "Delta-MDS: injected parameters only");
  verify_cmd->add_option("--out", verify_args.out, "Write the JSON report here");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Merge eval outputs into one table");
  report_cmd->add_option("--inputs", report_args.inputs, "Eval output directories")
      ->required();
  report_cmd->add_option("--out", report_args.out, "Output directory")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();  // program name
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help / --version
      std::ostringstream msg;
      app.exit(e, msg, msg);
      out << msg.str();
      return kExitOk;
    }
    app.exit(e, err, err);
    return kExitValidation;
  }

  try {
    if (score_cmd->parsed()) return cmd_score(score_args, out);
    if (eval_cmd->parsed()) return cmd_eval(eval_args, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, out);
    if (synth_cmd->parsed()) return cmd_synth(synth_args, out);
    if (verify_cmd->parsed()) return cmd_verify(verify_args, out);
    if (report_cmd->parsed()) return cmd_report(report_args, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace selectorlab::cli
