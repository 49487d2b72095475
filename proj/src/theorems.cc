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

#include "selectorlab/theorems.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "json.hpp"
#include "selectorlab/distance_scores.h"
#include "selectorlab/error.h"
#include "selectorlab/logit_scores.h"
#include "selectorlab/np_oracle.h"
#include "selectorlab/random.h"
#include "selectorlab/rank_stats.h"
#include "selectorlab/score_combiner.h"
#include "selectorlab/synthetic.h"

namespace selectorlab {
namespace {

struct NamedId {
  std::string_view name;
  TheoremId id;
};

constexpr NamedId kIds[] = {
    {"T1_msp", TheoremId::kMspOptimal},      {"T1_rlog", TheoremId::kRLogOptimal},
    {"T2_delta_mds", TheoremId::kDeltaMds},  {"T3_delta_knn", TheoremId::kDeltaKnn},
    {"L2_combination", TheoremId::kCombination},
    {"C_averaged_knn", TheoremId::kAveragedKnn},
};

std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Eigen::MatrixXd scaled_identity(std::size_t d, double variance) {
  const auto n = static_cast<Eigen::Index>(d);
  return variance * Eigen::MatrixXd::Identity(n, n);
}

std::span<const double> row_of(const RowMatrix& m, Eigen::Index i) {
  return {m.row(i).data(), static_cast<std::size_t>(m.cols())};
}

SyntheticData draw(const std::string& preset, std::size_t n, std::uint64_t seed,
                   std::uint64_t stream) {
  return generate(synthetic_preset(preset, n, Rng::derive(seed, stream).next_u64()));
}

TheoremResult verify_calibrated(TheoremId id, const TheoremConfig& config) {
  // P(correct | z) >= 0.6 by construction, so the predicted class always
  // carries the larger logit.
  const auto data = draw("calibrated-binary", config.calibrated_points, config.seed, 1);
  std::vector<double> odds(data.dataset.size());
  for (std::size_t i = 0; i < odds.size(); ++i) {
    const auto post = data.oracle.posterior(row_of(data.points, static_cast<Eigen::Index>(i)));
    odds[i] = post.log_q - post.log_one_minus_q;
  }
  const bool is_msp = id == TheoremId::kMspOptimal;
  const auto score = is_msp ? msp(data.dataset) : rlog(data.dataset);
  const auto agreement = rank_agreement(score.values, odds);
  TheoremResult r;
  r.pass = agreement.kendall == 1.0;
  r.statistics = {{"n", static_cast<double>(odds.size())},
                  {"kendall_tau", agreement.kendall},
                  {"spearman_rho", agreement.spearman}};
  r.detail = std::string(is_msp ? "msp" : "rlog") +
             " against posterior odds on calibrated binary logits; requires tau = 1";
  return r;
}

// Class means and the shared covariance of a class-max density.
std::pair<RowMatrix, Eigen::MatrixXd> class_parameters(const DensityModel& density) {
  const auto& comps = density.components();
  RowMatrix means(static_cast<Eigen::Index>(comps.size()),
                  static_cast<Eigen::Index>(density.dim()));
  for (std::size_t c = 0; c < comps.size(); ++c) {
    means.row(static_cast<Eigen::Index>(c)) = comps[c].mean.transpose();
  }
  return {means, comps.front().covariance};
}

TheoremResult verify_delta_mds(const TheoremConfig& config) {
  const auto probe = draw("class-gaussians", config.identity_points, config.seed, 3);
  const auto& oracle = probe.oracle;
  const auto [means_c, cov_c] = class_parameters(oracle.correct());
  const auto [means_w, cov_w] = class_parameters(oracle.wrong());
  const auto k = static_cast<std::size_t>(means_c.rows());
  const auto stats_c = GaussianStats::from_parameters(means_c, std::vector<bool>(k, true), cov_c);
  const auto stats_w = GaussianStats::from_parameters(means_w, std::vector<bool>(k, true), cov_w);
  // Determinants by LU, independent of the Cholesky path under test.
  const double log_det_ratio = std::log(cov_c.determinant()) - std::log(cov_w.determinant());

  const auto scores = delta_mds_scores(stats_c, stats_w, probe.points);
  const auto lr = probe.oracle.log_lr_rows(probe.points);
  double max_err = 0.0;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    max_err = std::max(max_err, std::abs(scores[i] - (2.0 * lr[i] + log_det_ratio)));
  }
  const double rho_true = spearman_rho(scores, lr);

  TheoremResult r;
  r.statistics = {{"identity_points", static_cast<double>(lr.size())},
                  {"identity_max_abs_error", max_err},
                  {"spearman_rho_true_parameters", rho_true}};
  r.pass = max_err <= config.identity_tolerance && rho_true == 1.0;
  r.detail = "injected parameters: score = 2 log-LR + log det ratio within " +
             num(config.identity_tolerance);
  if (config.true_parameters_only) return r;

  const auto train = draw("class-gaussians", config.estimated_train, config.seed, 4);
  const auto test = draw("class-gaussians", config.test_points, config.seed, 5);
  const auto model = DeltaMdsModel::fit(train.dataset);
  const auto est = verify_np_ranking(model.score(test.dataset), test.oracle, test.points);
  r.statistics.emplace_back("estimated_train", static_cast<double>(config.estimated_train));
  r.statistics.emplace_back("spearman_rho_estimated", est.spearman);
  r.statistics.emplace_back("kendall_tau_estimated", est.kendall);
  r.pass = r.pass && est.spearman >= config.estimated_min_rho;
  r.detail += "; fitted parameters: rho >= " + num(config.estimated_min_rho);
  return r;
}

TheoremResult verify_delta_knn(const TheoremConfig& config) {
  const auto test = draw("planar", config.test_points, config.seed, 6);
  const auto lr = test.oracle.log_lr_rows(test.points);
  TheoremResult r;
  r.pass = true;
  double previous = -1.0;
  for (std::size_t s = 0; s < config.knn_sizes.size(); ++s) {
    const std::size_t n = config.knn_sizes[s];
    const auto train = draw("planar", n, config.seed, 7 + s);
    const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const auto model = DeltaKnnModel::fit(train.dataset, /*normalize=*/false);
    const auto score = model.score(test.dataset, k, /*averaged=*/false);
    const double rho = spearman_rho(score.values, lr);
    r.statistics.emplace_back("n_" + std::to_string(n) + "_k", static_cast<double>(k));
    r.statistics.emplace_back("n_" + std::to_string(n) + "_spearman_rho", rho);
    if (rho < previous - config.knn_trend_slack) r.pass = false;
    previous = rho;
  }
  r.pass = r.pass && previous >= config.knn_min_rho;
  r.detail = "plain delta-knn, k = ceil(sqrt(N)); rho nondecreasing within " +
             num(config.knn_trend_slack) + " and >= " +
             num(config.knn_min_rho) + " at the largest N";
  return r;
}

TheoremResult verify_averaged_knn(const TheoremConfig& config) {
  const auto test = draw("planar", config.test_points, config.seed, 6);
  const auto train = draw("planar", config.averaged_train, config.seed, 20);
  const auto model = DeltaKnnModel::fit(train.dataset, /*normalize=*/false);
  const auto plain = model.score(test.dataset, config.averaged_k, false);
  const auto averaged = model.score(test.dataset, config.averaged_k, true);
  const auto agreement = rank_agreement(averaged.values, plain.values);
  TheoremResult r;
  r.statistics = {{"k", static_cast<double>(config.averaged_k)},
                  {"n", static_cast<double>(config.averaged_train)},
                  {"spearman_rho", agreement.spearman},
                  {"kendall_tau", agreement.kendall}};
  r.pass = agreement.spearman >= config.averaged_min_rho;
  r.detail = "averaged against plain delta-knn; rho >= " +
             num(config.averaged_min_rho);
  return r;
}

double normal_log_pdf(double z, double mean, double sd) {
  const double u = (z - mean) / sd;
  return -0.5 * u * u - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

TheoremResult verify_combination(const TheoremConfig& config) {
  // First pair lives on coordinate 0, second on coordinate 1.
  constexpr double kC1[] = {0.0, 1.0};
  constexpr double kW1[] = {2.0, 1.5};
  constexpr double kC2[] = {1.0, 0.5};
  constexpr double kW2[] = {-0.5, 1.2};
  Rng rng = Rng::derive(config.seed, 30);
  const std::size_t n = config.test_points;
  const auto one = [](double v) { return Eigen::VectorXd::Constant(1, v); };
  const auto c1 = DensityModel::gaussian(one(kC1[0]), scaled_identity(1, kC1[1] * kC1[1]));
  const auto w1 = DensityModel::gaussian(one(kW1[0]), scaled_identity(1, kW1[1] * kW1[1]));
  const auto c2 = DensityModel::gaussian(one(kC2[0]), scaled_identity(1, kC2[1] * kC2[1]));
  const auto w2 = DensityModel::gaussian(one(kW2[0]), scaled_identity(1, kW2[1] * kW2[1]));

  std::vector<double> z0(n);
  std::vector<double> z1(n);
  std::vector<double> s1(n);
  std::vector<double> s2(n);
  for (std::size_t i = 0; i < n; ++i) {
    z0[i] = 2.0 * rng.normal();
    z1[i] = 2.0 * rng.normal();
    s1[i] = c1.log_pdf({&z0[i], 1}) - w1.log_pdf({&z0[i], 1});
    s2[i] = c2.log_pdf({&z1[i], 1}) - w2.log_pdf({&z1[i], 1});
  }
  const auto first = external_scores("log-lr-1", s1);
  const auto second = external_scores("log-lr-2", s2);

  TheoremResult r;
  r.pass = true;
  double worst_tau = 1.0;
  double worst_err = 0.0;
  for (std::size_t l = 0; l < config.combination_lambdas; ++l) {
    const double lambda = -2.0 + 4.0 * rng.uniform();
    const auto t = combine(first, second, lambda);
    std::vector<double> tilted(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double num = normal_log_pdf(z0[i], kC1[0], kC1[1]) +
                         lambda * normal_log_pdf(z1[i], kC2[0], kC2[1]);
      const double den = normal_log_pdf(z0[i], kW1[0], kW1[1]) +
                         lambda * normal_log_pdf(z1[i], kW2[0], kW2[1]);
      tilted[i] = num - den;
      worst_err = std::max(worst_err, std::abs(t.values[i] - tilted[i]));
    }
    const double tau = kendall_tau(t.values, tilted);
    worst_tau = std::min(worst_tau, tau);
    r.statistics.emplace_back("lambda_" + std::to_string(l), lambda);
    r.statistics.emplace_back("kendall_tau_" + std::to_string(l), tau);
    if (tau != 1.0) r.pass = false;
  }
  r.statistics.emplace_back("min_kendall_tau", worst_tau);
  r.statistics.emplace_back("max_abs_error", worst_err);
  r.pass = r.pass && worst_err <= 1e-9;
  r.detail = "s1 + lambda s2 against the closed-form tilted log-ratio; requires tau = 1";
  return r;
}

}  // namespace

std::string_view theorem_name(TheoremId id) {
  for (const auto& e : kIds) {
    if (e.id == id) return e.name;
  }
  return "unknown";
}

TheoremId parse_theorem_id(std::string_view name) {
  for (const auto& e : kIds) {
    if (e.name == name) return e.id;
  }
  std::string known;
  for (const auto& e : kIds) known += (known.empty() ? "" : ", ") + std::string(e.name);
  throw ValidationError("unknown theorem id '" + std::string(name) + "' (known: " + known + ")");
}

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> ids = [] {
    std::vector<TheoremId> v;
    for (const auto& e : kIds) v.push_back(e.id);
    return v;
  }();
  return ids;
}

TheoremResult verify_theorem(TheoremId id, const TheoremConfig& config) {
  TheoremResult r;
  switch (id) {
    case TheoremId::kMspOptimal:
    case TheoremId::kRLogOptimal:
      r = verify_calibrated(id, config);
      break;
    case TheoremId::kDeltaMds:
      r = verify_delta_mds(config);
      break;
    case TheoremId::kDeltaKnn:
      r = verify_delta_knn(config);
      break;
    case TheoremId::kCombination:
      r = verify_combination(config);
      break;
    case TheoremId::kAveragedKnn:
      r = verify_averaged_knn(config);
      break;
  }
  r.id = std::string(theorem_name(id));
  return r;
}

std::string theorem_report_json(std::span<const TheoremResult> results) {
  nlohmann::ordered_json report;
  bool all_pass = true;
  auto list = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json entry;
    entry["id"] = r.id;
    entry["pass"] = r.pass;
    nlohmann::ordered_json stats = nlohmann::ordered_json::object();
    for (const auto& [key, value] : r.statistics) stats[key] = value;
    entry["statistics"] = std::move(stats);
    entry["detail"] = r.detail;
    list.push_back(std::move(entry));
    all_pass = all_pass && r.pass;
  }
  report["all_pass"] = all_pass;
  report["results"] = std::move(list);
  return report.dump(2) + "\n";
}

}  // namespace selectorlab
