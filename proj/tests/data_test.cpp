// Copyright 2026 The polyq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "polyq/data.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "json.hpp"
#include "polyq/error.hpp"
#include "polyq/random.hpp"

namespace polyq {
namespace {

const std::string kIris = std::string(POLYQ_SOURCE_DIR) + "/data/iris.csv";

std::string error_of(const std::string& text) {
  try {
    parse_csv(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(Csv, Iris) {
  const Dataset ds = load_csv(kIris);
  EXPECT_EQ(ds.size(), 150u);
  EXPECT_EQ(ds.dim(), 4u);
  EXPECT_EQ(ds.num_classes(), 3u);
  EXPECT_EQ(ds.class_counts(), (std::vector<std::size_t>{50, 50, 50}));
  EXPECT_EQ(ds.class_names, (std::vector<std::string>{"setosa", "versicolor", "virginica"}));
  EXPECT_DOUBLE_EQ(ds.features[0][0], 5.1);
}

TEST(Csv, SelectedColumns) {
  const std::vector<std::string> cols{"petal_width", "sepal_length"};
  const Dataset ds = load_csv(kIris, cols);
  EXPECT_EQ(ds.dim(), 2u);
  EXPECT_DOUBLE_EQ(ds.features[0][1], 5.1);
  EXPECT_DOUBLE_EQ(ds.features[0][0], 0.2);
  const std::vector<std::string> bad{"petal_area"};
  EXPECT_THROW(load_csv(kIris, bad), Error);
  EXPECT_THROW(load_csv(kIris, {}, "species"), Error);
}

TEST(Csv, Errors) {
  EXPECT_NE(error_of("").find("empty"), std::string::npos);
  EXPECT_NE(error_of("a,label\n1,x\nfoo,y\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("a,label\n1,x\n2\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("a,label\n").find("no rows"), std::string::npos);
  EXPECT_THROW(load_csv("/nonexistent/file.csv"), Error);
}

TEST(Csv, RoundTrip) {
  const Dataset ds = gen_gaussian_xor(5, 0.3, 1.0, 9);
  const Dataset back = parse_csv(to_csv(ds));
  EXPECT_EQ(back.features, ds.features);
  EXPECT_EQ(back.labels, ds.labels);
  EXPECT_EQ(back.feature_names, ds.feature_names);
}

TEST(Dataset, ReorderClasses) {
  const Dataset ds = load_csv(kIris);
  const std::vector<std::string> order{"setosa", "virginica", "versicolor"};
  const Dataset r = ds.reorder_classes(order);
  EXPECT_EQ(r.class_names, order);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(r.class_names[r.labels[i]], ds.class_names[ds.labels[i]]);
  const std::vector<std::string> missing{"setosa", "virginica"};
  EXPECT_THROW(ds.reorder_classes(missing), Error);
}

TEST(Split, IrisSizes) {
  const Dataset ds = load_csv(kIris);
  const auto [train, test] = stratified_split(ds, 0.4, 1);
  EXPECT_EQ(train.size(), 90u);
  EXPECT_EQ(test.size(), 60u);
  EXPECT_EQ(train.class_counts(), (std::vector<std::size_t>{30, 30, 30}));
  EXPECT_EQ(test.class_counts(), (std::vector<std::size_t>{20, 20, 20}));
}

TEST(Split, IsAPartition) {
  const Dataset ds = gen_synthetic4(1001, 3);
  const auto [train, test] = stratified_split(ds, 0.4, 5);
  std::multimap<std::vector<double>, std::size_t> all, parts;
  for (std::size_t i = 0; i < ds.size(); ++i) all.emplace(ds.features[i], ds.labels[i]);
  for (const Dataset* p : {&train, &test})
    for (std::size_t i = 0; i < p->size(); ++i) parts.emplace(p->features[i], p->labels[i]);
  EXPECT_EQ(all, parts);
  EXPECT_NEAR(static_cast<double>(test.size()), 400.4, 4.0);
}

TEST(Split, DeterministicAndSeedDependent) {
  const Dataset ds = load_csv(kIris);
  EXPECT_EQ(stratified_split(ds, 0.4, 3).second.features, stratified_split(ds, 0.4, 3).second.features);
  EXPECT_NE(stratified_split(ds, 0.4, 3).second.features, stratified_split(ds, 0.4, 4).second.features);
}

TEST(Split, Errors) {
  const Dataset ds = load_csv(kIris);
  EXPECT_THROW(stratified_split(ds, 0.0, 1), Error);
  EXPECT_THROW(stratified_split(ds, 1.0, 1), Error);
  EXPECT_THROW(stratified_split(ds, 0.001, 1), Error);
}

TEST(Subsample, Balanced) {
  const Dataset ds = gen_synthetic4(2000, 2);
  const Dataset s = subsample_balanced(ds, 400, 1);
  EXPECT_EQ(s.class_counts(), (std::vector<std::size_t>{100, 100, 100, 100}));
  EXPECT_EQ(subsample_balanced(ds, 4, 1).class_counts(), (std::vector<std::size_t>{1, 1, 1, 1}));
  EXPECT_THROW(subsample_balanced(ds, 402, 1), Error);
  EXPECT_THROW(subsample_balanced(ds, 4000, 1), Error);
  // A 1000-row skin-style subset then splits 600/400.
  Dataset two = gen_gaussian_xor(600, 0.3, 1.0, 4);
  const auto [train, test] = stratified_split(subsample_balanced(two, 1000, 2), 0.4, 3);
  EXPECT_EQ(train.size(), 600u);
  EXPECT_EQ(test.class_counts(), (std::vector<std::size_t>{200, 200}));
}

TEST(Xor, Construction) {
  const Dataset ds = gen_gaussian_xor(20, 0.3, 1.0, 1);
  EXPECT_EQ(ds.size(), 80u);
  EXPECT_EQ(ds.class_counts(), (std::vector<std::size_t>{40, 40}));
  EXPECT_EQ(gen_gaussian_xor(20, 0.3, 1.0, 1).features, ds.features);
  const auto meta = nlohmann::json::parse(ds.metadata);
  EXPECT_EQ(meta["generator"], "gaussian_xor");

  const Dataset exact = gen_gaussian_xor(3, 0.0, 2.0, 1);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    EXPECT_DOUBLE_EQ(std::hypot(exact.features[i][0], exact.features[i][1]), 2.0);
    EXPECT_EQ(bayes_xor(exact.features[i]), exact.labels[i]);
  }
}

TEST(Xor, BayesClassifier) {
  EXPECT_EQ(bayes_xor(std::vector<double>{0.9, 0.1}), 0u);
  EXPECT_EQ(bayes_xor(std::vector<double>{0.1, -0.9}), 1u);
  EXPECT_EQ(bayes_xor(std::vector<double>{-0.5, 0.5}), 0u);
}

TEST(Xor, SigmaCalibration) {
  const double sigma = xor_sigma_for_bayes_accuracy(kXorBayesAccuracy, 1.0);
  EXPECT_NEAR(xor_bayes_accuracy(sigma, 1.0), kXorBayesAccuracy, 1e-12);
  // Bisection on the closed form as an independent solve.
  auto acc = [](double s) {
    const double p = 0.5 * std::erfc(-1.0 / (std::sqrt(2.0) * s * std::sqrt(2.0)));
    return p * p + (1 - p) * (1 - p);
  };
  double lo = 0.1, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (acc(mid) > kXorBayesAccuracy ? lo : hi) = mid;
  }
  EXPECT_NEAR(sigma, lo, 1e-12);
  EXPECT_NEAR(sigma, 0.33336, 1e-4);
}

TEST(Xor, MonteCarloBayesAccuracy) {
  const double sigma = xor_sigma_for_bayes_accuracy(kXorBayesAccuracy, 1.0);
  Rng rng(2024);
  const std::size_t n = 10'000'000;
  const double centers[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = rng.index(4);
    const double x = centers[c][0] + sigma * rng.normal(), y = centers[c][1] + sigma * rng.normal();
    correct += (std::abs(x) >= std::abs(y) ? 0u : 1u) == (c < 2 ? 0u : 1u);
  }
  EXPECT_NEAR(static_cast<double>(correct) / n, 0.9667, 0.001);
}

// One-vs-rest least-squares linear classifier with a bias term.
double linear_baseline_accuracy(const Dataset& ds) {
  const std::size_t k = ds.num_classes();
  double a[3][3] = {};
  std::vector<std::array<double, 3>> b(k, {0, 0, 0});
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double f[3] = {1.0, ds.features[i][0], ds.features[i][1]};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) a[r][c] += f[r] * f[c];
      b[ds.labels[i]][r] += f[r];
    }
  }
  auto det3 = [](const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det3(a);
  std::vector<std::array<double, 3>> w(k);
  for (std::size_t c = 0; c < k; ++c) {
    for (int col = 0; col < 3; ++col) {
      double m[3][3];
      for (int r = 0; r < 3; ++r)
        for (int cc = 0; cc < 3; ++cc) m[r][cc] = cc == col ? b[c][r] : a[r][cc];
      w[c][col] = det3(m) / d;
    }
  }
  std::size_t ok = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::size_t best = 0;
    double best_v = -1e300;
    for (std::size_t c = 0; c < k; ++c) {
      const double v = w[c][0] + w[c][1] * ds.features[i][0] + w[c][2] * ds.features[i][1];
      if (v > best_v) {
        best_v = v;
        best = c;
      }
    }
    ok += best == ds.labels[i];
  }
  return static_cast<double>(ok) / ds.size();
}

TEST(Synthetic4, ShapeAndDeterminism) {
  const Dataset ds = gen_synthetic4(5000);
  EXPECT_EQ(ds.size(), 5000u);
  EXPECT_EQ(ds.num_classes(), 4u);
  for (std::size_t c : ds.class_counts()) EXPECT_NEAR(static_cast<double>(c), 1250.0, 40.0);
  EXPECT_EQ(gen_synthetic4(5000).features, ds.features);
  EXPECT_NE(gen_synthetic4(5000, kSynthetic4Seed + 1).features, ds.features);
  const auto meta = nlohmann::json::parse(ds.metadata);
  EXPECT_EQ(meta["clusters"].size(), 4u);
  EXPECT_EQ(meta["label_flips"], 50);
  for (const auto& cl : meta["clusters"]) {
    for (double m : cl["mean"]) EXPECT_LE(std::abs(m), 2.0);
    for (double s : cl["std"]) {
      EXPECT_GE(s, 0.2);
      EXPECT_LE(s, 0.6);
    }
  }
  const auto [train, test] = stratified_split(ds, 0.4, 1);
  EXPECT_NEAR(static_cast<double>(train.size()), 3000.0, 2.0);
  EXPECT_NEAR(static_cast<double>(test.size()), 2000.0, 2.0);
  EXPECT_THROW(gen_synthetic4(3, 1), Error);
}

TEST(Synthetic4, DefaultSeedDefeatsLinearBaseline) {
  EXPECT_LT(linear_baseline_accuracy(gen_synthetic4(5000)), 0.80);
  // The oracle itself separates a linearly separable set.
  Dataset easy;
  easy.class_names = {"a", "b"};
  easy.feature_names = {"x1", "x2"};
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
    if (std::abs(x + 0.5 * y) < 0.05) continue;
    easy.features.push_back({x, y});
    easy.labels.push_back(x + 0.5 * y > 0 ? 1 : 0);
  }
  EXPECT_GT(linear_baseline_accuracy(easy), 0.95);
}

}  // namespace
}  // namespace polyq
