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


#include "polyq/train.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "polyq/error.hpp"
#include "polyq/random.hpp"

namespace polyq {
namespace {

constexpr double kPi = std::numbers::pi;

double bowl(std::span<const double> x) { return (x[0] - 3) * (x[0] - 3) + (x[1] + 1) * (x[1] + 1); }

double rosenbrock(std::span<const double> x) {
  return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
}

ModelSpec xor_spec() {
  ModelSpec m;
  m.circuit = preset("xor2q");
  m.class_map = ClassMap({{"0", "00"}, {"1", "10"}});
  m.encoder.mode = EncoderMode::identity;
  return m;
}

Dataset xor_train() { return gen_gaussian_xor(20, xor_sigma_for_bayes_accuracy(kXorBayesAccuracy, 1.0), 1.0, 1); }

TEST(FiniteDiff, Examples) {
  const Objective sq = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  const auto g = finite_diff_gradient(sq, std::vector<double>{1, -2}, 1e-5);
  EXPECT_NEAR(g[0], 2.0, 1e-8);
  EXPECT_NEAR(g[1], -4.0, 1e-8);
  const Objective c = [](std::span<const double>) { return 4.2; };
  EXPECT_EQ(finite_diff_gradient(c, std::vector<double>{1, 2, 3}, 1e-3), (std::vector<double>{0, 0, 0}));
  EXPECT_THROW(finite_diff_gradient(c, std::vector<double>{1}, 0.0), Error);
}

TEST(QuasiNewton, QuadraticBowl) {
  const auto r = minimize_quasi_newton(bowl, std::vector<double>{0, 0});
  EXPECT_NEAR(r.x[0], 3.0, 1e-6);
  EXPECT_NEAR(r.x[1], -1.0, 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(QuasiNewton, Rosenbrock) {
  const auto r = minimize_quasi_newton(rosenbrock, std::vector<double>{-1.2, 1.0}, {1e-6, 200, 1e-4});
  EXPECT_LT(r.value, 1e-8);
  EXPECT_LE(r.iterations, 200u);
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
}

TEST(QuasiNewton, OneIterationIsOneStep) {
  const auto r = minimize_quasi_newton(bowl, std::vector<double>{0, 0}, {1e-12, 1, 1e-4});
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_EQ(r.trace.size(), 2u);
  EXPECT_LT(r.trace[1], r.trace[0]);
  const auto z = minimize_quasi_newton(bowl, std::vector<double>{0, 0}, {1e-12, 0, 1e-4});
  EXPECT_EQ(z.iterations, 0u);
  EXPECT_EQ(z.evaluations, 1u);
}

TEST(QuasiNewton, BestNeverAboveTrace) {
  const auto r = minimize_quasi_newton(rosenbrock, std::vector<double>{2, 2}, {1e-6, 50, 1e-4});
  for (double v : r.trace) EXPECT_LE(r.value, v);
  EXPECT_EQ(r.value, rosenbrock(r.x));
}

TEST(DerivativeFree, QuadraticBowl) {
  const auto r = minimize_derivative_free(bowl, std::vector<double>{0, 0}, {0.5, 1e-6, 200, 1});
  EXPECT_LE(r.evaluations, 200u);
  EXPECT_LT(std::hypot(r.x[0] - 3, r.x[1] + 1), 1e-3);
}

TEST(DerivativeFree, HigherDimensionQuadratic) {
  const Objective f = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.5 * i) * (x[i] - 0.5 * i);
    return s;
  };
  const auto r = minimize_derivative_free(f, std::vector<double>(8, 0.0), {0.5, 1e-6, 2000, 3});
  EXPECT_LT(r.value, 1e-4);
}

TEST(DerivativeFree, NoisyQuadratic) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng noise(seed + 100);
    const Objective f = [&](std::span<const double> x) { return bowl(x) + 0.01 * noise.normal(); };
    const auto r = minimize_derivative_free(f, std::vector<double>{0, 0}, {0.5, 1e-4, 300, seed});
    worst = std::max(worst, bowl(r.x));
  }
  EXPECT_LT(worst, 0.05);
}

TEST(DerivativeFree, DeterministicGivenSeed) {
  const auto a = minimize_derivative_free(rosenbrock, std::vector<double>{-1.2, 1}, {0.5, 1e-6, 150, 9});
  const auto b = minimize_derivative_free(rosenbrock, std::vector<double>{-1.2, 1}, {0.5, 1e-6, 150, 9});
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.trace.size(), a.evaluations);
}

TEST(ShotSchedule, Lookup) {
  const ShotSchedule s = ShotSchedule::standard();
  EXPECT_EQ(s.shots_at(0), 250u);
  EXPECT_EQ(s.shots_at(19), 250u);
  EXPECT_EQ(s.shots_at(20), 500u);
  EXPECT_EQ(s.shots_at(49), 500u);
  EXPECT_EQ(s.shots_at(50), 750u);
  EXPECT_EQ(s.shots_at(100000), 750u);
  EXPECT_THROW(ShotSchedule({{5, 10}, {5, 20}}), Error);
  EXPECT_THROW(ShotSchedule({{5, 0}}), Error);
  EXPECT_THROW(ShotSchedule(std::vector<std::pair<std::size_t, std::size_t>>{}), Error);
}

TEST(Train, ZeroIterationsReturnsStart) {
  for (auto opt : {OptimizerKind::quasi_newton, OptimizerKind::derivative_free}) {
    TrainOptions o;
    o.optimizer = opt;
    o.max_iters = 0;
    o.seed = 4;
    const TrainReport r = train(xor_spec(), xor_train(), o);
    EXPECT_EQ(r.best_theta, r.initial_theta);
    EXPECT_EQ(r.loss_trace.size(), 1u);
    EXPECT_EQ(r.evaluations, 1u);
    for (double t : r.initial_theta) {
      EXPECT_GT(t, -kPi);
      EXPECT_LE(t, kPi);
    }
  }
}

TEST(Train, SampledRequiresDerivativeFree) {
  TrainOptions o;
  o.mode = EvalMode::sampled;
  o.optimizer = OptimizerKind::quasi_newton;
  EXPECT_THROW(train(xor_spec(), xor_train(), o), Error);
}

TEST(Train, ExactXorReachesHighTrainingAccuracy) {
  const Dataset data = xor_train();
  double best_acc = 0.0;
  for (std::uint64_t r = 0; r < 100 && best_acc < 0.95; ++r) {
    TrainOptions o;
    o.seed = mix_seed(2, r);
    const TrainReport rep = train(xor_spec(), data, o);
    for (double v : rep.loss_trace) ASSERT_LE(rep.best_loss, v);
    ModelSpec m = xor_spec();
    m.theta = rep.best_theta;
    EXPECT_NEAR(loss_batch(m, m.theta, data.features, data.labels, {}), rep.best_loss, 1e-12);
    best_acc = std::max(best_acc, evaluate(m, data).accuracy);
  }
  EXPECT_GE(best_acc, 0.95);
}

TEST(Train, SampledShotAccountingAndReproducibility) {
  const Dataset data = xor_train();
  TrainOptions o;
  o.mode = EvalMode::sampled;
  o.optimizer = OptimizerKind::derivative_free;
  o.max_iters = 60;
  o.seed = 8;
  const TrainReport r = train(xor_spec(), data, o);
  EXPECT_EQ(r.loss_trace.size(), 60u);
  std::size_t expect = 0;
  for (std::size_t i = 0; i < 60; ++i) {
    EXPECT_EQ(r.shots_trace[i], ShotSchedule::standard().shots_at(i));
    expect += data.size() * r.shots_trace[i];
  }
  EXPECT_EQ(r.total_shots, expect);
  EXPECT_EQ(r.total_shots, 80u * (20 * 250 + 30 * 500 + 10 * 750));
  // The best loss is reproduced by re-measuring with the same shots and seed.
  ModelSpec m = xor_spec();
  const std::size_t k = r.best_iteration;
  const Readout readout{EvalMode::sampled, r.shots_trace[k], mix_seed(o.seed, k + 1)};
  EXPECT_EQ(loss_batch(m, r.best_theta, data.features, data.labels, readout), r.best_loss);
  const TrainReport again = train(xor_spec(), data, o);
  EXPECT_EQ(again.loss_trace, r.loss_trace);
}

TEST(Train, SampledIrisLossTrendsDown) {
  Dataset ds = load_csv(std::string(POLYQ_SOURCE_DIR) + "/data/iris.csv");
  ds = ds.reorder_classes(std::vector<std::string>{"setosa", "virginica", "versicolor"});
  const auto [tr, te] = stratified_split(ds, 0.4, 1);
  ModelSpec m;
  m.circuit = preset("iris2q");
  m.class_map = ClassMap({{"setosa", "00"}, {"virginica", "01"}, {"versicolor", "10"}});
  m.stats = fit(tr.features);
  TrainOptions o;
  o.mode = EvalMode::sampled;
  o.optimizer = OptimizerKind::derivative_free;
  o.max_iters = 120;
  o.seed = 3;
  const TrainReport r = train(m, tr, o);
  ASSERT_LE(r.loss_trace.size(), 120u);
  ASSERT_GE(r.loss_trace.size(), 40u);
  const double head = std::accumulate(r.loss_trace.begin(), r.loss_trace.begin() + 20, 0.0) / 20;
  const double tail = std::accumulate(r.loss_trace.end() - 20, r.loss_trace.end(), 0.0) / 20;
  EXPECT_LT(tail, head);
  std::size_t shots = 0;
  for (std::size_t i = 0; i < r.loss_trace.size(); ++i) shots += 90 * ShotSchedule::standard().shots_at(i);
  EXPECT_EQ(r.total_shots, shots);
}

// Exact-mode XOR loss as a function of theta.
struct XorLoss {
  ModelSpec spec = xor_spec();
  Dataset data = xor_train();
  double operator()(std::span<const double> t) const {
    return loss_batch(spec, t, data.features, data.labels, {});
  }
};

TEST(Loss, PeriodicInEveryParameter) {
  const XorLoss f;
  Rng rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> t(4);
    for (double& v : t) v = rng.uniform(-kPi, kPi);
    const double base = f(t);
    for (std::size_t i = 0; i < 4; ++i) {
      std::vector<double> s = t;
      s[i] += 2 * kPi;
      EXPECT_NEAR(f(s), base, 1e-10);
    }
  }
}

TEST(Loss, CentralDifferenceIsSecondOrder) {
  const XorLoss loss;
  const Objective f = [&](std::span<const double> t) { return loss(t); };
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> t(4);
    for (double& v : t) v = rng.uniform(-kPi, kPi);
    // Five-point stencil with a small step as the reference.
    const double h5 = 1e-3;
    std::vector<double> ref(4);
    for (std::size_t i = 0; i < 4; ++i) {
      auto at = [&](double d) {
        std::vector<double> s = t;
        s[i] += d;
        return f(s);
      };
      ref[i] = (-at(2 * h5) + 8 * at(h5) - 8 * at(-h5) + at(-2 * h5)) / (12 * h5);
    }
    auto err = [&](double h) {
      const auto g = finite_diff_gradient(f, t, h);
      double e = 0.0;
      for (std::size_t i = 0; i < 4; ++i) e = std::max(e, std::abs(g[i] - ref[i]));
      return e;
    };
    const auto g = finite_diff_gradient(f, t, 1e-4);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(g[i], ref[i], 1e-4);
    const double e1 = err(0.04), e2 = err(0.02);
    EXPECT_NEAR(e1 / e2, 4.0, 0.5) << "trial " << trial;
  }
}

TEST(Evaluate, PerfectModel) {
  // sx Rz(w) sx reads 0 at w = pi and 1 at w = 0.
  ModelSpec m;
  m.circuit = Circuit(1, {Gate::sx(0), Gate::rz(0, Input{0}), Gate::sx(0)});
  m.class_map = ClassMap({{"a", "0"}, {"b", "1"}});
  m.encoder.mode = EncoderMode::identity;
  Dataset d;
  d.class_names = {"a", "b"};
  d.features = {{kPi}, {0.0}, {kPi}, {0.0}, {0.0}};
  d.labels = {0, 1, 0, 1, 1};
  const EvalResult r = evaluate(m, d);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.confusion.at(0, 0), 2u);
  EXPECT_EQ(r.confusion.at(1, 1), 3u);
  EXPECT_EQ(r.confusion.at(0, 1) + r.confusion.at(1, 0), 0u);
  EXPECT_THROW(evaluate(m, Dataset{}), Error);
}

TEST(Evaluate, IrisConfusionShapeAndSampledDeterminism) {
  Dataset ds = load_csv(std::string(POLYQ_SOURCE_DIR) + "/data/iris.csv");
  ds = ds.reorder_classes(std::vector<std::string>{"setosa", "virginica", "versicolor"});
  const auto [tr, te] = stratified_split(ds, 0.4, 1);
  ModelSpec m;
  m.circuit = preset("iris2q");
  m.class_map = ClassMap({{"setosa", "00"}, {"virginica", "01"}, {"versicolor", "10"}});
  m.stats = fit(tr.features);
  m.theta = std::vector<double>(8, 0.3);
  const EvalResult r = evaluate(m, te);
  EXPECT_EQ(r.confusion.classes, 3u);
  for (std::size_t a = 0; a < 3; ++a) {
    std::size_t row = 0;
    for (std::size_t p = 0; p < 3; ++p) row += r.confusion.at(a, p);
    EXPECT_EQ(row, 20u);
  }
  const Readout s{EvalMode::sampled, 300, 11};
  EXPECT_EQ(evaluate(m, te, s).confusion.counts, evaluate(m, te, s).confusion.counts);
}

}  // namespace
}  // namespace polyq
