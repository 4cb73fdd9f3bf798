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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "polyq/error.hpp"
#include "polyq/random.hpp"

namespace polyq {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// Solves A x = b (n x n, row-major) by Gaussian elimination with partial
// pivoting. Returns false when A is numerically singular.
bool solve(std::vector<double> a, Vec b, std::size_t n, Vec& x) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    if (std::abs(a[piv * n + c]) < 1e-13 * scale) return false;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double m = a[r * n + c] / a[c * n + c];
      if (m == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= m * a[c * n + k];
      b[r] -= m * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return true;
}

// Tracks the best point among all evaluations.
struct Best {
  Vec x;
  double value = std::numeric_limits<double>::infinity();
  void offer(const Vec& p, double v) {
    if (v < value) {
      value = v;
      x = p;
    }
  }
};

}  // namespace

std::vector<double> finite_diff_gradient(const Objective& f, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw Error("finite-difference step must be positive");
  Vec p(x.begin(), x.end());
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] = x[i] + h;
    const double up = f(p);
    p[i] = x[i] - h;
    const double down = f(p);
    p[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

MinimizeResult minimize_quasi_newton(const Objective& f, std::span<const double> x0,
                                     const QuasiNewtonOptions& options) {
  const std::size_t n = x0.size();
  MinimizeResult r;
  Vec x(x0.begin(), x0.end());
  double fx = f(x);
  r.evaluations = 1;
  r.trace.push_back(fx);
  r.x = x;
  r.value = fx;
  if (options.max_iters == 0) return r;

  Vec g = finite_diff_gradient(f, x, options.fd_step);
  r.evaluations += 2 * n;
  std::vector<double> h(n * n, 0.0);  // inverse Hessian estimate
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
  bool scaled = false;

  while (r.iterations < options.max_iters) {
    if (norm(g) < options.tolerance) {
      r.converged = true;
      break;
    }
    Vec p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) p[i] -= h[i * n + k] * g[k];
    }
    double slope = dot(g, p);
    if (!(slope < 0.0)) {
      std::fill(h.begin(), h.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
      for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
      slope = -dot(g, g);
    }

    double t = 1.0;
    Vec xn(n);
    double fn = fx;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * p[i];
      fn = f(xn);
      ++r.evaluations;
      if (fn <= fx + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      r.line_search_failed = true;
      break;
    }

    Vec gn = finite_diff_gradient(f, xn, options.fd_step);
    r.evaluations += 2 * n;
    Vec s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * norm(s) * norm(y)) {
      if (!scaled) {
        const double gamma = sy / dot(y, y);
        for (std::size_t i = 0; i < n; ++i) h[i * n + i] = gamma;
        scaled = true;
      }
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      Vec hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) hy[i] += h[i * n + k] * y[k];
      }
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          h[i * n + k] += -rho * (hy[i] * s[k] + s[i] * hy[k]) + (rho * rho * yhy + rho) * s[i] * s[k];
        }
      }
    }
    x = std::move(xn);
    fx = fn;
    g = std::move(gn);
    ++r.iterations;
    r.trace.push_back(fx);
    if (fx < r.value) {
      r.value = fx;
      r.x = x;
    }
  }
  return r;
}

MinimizeResult minimize_derivative_free(const Objective& f, std::span<const double> x0,
                                        const DerivativeFreeOptions& options) {
  if (!(options.initial_step > 0.0)) throw Error("initial step must be positive");
  const std::size_t n = x0.size();
  MinimizeResult r;
  Best best;
  auto eval = [&](const Vec& p) {
    const double v = f(p);
    ++r.evaluations;
    ++r.iterations;
    r.trace.push_back(v);
    best.offer(p, v);
    return v;
  };
  auto finish = [&] {
    r.x = best.x;
    r.value = best.value;
    if (r.x.empty()) {
      r.x.assign(x0.begin(), x0.end());
      r.value = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
  };
  if (options.max_evals == 0) return finish();

  Rng rng(options.seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);

  double rho = options.initial_step;
  std::vector<Vec> pts(n + 1, Vec(x0.begin(), x0.end()));
  Vec fv(n + 1, 0.0);
  fv[0] = eval(pts[0]);
  for (std::size_t i = 1; i <= n; ++i) {
    if (r.evaluations >= options.max_evals) return finish();
    pts[i][perm[i - 1]] += (rng.uniform() < 0.5 ? -rho : rho);
    fv[i] = eval(pts[i]);
  }
  if (n == 0) return finish();

  while (r.evaluations < options.max_evals) {
    const auto b = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j <= n; ++j) {
      if (j != b) others.push_back(j);
    }
    // Rows of d are the other vertices relative to the best one.
    std::vector<double> d(n * n);
    Vec rhs(n);
    for (std::size_t row = 0; row < n; ++row) {
      for (std::size_t k = 0; k < n; ++k) d[row * n + k] = pts[others[row]][k] - pts[b][k];
      rhs[row] = fv[others[row]] - fv[b];
    }
    // Columns of d^{-1}: c_j satisfies d_i . c_j = delta_ij.
    std::vector<Vec> inv_cols(n);
    bool singular = false;
    for (std::size_t j = 0; j < n && !singular; ++j) {
      Vec e(n, 0.0);
      e[j] = 1.0;
      singular = !solve(d, e, n, inv_cols[j]);
    }
    Vec g;
    if (!singular) singular = !solve(d, rhs, n, g);

    std::size_t far = 0;
    double far_dist = -1.0;
    for (std::size_t row = 0; row < n; ++row) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += d[row * n + k] * d[row * n + k];
      if (std::sqrt(s) > far_dist) {
        far_dist = std::sqrt(s);
        far = row;
      }
    }

    if (singular) {
      // Rebuild the simplex around the best point.
      const Vec base = pts[b];
      const double fb = fv[b];
      pts.assign(n + 1, base);
      fv.assign(n + 1, fb);
      for (std::size_t i = 1; i <= n && r.evaluations < options.max_evals; ++i) {
        pts[i][perm[i - 1]] += rho;
        fv[i] = eval(pts[i]);
      }
      continue;
    }

    if (far_dist > 2.0 * rho) {
      // Geometry step: move the farthest vertex to the point at distance rho
      // from the best one that maximizes the simplex volume.
      const Vec& c = inv_cols[far];
      const double cn = norm(c);
      const double sign = dot(g, c) > 0.0 ? -1.0 : 1.0;
      Vec p = pts[b];
      for (std::size_t k = 0; k < n; ++k) p[k] += sign * rho * c[k] / cn;
      const std::size_t j = others[far];
      pts[j] = p;
      fv[j] = eval(p);
      continue;
    }

    const double gn = norm(g);
    bool improved = false;
    if (gn > 0.0) {
      Vec trial = pts[b];
      for (std::size_t k = 0; k < n; ++k) trial[k] -= rho * g[k] / gn;
      const double ft = eval(trial);
      // Volume ratio when trial replaces each vertex.
      Vec step(n);
      for (std::size_t k = 0; k < n; ++k) step[k] = trial[k] - pts[b][k];
      double lambda_sum = 0.0;
      std::size_t replace = b;
      double replace_ratio = -1.0;
      for (std::size_t row = 0; row < n; ++row) {
        const double l = dot(step, inv_cols[row]);
        lambda_sum += l;
        if (std::abs(l) > replace_ratio) {
          replace_ratio = std::abs(l);
          replace = others[row];
        }
      }
      if (ft < fv[b]) {
        if (std::abs(1.0 - lambda_sum) > replace_ratio) replace = b;
        pts[replace] = trial;
        fv[replace] = ft;
        improved = true;
      } else {
        const auto worst = static_cast<std::size_t>(std::max_element(fv.begin(), fv.end()) - fv.begin());
        if (worst != b && ft < fv[worst]) {
          const auto it = std::find(others.begin(), others.end(), worst);
          const double l = dot(step, inv_cols[static_cast<std::size_t>(it - others.begin())]);
          if (std::abs(l) > 0.5) {
            pts[worst] = trial;
            fv[worst] = ft;
          }
        }
      }
    }
    if (!improved) {
      rho *= 0.5;
      if (rho < options.final_step) {
        r.converged = true;
        break;
      }
    }
  }
  return finish();
}

ShotSchedule::ShotSchedule(std::vector<std::pair<std::size_t, std::size_t>> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw Error("shot schedule is empty");
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (steps_[i].second == 0) throw Error("shot schedule entries need at least 1 shot");
    if (i > 0 && steps_[i].first <= steps_[i - 1].first) {
      throw Error("shot schedule thresholds must be strictly increasing");
    }
  }
}

ShotSchedule ShotSchedule::standard() { return ShotSchedule({{20, 250}, {50, 500}, {kForever, 750}}); }

std::size_t ShotSchedule::shots_at(std::size_t iteration) const {
  if (steps_.empty()) throw Error("shot schedule is empty");
  for (const auto& [threshold, shots] : steps_) {
    if (iteration < threshold) return shots;
  }
  return steps_.back().second;
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "quasi_newton") return OptimizerKind::quasi_newton;
  if (name == "derivative_free") return OptimizerKind::derivative_free;
  throw Error("unknown optimizer '" + std::string(name) + "' (expected quasi_newton or derivative_free)");
}

std::string_view optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::quasi_newton ? "quasi_newton" : "derivative_free";
}

TrainReport train(const ModelSpec& spec, const Dataset& train_set, const TrainOptions& options) {
  if (options.mode == EvalMode::sampled && options.optimizer == OptimizerKind::quasi_newton) {
    throw Error("sampled-mode training requires the derivative_free optimizer");
  }
  if (train_set.num_classes() > spec.class_map.size()) {
    throw Error("training set has more classes than the class map");
  }
  BatchEvaluator batch(spec, train_set.features, train_set.labels);

  TrainReport report;
  report.seed = options.seed;
  Rng rng(options.seed);
  report.initial_theta.resize(batch.num_params());
  for (double& t : report.initial_theta) t = std::numbers::pi - 2.0 * std::numbers::pi * rng.uniform();

  std::size_t calls = 0;
  Objective f;
  if (options.mode == EvalMode::exact) {
    f = [&](std::span<const double> theta) {
      ++calls;
      return batch.loss(theta, {});
    };
  } else {
    f = [&](std::span<const double> theta) {
      const std::size_t shots = options.schedule.shots_at(calls);
      const Readout readout{EvalMode::sampled, shots, mix_seed(options.seed, calls + 1)};
      ++calls;
      report.shots_trace.push_back(shots);
      report.total_shots += shots * batch.size();
      return batch.loss(theta, readout);
    };
  }

  MinimizeResult m;
  if (options.optimizer == OptimizerKind::quasi_newton) {
    m = minimize_quasi_newton(f, report.initial_theta, {options.tolerance, options.max_iters, options.fd_step});
  } else if (options.max_iters == 0) {
    const double v = f(report.initial_theta);
    m.x = report.initial_theta;
    m.value = v;
    m.trace = {v};
    m.evaluations = 1;
  } else {
    m = minimize_derivative_free(
        f, report.initial_theta,
        {options.initial_step, options.final_step, options.max_iters, mix_seed(options.seed, 0)});
  }

  report.loss_trace = std::move(m.trace);
  if (options.mode == EvalMode::exact) report.shots_trace.assign(report.loss_trace.size(), 0);
  report.best_theta = std::move(m.x);
  report.best_loss = m.value;
  report.best_iteration = static_cast<std::size_t>(
      std::min_element(report.loss_trace.begin(), report.loss_trace.end()) - report.loss_trace.begin());
  report.iterations = m.iterations;
  report.evaluations = calls;
  report.converged = m.converged;
  report.line_search_failed = m.line_search_failed;
  return report;
}

std::size_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

double ConfusionMatrix::accuracy() const {
  const std::size_t t = total();
  if (t == 0) return 0.0;
  std::size_t diag = 0;
  for (std::size_t k = 0; k < classes; ++k) diag += at(k, k);
  return static_cast<double>(diag) / static_cast<double>(t);
}

EvalResult evaluate(const ModelSpec& spec, const Dataset& test_set, const Readout& readout) {
  if (test_set.size() == 0) throw Error("test set is empty");
  if (spec.theta.size() != spec.circuit.num_params()) throw Error("model has no trained parameters");
  BatchEvaluator batch(spec, test_set.features, test_set.labels);
  EvalResult out;
  out.confusion = ConfusionMatrix(spec.class_map.size());
  out.predictions.reserve(test_set.size());
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    const std::size_t y = predict(batch.probs(i, spec.theta, readout));
    out.predictions.push_back(y);
    ++out.confusion.at(test_set.labels[i], y);
  }
  out.accuracy = out.confusion.accuracy();
  return out;
}

}  // namespace polyq
