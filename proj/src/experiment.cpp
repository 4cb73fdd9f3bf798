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

#include "polyq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "polyq/error.hpp"
#include "polyq/random.hpp"

namespace polyq {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw Error("config: '" + where + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw Error("config: unknown key '" + key + "' in '" + where + "'");
  }
}

template <typename T>
T get(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

DataSource parse_source(const json& j, const std::filesystem::path& base, const std::string& where) {
  check_keys(j, {"source", "path", "features", "label_column", "per_center", "scale", "sigma", "bayes_accuracy",
                 "n", "seed", "subsample"},
             where);
  DataSource s;
  s.source = get<std::string>(j, "source", s.source);
  if (s.source != "csv" && s.source != "xor" && s.source != "synthetic4") {
    throw Error("config: unknown data source '" + s.source + "' (expected csv, xor or synthetic4)");
  }
  s.path = resolve(get<std::string>(j, "path", ""), base);
  s.features = get<std::vector<std::string>>(j, "features", {});
  s.label_column = get<std::string>(j, "label_column", s.label_column);
  s.per_center = get<std::size_t>(j, "per_center", s.per_center);
  s.scale = get<double>(j, "scale", s.scale);
  s.sigma = get<double>(j, "sigma", s.sigma);
  s.bayes_accuracy = get<double>(j, "bayes_accuracy", s.bayes_accuracy);
  s.n = get<std::size_t>(j, "n", s.n);
  s.seed = get<std::uint64_t>(j, "seed", s.seed);
  if (j.contains("subsample")) {
    const json& sub = j.at("subsample");
    check_keys(sub, {"n", "seed"}, where + ".subsample");
    s.subsample = sub.at("n").get<std::size_t>();
    s.subsample_seed = get<std::uint64_t>(sub, "seed", 1);
  }
  if (s.source == "csv" && s.path.empty()) throw Error("config: csv data source needs a 'path'");
  return s;
}

double restart_accuracy(const ModelSpec& base, const std::vector<double>& theta, const Dataset& ds) {
  ModelSpec m = base;
  m.theta = theta;
  return evaluate(m, ds).accuracy;
}

}  // namespace

Dataset DataSource::load() const {
  Dataset ds;
  if (source == "csv") {
    ds = load_csv(path, features, label_column);
  } else if (source == "xor") {
    const double s = sigma > 0.0 ? sigma : xor_sigma_for_bayes_accuracy(bayes_accuracy, scale);
    ds = gen_gaussian_xor(per_center, s, scale, seed);
  } else if (source == "synthetic4") {
    ds = gen_synthetic4(n, seed);
  } else {
    throw Error("unknown data source '" + source + "'");
  }
  if (subsample) ds = subsample_balanced(ds, *subsample, subsample_seed);
  return ds;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    check_keys(j, {"name", "data", "test_data", "split", "circuit", "class_map", "encoder", "training",
                   "evaluation", "output"},
               "top level");
    c.name = get<std::string>(j, "name", c.name);
    if (!j.contains("data")) throw Error("config: missing 'data'");
    c.data = parse_source(j.at("data"), base_dir, "data");
    if (j.contains("test_data")) c.test_data = parse_source(j.at("test_data"), base_dir, "test_data");
    if (j.contains("split")) {
      const json& s = j.at("split");
      check_keys(s, {"test_fraction", "seed"}, "split");
      c.test_fraction = get<double>(s, "test_fraction", c.test_fraction);
      c.split_seed = get<std::uint64_t>(s, "seed", c.split_seed);
    }
    if (!j.contains("circuit")) throw Error("config: missing 'circuit'");
    const json& circ = j.at("circuit");
    check_keys(circ, {"preset", "file"}, "circuit");
    c.preset = get<std::string>(circ, "preset", "");
    c.circuit_file = resolve(get<std::string>(circ, "file", ""), base_dir);
    if (c.preset.empty() == c.circuit_file.empty()) {
      throw Error("config: 'circuit' needs exactly one of 'preset' or 'file'");
    }
    if (!j.contains("class_map")) throw Error("config: missing 'class_map'");
    for (const auto& e : j.at("class_map")) {
      if (!e.is_array() || e.size() != 2) throw Error("config: class_map entries are [label, bitstring] pairs");
      c.class_map.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    if (j.contains("encoder")) {
      const json& e = j.at("encoder");
      check_keys(e, {"mode", "alpha", "q", "epsilon", "drop_outliers"}, "encoder");
      c.encoder.mode = parse_encoder_mode(get<std::string>(e, "mode", "standardize"));
      c.encoder.alpha = get<double>(e, "alpha", c.encoder.alpha);
      if (e.contains("q") && e.contains("epsilon")) throw Error("config: give either 'q' or 'epsilon', not both");
      c.encoder.q = get<double>(e, "q", c.encoder.q);
      if (e.contains("epsilon")) c.encoder_epsilon = e.at("epsilon").get<double>();
      c.drop_outliers = get<bool>(e, "drop_outliers", false);
    }
    if (j.contains("training")) {
      const json& t = j.at("training");
      check_keys(t, {"mode", "optimizer", "restarts", "max_iters", "seed", "tolerance", "fd_step", "initial_step",
                     "final_step", "schedule"},
                 "training");
      TrainOptions& o = c.training;
      o.mode = parse_eval_mode(get<std::string>(t, "mode", "exact"));
      o.optimizer = parse_optimizer(
          get<std::string>(t, "optimizer", o.mode == EvalMode::exact ? "quasi_newton" : "derivative_free"));
      c.restarts = get<std::size_t>(t, "restarts", c.restarts);
      o.max_iters = get<std::size_t>(t, "max_iters", o.max_iters);
      o.seed = get<std::uint64_t>(t, "seed", o.seed);
      o.tolerance = get<double>(t, "tolerance", o.tolerance);
      o.fd_step = get<double>(t, "fd_step", o.fd_step);
      o.initial_step = get<double>(t, "initial_step", o.initial_step);
      o.final_step = get<double>(t, "final_step", o.final_step);
      if (t.contains("schedule")) {
        std::vector<std::pair<std::size_t, std::size_t>> steps;
        for (const auto& s : t.at("schedule")) {
          if (!s.is_array() || s.size() != 2) throw Error("config: schedule entries are [threshold, shots] pairs");
          steps.emplace_back(s.at(0).is_null() ? ShotSchedule::kForever : s.at(0).get<std::size_t>(),
                             s.at(1).get<std::size_t>());
        }
        o.schedule = ShotSchedule(std::move(steps));
      }
    }
    if (j.contains("evaluation")) {
      const json& e = j.at("evaluation");
      check_keys(e, {"mode", "shots", "seed", "runs"}, "evaluation");
      c.evaluation.mode = parse_eval_mode(get<std::string>(e, "mode", "exact"));
      c.evaluation.shots = get<std::size_t>(e, "shots", 300);
      c.evaluation.seed = get<std::uint64_t>(e, "seed", 1);
      c.evaluation_runs = get<std::size_t>(e, "runs", 1);
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      check_keys(o, {"dir"}, "output");
      c.output_dir = resolve(get<std::string>(o, "dir", ""), base_dir);
    }
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  try {
    return from_json(read_file(path), path.parent_path());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

Circuit ExperimentConfig::circuit() const {
  if (!preset.empty()) return polyq::preset(preset);
  return parse_circuit(read_file(circuit_file));
}

void ExperimentConfig::validate() const {
  if (restarts == 0) throw Error("config: restarts must be at least 1");
  if (training.mode == EvalMode::sampled && training.optimizer == OptimizerKind::quasi_newton) {
    throw Error("config: sampled-mode training requires the derivative_free optimizer");
  }
  if (evaluation.mode == EvalMode::sampled && evaluation.shots == 0) throw Error("config: evaluation shots must be >= 1");
  if (evaluation_runs == 0) throw Error("config: evaluation runs must be at least 1");
  if (test_data && test_data->source != "xor" && test_data->source != "synthetic4") {
    throw Error("config: test_data must be a generator");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error("config: test_fraction must lie in (0, 1)");
  if (encoder_epsilon && !(*encoder_epsilon > 0.0 && *encoder_epsilon < 1.0)) {
    throw Error("config: encoder epsilon must lie in (0, 1)");
  }
  if (!encoder_epsilon) encoder.validate();
  const ClassMap map(class_map);
  const Circuit c = circuit();
  if (map.width() != c.width()) {
    throw Error("config: class map bitstrings have length " + std::to_string(map.width()) + " but the circuit has " +
                std::to_string(c.width()) + " qubits");
  }
  if (c.num_params() == 0) throw Error("config: the circuit has no trainable parameters");
}

PreparedData prepare_data(const ExperimentConfig& config) {
  std::vector<std::string> order;
  for (const auto& [label, bits] : config.class_map) order.push_back(label);
  const Dataset all = config.data.load().reorder_classes(order);
  PreparedData out;
  if (config.test_data) {
    out.train = all;
    out.test = config.test_data->load().reorder_classes(order);
  } else {
    std::tie(out.train, out.test) = stratified_split(all, config.test_fraction, config.split_seed);
  }
  const std::size_t inputs = config.circuit().num_inputs();
  if (out.train.dim() != inputs || out.test.dim() != inputs) {
    throw Error("config: the data has " + std::to_string(out.train.dim()) + " features but the circuit takes " +
                std::to_string(inputs) + " inputs");
  }
  return out;
}

ModelSpec untrained_model(const ExperimentConfig& config, const Dataset& train) {
  ModelSpec m;
  m.circuit = config.circuit();
  m.class_map = ClassMap(config.class_map);
  m.encoder = config.encoder;
  if (config.encoder_epsilon) m.encoder.q = quantile_from_epsilon(*config.encoder_epsilon, train.dim());
  if (m.encoder.mode == EncoderMode::standardize) m.stats = fit(train.features);
  m.validate();
  return m;
}

double ExperimentResult::mean_test_accuracy() const {
  if (test_accuracies.empty()) return 0.0;
  double s = 0.0;
  for (double a : test_accuracies) s += a;
  return s / static_cast<double>(test_accuracies.size());
}

double ExperimentResult::median_restart_accuracy() const {
  std::vector<double> v;
  for (const auto& r : restarts) v.push_back(r.test_accuracy);
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const PreparedData& data, std::size_t jobs,
                                std::ostream* log) {
  config.validate();
  const ModelSpec base = untrained_model(config, data.train);
  Dataset train_set = data.train;
  if (config.drop_outliers && base.encoder.mode == EncoderMode::standardize) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < train_set.size(); ++i) {
      bool inside = true;
      for (std::size_t k = 0; k < train_set.dim(); ++k) {
        const double z = (train_set.features[i][k] - base.stats.mean[k]) / base.stats.std[k];
        if (std::abs(z) > base.encoder.q) inside = false;
      }
      if (inside) keep.push_back(i);
    }
    train_set = train_set.subset(keep);
  }

  ExperimentResult result;
  result.train_size = train_set.size();
  result.test_size = data.test.size();
  result.restarts.resize(config.restarts);

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t r = next.fetch_add(1);
      if (r >= config.restarts) return;
      try {
        TrainOptions o = config.training;
        o.seed = mix_seed(config.training.seed, r);
        RestartOutcome out;
        out.report = train(base, train_set, o);
        out.train_accuracy = restart_accuracy(base, out.report.best_theta, train_set);
        out.test_accuracy = restart_accuracy(base, out.report.best_theta, data.test);
        if (log) {
          std::lock_guard lock(log_mutex);
          *log << "restart " << r << ": loss " << out.report.best_loss << ", train accuracy " << out.train_accuracy
               << ", test accuracy " << out.test_accuracy << '\n';
        }
        result.restarts[r] = std::move(out);
      } catch (...) {
        std::lock_guard lock(log_mutex);
        if (!failure) failure = std::current_exception();
        next = config.restarts;
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, config.restarts);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t r = 1; r < result.restarts.size(); ++r) {
    if (result.restarts[r].report.best_loss < result.restarts[result.best_restart].report.best_loss) {
      result.best_restart = r;
    }
  }
  result.model = base;
  result.model.theta = result.restarts[result.best_restart].report.best_theta;

  const std::size_t runs = config.evaluation.mode == EvalMode::exact ? 1 : config.evaluation_runs;
  for (std::size_t run = 0; run < runs; ++run) {
    Readout readout = config.evaluation;
    readout.seed = mix_seed(config.evaluation.seed, run);
    EvalResult ev = evaluate(result.model, data.test, readout);
    result.test_accuracies.push_back(ev.accuracy);
    if (run == 0) result.test = std::move(ev);
  }
  return result;
}

std::string loss_trace_csv(const TrainReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,loss,shots\n";
  for (std::size_t i = 0; i < report.loss_trace.size(); ++i) {
    os << i << ',' << report.loss_trace[i] << ',' << (i < report.shots_trace.size() ? report.shots_trace[i] : 0)
       << '\n';
  }
  return os.str();
}

std::string confusion_text(const ConfusionMatrix& m, const std::vector<std::string>& labels) {
  std::size_t w = 6;
  for (const auto& l : labels) w = std::max(w, l.size());
  for (std::size_t v : m.counts) w = std::max(w, std::to_string(v).size());
  std::ostringstream os;
  auto cell = [&](const std::string& s) { os << std::string(w + 2 - s.size(), ' ') << s; };
  cell("actual");
  for (const auto& l : labels) cell(l);
  os << '\n';
  for (std::size_t a = 0; a < m.classes; ++a) {
    cell(labels[a]);
    for (std::size_t p = 0; p < m.classes; ++p) cell(std::to_string(m.at(a, p)));
    os << '\n';
  }
  return os.str();
}

std::string report_json(const ExperimentConfig& config, const ExperimentResult& result) {
  ordered_json j;
  j["name"] = config.name;
  j["train_size"] = result.train_size;
  j["test_size"] = result.test_size;
  j["training"] = {{"mode", eval_mode_name(config.training.mode)},
                   {"optimizer", optimizer_name(config.training.optimizer)},
                   {"restarts", config.restarts},
                   {"seed", config.training.seed}};
  const TrainReport& best = result.restarts.at(result.best_restart).report;
  j["best_restart"] = {{"index", result.best_restart},
                       {"seed", best.seed},
                       {"loss", best.best_loss},
                       {"iterations", best.iterations},
                       {"evaluations", best.evaluations},
                       {"total_shots", best.total_shots},
                       {"converged", best.converged},
                       {"line_search_failed", best.line_search_failed},
                       {"train_accuracy", result.restarts[result.best_restart].train_accuracy}};
  j["evaluation"] = {{"mode", eval_mode_name(config.evaluation.mode)},
                     {"shots", config.evaluation.mode == EvalMode::exact ? 0 : config.evaluation.shots},
                     {"accuracies", result.test_accuracies},
                     {"mean_accuracy", result.mean_test_accuracy()}};
  j["confusion_matrix"] = {{"labels", result.model.class_map.labels()}, {"rows_actual", ordered_json::array()}};
  for (std::size_t a = 0; a < result.test.confusion.classes; ++a) {
    ordered_json row = ordered_json::array();
    for (std::size_t p = 0; p < result.test.confusion.classes; ++p) row.push_back(result.test.confusion.at(a, p));
    j["confusion_matrix"]["rows_actual"].push_back(row);
  }
  ordered_json rs = ordered_json::array();
  for (const auto& r : result.restarts) {
    rs.push_back({{"seed", r.report.seed},
                  {"loss", r.report.best_loss},
                  {"iterations", r.report.iterations},
                  {"train_accuracy", r.train_accuracy},
                  {"test_accuracy", r.test_accuracy}});
  }
  j["median_restart_test_accuracy"] = result.median_restart_accuracy();
  j["restarts"] = rs;
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      std::filesystem::remove(tmp);
      throw Error("failed writing '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result, const std::filesystem::path& dir) {
  // Render everything first so a failure leaves no partial output set.
  const std::string model = result.model.to_json() + "\n";
  const std::string trace = loss_trace_csv(result.restarts.at(result.best_restart).report);
  const std::string report = report_json(config, result);
  write_file_atomic(dir / "model.json", model);
  write_file_atomic(dir / "loss_trace.csv", trace);
  write_file_atomic(dir / "report.json", report);
}

}  // namespace polyq
