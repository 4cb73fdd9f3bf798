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

#include "polyq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyq/error.hpp"
#include "polyq/experiment.hpp"
#include "polyq/passes.hpp"
#include "polyq/simulator.hpp"
#include "polyq/translate.hpp"

namespace polyq {

namespace {

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw Error(std::string("--") + what + ": '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto v = parse_list(text, what);
  if (v.size() != 2 || !(v[0] < v[1])) throw Error(std::string("--") + what + " expects 'lo,hi' with lo < hi");
  return {v[0], v[1]};
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  std::size_t nx = 0, ny = 0;
  try {
    if (x == std::string::npos) throw Error("");
    std::size_t a = 0, b = 0;
    nx = std::stoul(text.substr(0, x), &a);
    ny = std::stoul(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1) throw Error("");
  } catch (const std::exception&) {
    throw Error("--grid expects NxM, got '" + text + "'");
  }
  if (nx == 0 || ny == 0) throw Error("--grid dimensions must be positive");
  return {nx, ny};
}

/// Writes `content` to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

std::filesystem::path output_dir(const std::string& flag, const ExperimentConfig& config) {
  if (!flag.empty()) return flag;
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv("POLYQ_OUTPUT_DIR"); env && *env) return std::filesystem::path(env) / config.name;
  return std::filesystem::path("out") / config.name;
}

std::string percent(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << 100.0 * x << '%';
  return os.str();
}

BoundCircuit bind_from_flags(const Circuit& c, const std::string& inputs, const std::string& params) {
  const auto w = parse_list(inputs, "inputs");
  const auto t = parse_list(params, "params");
  return bind_circuit(c, w, t);
}

}  // namespace

std::vector<BoundaryPoint> decision_boundary(const ModelSpec& model, std::size_t nx, std::size_t ny,
                                             std::optional<std::pair<double, double>> x_range,
                                             std::optional<std::pair<double, double>> y_range) {
  model.validate();
  if (model.circuit.num_inputs() != 2) {
    throw Error("boundary grids need a 2-feature model; this model takes " +
                std::to_string(model.circuit.num_inputs()) + " inputs");
  }
  if (nx == 0 || ny == 0) throw Error("grid dimensions must be positive");
  auto default_range = [&](std::size_t k) -> std::pair<double, double> {
    if (model.encoder.mode == EncoderMode::identity) return {-std::numbers::pi, std::numbers::pi};
    const double half = model.encoder.q * model.stats.std[k];
    return {model.stats.mean[k] - half, model.stats.mean[k] + half};
  };
  const auto [x_lo, x_hi] = x_range.value_or(default_range(0));
  const auto [y_lo, y_hi] = y_range.value_or(default_range(1));

  std::vector<std::vector<double>> points;
  points.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const double y = y_lo + (static_cast<double>(j) + 0.5) * (y_hi - y_lo) / static_cast<double>(ny);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = x_lo + (static_cast<double>(i) + 0.5) * (x_hi - x_lo) / static_cast<double>(nx);
      points.push_back({x, y});
    }
  }
  const std::vector<std::size_t> labels(points.size(), 0);
  BatchEvaluator ev(model, points, labels);
  std::vector<BoundaryPoint> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = {points[i][0], points[i][1], predict(ev.probs(i, model.theta, Readout{}))};
  }
  return out;
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polyadic variational quantum classifier toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every command");

  // train
  auto* train_cmd = app.add_subcommand("train", "Run a restart experiment from a JSON config");
  std::string config_path, out_dir_flag;
  std::size_t jobs = 1;
  bool quiet = false;
  train_cmd->add_option("--config,-c", config_path, "Experiment config (JSON)")->required();
  train_cmd->add_option("--jobs,-j", jobs, "Restarts run concurrently")->check(CLI::PositiveNumber);
  train_cmd->add_option("--output-dir", out_dir_flag, "Output directory (overrides config and POLYQ_OUTPUT_DIR)");
  train_cmd->add_flag("--quiet,-q", quiet, "Do not log per-restart results");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
  std::string model_path, eval_config, eval_data, mode = "exact";
  std::size_t shots = 300;
  std::uint64_t seed = 1;
  eval_cmd->add_option("--model,-m", model_path, "Model file")->required();
  auto* ec = eval_cmd->add_option("--config,-c", eval_config, "Use the test split of this experiment");
  auto* ed = eval_cmd->add_option("--data,-d", eval_data, "CSV file with a label column");
  ec->excludes(ed);
  eval_cmd->add_option("--mode", mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  eval_cmd->add_option("--shots", shots, "Shots per sample in sampled mode")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", seed, "Sampling seed");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Print a circuit's outcome distribution as CSV");
  std::string circuit_path, inputs, params;
  std::size_t sim_shots = 0;
  sim_cmd->add_option("--circuit", circuit_path, "Circuit text file")->required();
  sim_cmd->add_option("--inputs", inputs, "Comma-separated input angles");
  sim_cmd->add_option("--params", params, "Comma-separated parameter angles");
  sim_cmd->add_option("--shots", sim_shots, "Sample this many shots instead of exact probabilities");
  sim_cmd->add_option("--seed", seed, "Sampling seed");

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "Apply the rewrite passes to a circuit");
  std::string out_path, report_path;
  opt_cmd->add_option("--circuit", circuit_path, "Circuit text file")->required();
  opt_cmd->add_option("--output,-o", out_path, "Output circuit file (default stdout)");
  opt_cmd->add_option("--report", report_path, "Write the JSON report here");

  // translate
  auto* tr_cmd = app.add_subcommand("translate", "Translate a circuit to another two-qubit gate set");
  std::string target;
  bool no_optimize = false;
  tr_cmd->add_option("--circuit", circuit_path, "Circuit text file")->required();
  tr_cmd->add_option("--target", target, "cz, cnot or zz")->required()->check(CLI::IsMember({"cz", "cnot", "zz"}));
  tr_cmd->add_flag("--no-optimize", no_optimize, "Skip the rewrite passes before translating");
  tr_cmd->add_option("--inputs", inputs, "Input angles for a parametric circuit");
  tr_cmd->add_option("--params", params, "Parameter angles for a parametric circuit");
  tr_cmd->add_option("--output,-o", out_path, "Output circuit file (default stdout)");
  tr_cmd->add_option("--report", report_path, "Write the JSON report here");

  // gen-data
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a dataset as CSV");
  std::string kind;
  std::size_t per_center = 20, n = 5000;
  double sigma = 0.0, scale = 1.0, bayes = kXorBayesAccuracy;
  std::uint64_t gen_seed = 1;
  gen_cmd->add_option("--kind", kind, "xor or synthetic4")->required()->check(CLI::IsMember({"xor", "synthetic4"}));
  gen_cmd->add_option("--per-center", per_center, "xor: points per center");
  gen_cmd->add_option("--sigma", sigma, "xor: noise level (default: calibrated)");
  gen_cmd->add_option("--scale", scale, "xor: center distance from the origin");
  gen_cmd->add_option("--bayes-accuracy", bayes, "xor: target Bayes accuracy for sigma calibration");
  gen_cmd->add_option("--n", n, "synthetic4: number of points");
  auto* seed_opt = gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("--output,-o", out_path, "CSV path; metadata goes to <path>.meta.json")->required();

  // boundary
  auto* bd_cmd = app.add_subcommand("boundary", "Predicted class over a grid of a 2-feature model");
  std::string grid = "200x200", x_range, y_range;
  bd_cmd->add_option("--model,-m", model_path, "Model file")->required();
  bd_cmd->add_option("--grid", grid, "NxM cells");
  bd_cmd->add_option("--x-range", x_range, "lo,hi for feature 0");
  bd_cmd->add_option("--y-range", y_range, "lo,hi for feature 1");
  bd_cmd->add_option("--output,-o", out_path, "CSV path (default stdout)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*train_cmd) {
      const ExperimentConfig config = ExperimentConfig::load(config_path);
      const std::filesystem::path dir = output_dir(out_dir_flag, config);
      const PreparedData data = prepare_data(config);
      out << config.name << ": " << data.train.size() << " training / " << data.test.size() << " test samples, "
          << config.restarts << " restarts\n";
      const ExperimentResult result = run_experiment(config, data, jobs, quiet ? nullptr : &err);
      write_outputs(config, result, dir);
      const auto& best = result.restarts[result.best_restart];
      out << "best restart " << result.best_restart << " (training loss " << best.report.best_loss
          << "): test accuracy " << percent(result.mean_test_accuracy());
      if (result.test_accuracies.size() > 1) out << " (mean of " << result.test_accuracies.size() << " runs)";
      out << "\nmedian restart test accuracy " << percent(result.median_restart_accuracy()) << "\n\n"
          << "confusion matrix (rows actual, columns predicted)\n"
          << confusion_text(result.test.confusion, result.model.class_map.labels()) << "\noutputs written to "
          << dir.string() << '\n';
    } else if (*eval_cmd) {
      const ModelSpec model = ModelSpec::from_json(read_file(model_path));
      Dataset test;
      if (!eval_config.empty()) {
        test = prepare_data(ExperimentConfig::load(eval_config)).test;
      } else if (!eval_data.empty()) {
        test = load_csv(eval_data);
      } else {
        throw Error("eval needs --config or --data");
      }
      test = test.reorder_classes(model.class_map.labels());
      Readout readout{parse_eval_mode(mode), shots, seed};
      const EvalResult r = evaluate(model, test, readout);
      out << "accuracy " << percent(r.accuracy) << " on " << test.size() << " samples\n\n"
          << "confusion matrix (rows actual, columns predicted)\n"
          << confusion_text(r.confusion, model.class_map.labels());
    } else if (*sim_cmd) {
      const BoundCircuit bound = bind_from_flags(parse_circuit(read_file(circuit_path)), inputs, params);
      const Distribution dist = distribution(bound);
      std::ostringstream os;
      os.precision(17);
      os << "bitstring,probability\n";
      if (sim_shots == 0) {
        for (std::size_t b = 0; b < dist.probabilities.size(); ++b) {
          os << bitstring(b, dist.width) << ',' << dist.probabilities[b] << '\n';
        }
      } else {
        const ShotCounts counts = sample(dist, sim_shots, seed);
        for (std::size_t b = 0; b < counts.counts.size(); ++b) {
          os << bitstring(b, dist.width) << ','
             << static_cast<double>(counts.counts[b]) / static_cast<double>(sim_shots) << '\n';
        }
      }
      out << os.str();
    } else if (*opt_cmd) {
      const OptimizeResult r = optimize(parse_circuit(read_file(circuit_path)));
      const std::string report = r.report.to_json() + "\n";
      emit(out_path, to_text(r.circuit), out);
      if (!report_path.empty()) {
        emit(report_path, report, out);
      } else {
        (out_path.empty() || out_path == "-" ? err : out) << report;
      }
    } else if (*tr_cmd) {
      Circuit c = parse_circuit(read_file(circuit_path));
      const PulseCount original = pulse_count(c);
      if (!no_optimize) c = optimize(c).circuit;
      const BoundCircuit bound = bind_from_flags(c, inputs, params);
      const BoundCircuit translated = translate(bound, parse_target(target));
      const PulseCount p = pulse_count(translated);
      nlohmann::ordered_json j;
      j["target"] = target;
      j["optimized"] = !no_optimize;
      j["pulses_original"] = {{"one_qubit", original.one_qubit}, {"two_qubit", original.two_qubit}};
      j["pulses_translated"] = {{"one_qubit", p.one_qubit}, {"two_qubit", p.two_qubit}};
      j["gates"] = translated.gates.size();
      const std::string report = j.dump(2) + "\n";
      emit(out_path, to_text(translated), out);
      if (!report_path.empty()) {
        emit(report_path, report, out);
      } else {
        (out_path.empty() || out_path == "-" ? err : out) << report;
      }
    } else if (*gen_cmd) {
      const std::uint64_t s = seed_opt->count() || kind == "xor" ? gen_seed : kSynthetic4Seed;
      const Dataset ds = kind == "xor"
                             ? gen_gaussian_xor(per_center, sigma > 0.0 ? sigma : xor_sigma_for_bayes_accuracy(bayes, scale),
                                                scale, s)
                             : gen_synthetic4(n, s);
      nlohmann::ordered_json meta = nlohmann::ordered_json::parse(ds.metadata.empty() ? "{}" : ds.metadata);
      const std::string csv = to_csv(ds);
      const std::string sidecar = meta.dump(2) + "\n";
      write_file_atomic(out_path + ".meta.json", sidecar);
      write_file_atomic(out_path, csv);
      out << "wrote " << ds.size() << " rows to " << out_path << '\n';
    } else if (*bd_cmd) {
      const ModelSpec model = ModelSpec::from_json(read_file(model_path));
      const auto [nx, ny] = parse_grid(grid);
      std::optional<std::pair<double, double>> xr, yr;
      if (!x_range.empty()) xr = parse_range(x_range, "x-range");
      if (!y_range.empty()) yr = parse_range(y_range, "y-range");
      const auto points = decision_boundary(model, nx, ny, xr, yr);
      const auto labels = model.class_map.labels();
      std::ostringstream os;
      os.precision(17);
      os << "x0,x1,label\n";
      for (const auto& p : points) os << p.x0 << ',' << p.x1 << ',' << labels[p.label] << '\n';
      emit(out_path, os.str(), out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace polyq
