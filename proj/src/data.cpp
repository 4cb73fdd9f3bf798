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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "polyq/encoding.hpp"
#include "polyq/error.hpp"
#include "polyq/random.hpp"

namespace polyq {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

std::vector<std::vector<std::size_t>> rows_by_class(const Dataset& ds) {
  std::vector<std::vector<std::size_t>> by(ds.num_classes());
  for (std::size_t i = 0; i < ds.size(); ++i) by[ds.labels[i]].push_back(i);
  return by;
}

std::string format(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> c(num_classes(), 0);
  for (std::size_t y : labels) ++c.at(y);
  return c;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out{{}, {}, class_names, feature_names, metadata};
  out.features.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    out.features.push_back(features.at(r));
    out.labels.push_back(labels.at(r));
  }
  return out;
}

Dataset Dataset::reorder_classes(std::span<const std::string> order) const {
  std::vector<std::size_t> remap(num_classes(), order.size());
  for (std::size_t k = 0; k < num_classes(); ++k) {
    const auto it = std::find(order.begin(), order.end(), class_names[k]);
    if (it == order.end()) throw Error("class '" + class_names[k] + "' is missing from the class map");
    remap[k] = static_cast<std::size_t>(it - order.begin());
  }
  Dataset out = *this;
  out.class_names.assign(order.begin(), order.end());
  for (std::size_t& y : out.labels) y = remap[y];
  return out;
}

void Dataset::validate() const {
  if (features.size() != labels.size()) throw Error("dataset: feature and label counts differ");
  for (std::size_t i = 0; i < size(); ++i) {
    if (labels[i] >= num_classes()) throw Error("dataset: label out of range at row " + std::to_string(i));
    if (features[i].size() != dim()) throw Error("dataset: ragged feature row " + std::to_string(i));
  }
}

Dataset parse_csv(const std::string& text, std::span<const std::string> feature_columns,
                  const std::string& label_column) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) header = split_row(line);
  }
  if (header.empty()) throw Error("CSV is empty");

  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error("CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t label_col = column(label_column);
  std::vector<std::size_t> cols;
  Dataset ds;
  if (feature_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != label_col) cols.push_back(c);
    }
  } else {
    for (const std::string& f : feature_columns) cols.push_back(column(f));
  }
  for (std::size_t c : cols) ds.feature_names.push_back(header[c]);

  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw Error("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                  " fields, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cols.size());
    for (std::size_t c : cols) {
      const std::string& cell = cells[c];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw Error("CSV line " + std::to_string(line_no) + ": column '" + header[c] +
                    "' is not a number: '" + cell + "'");
      }
      row.push_back(v);
    }
    const std::string& label = cells[label_col];
    if (label.empty()) throw Error("CSV line " + std::to_string(line_no) + ": empty label");
    auto [it, inserted] = index.try_emplace(label, ds.class_names.size());
    if (inserted) ds.class_names.push_back(label);
    ds.features.push_back(std::move(row));
    ds.labels.push_back(it->second);
  }
  if (ds.size() == 0) throw Error("CSV has a header but no rows");
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, std::span<const std::string> feature_columns,
                 const std::string& label_column) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_csv(ss.str(), feature_columns, label_column);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string to_csv(const Dataset& ds) {
  std::ostringstream os;
  for (const std::string& f : ds.feature_names) os << f << ',';
  os << "label\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.features[i]) os << format(v) << ',';
    os << ds.class_names[ds.labels[i]] << '\n';
  }
  return os.str();
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error("test fraction must lie in (0, 1)");
  Rng rng(seed);
  std::vector<std::size_t> train_rows, test_rows;
  auto by_class = rows_by_class(ds);
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    auto& rows = by_class[k];
    shuffle(rows, rng);
    const auto n_test = static_cast<std::size_t>(std::lround(static_cast<double>(rows.size()) * test_fraction));
    if (n_test == 0 || n_test == rows.size()) {
      throw Error("class '" + ds.class_names[k] + "' cannot be split at fraction " + format(test_fraction));
    }
    test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    train_rows.insert(train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
  }
  return {ds.subset(train_rows), ds.subset(test_rows)};
}

Dataset subsample_balanced(const Dataset& ds, std::size_t n, std::uint64_t seed) {
  const std::size_t k = ds.num_classes();
  if (k == 0 || n % k != 0) throw Error("subsample size must be a multiple of the class count");
  const std::size_t per = n / k;
  Rng rng(seed);
  std::vector<std::size_t> keep;
  auto by_class = rows_by_class(ds);
  for (std::size_t c = 0; c < k; ++c) {
    auto& rows = by_class[c];
    if (rows.size() < per) {
      throw Error("class '" + ds.class_names[c] + "' has " + std::to_string(rows.size()) +
                  " rows, fewer than " + std::to_string(per));
    }
    shuffle(rows, rng);
    keep.insert(keep.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(per));
  }
  return ds.subset(keep);
}

Dataset gen_gaussian_xor(std::size_t per_center, double sigma, double a, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error("sigma must be non-negative");
  Rng rng(seed);
  const double centers[4][2] = {{a, 0.0}, {-a, 0.0}, {0.0, a}, {0.0, -a}};
  Dataset ds;
  ds.class_names = {"0", "1"};
  ds.feature_names = {"x1", "x2"};
  for (int c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < per_center; ++i) {
      const double x = rng.normal(centers[c][0], sigma);
      const double y = rng.normal(centers[c][1], sigma);
      ds.features.push_back({x, y});
      ds.labels.push_back(c < 2 ? 0 : 1);
    }
  }
  nlohmann::ordered_json meta;
  meta["generator"] = "gaussian_xor";
  meta["per_center"] = per_center;
  meta["sigma"] = sigma;
  meta["scale"] = a;
  meta["seed"] = seed;
  meta["bayes_accuracy"] = sigma > 0.0 ? xor_bayes_accuracy(sigma, a) : 1.0;
  ds.metadata = meta.dump();
  return ds;
}

std::size_t bayes_xor(std::span<const double> x) {
  if (x.size() != 2) throw Error("bayes_xor expects a 2-dimensional point");
  return std::abs(x[0]) >= std::abs(x[1]) ? 0 : 1;
}

double xor_bayes_accuracy(double sigma, double a) {
  const double p = normal_cdf(a / (std::numbers::sqrt2 * sigma));
  return p * p + (1.0 - p) * (1.0 - p);
}

double xor_sigma_for_bayes_accuracy(double accuracy, double a) {
  if (!(accuracy > 0.5 && accuracy < 1.0)) throw Error("Bayes accuracy must lie in (1/2, 1)");
  // p^2 + (1-p)^2 = acc  =>  p = (1 + sqrt(2 acc - 1)) / 2.
  const double p = 0.5 * (1.0 + std::sqrt(2.0 * accuracy - 1.0));
  return a / (std::numbers::sqrt2 * normal_quantile(p));
}

Dataset gen_synthetic4(std::size_t n, std::uint64_t seed) {
  if (n < 4) throw Error("synthetic dataset needs at least 4 samples");
  Rng rng(seed);
  constexpr double kMinSeparation = 1.2;
  double mean[4][2];
  for (int k = 0; k < 4; ++k) {
    bool ok = false;
    while (!ok) {
      mean[k][0] = rng.uniform(-2.0, 2.0);
      mean[k][1] = rng.uniform(-2.0, 2.0);
      ok = true;
      for (int j = 0; j < k; ++j) {
        if (std::hypot(mean[k][0] - mean[j][0], mean[k][1] - mean[j][1]) < kMinSeparation) ok = false;
      }
    }
  }
  double sd[4][2], angle[4];
  for (int k = 0; k < 4; ++k) {
    sd[k][0] = rng.uniform(0.2, 0.6);
    sd[k][1] = rng.uniform(0.2, 0.6);
    angle[k] = rng.uniform(0.0, std::numbers::pi);
  }

  Dataset ds;
  ds.class_names = {"0", "1", "2", "3"};
  ds.feature_names = {"x1", "x2"};
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t count = n / 4 + (k < n % 4 ? 1 : 0);
    const double c = std::cos(angle[k]), s = std::sin(angle[k]);
    for (std::size_t i = 0; i < count; ++i) {
      const double u = rng.normal() * sd[k][0], v = rng.normal() * sd[k][1];
      ds.features.push_back({mean[k][0] + c * u - s * v, mean[k][1] + s * u + c * v});
      ds.labels.push_back(k);
    }
  }
  const auto flips = static_cast<std::size_t>(std::lround(0.01 * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  shuffle(order, rng);
  for (std::size_t i = 0; i < flips; ++i) {
    std::size_t& y = ds.labels[order[i]];
    y = (y + 1 + rng.index(3)) % 4;
  }

  nlohmann::ordered_json meta;
  meta["generator"] = "synthetic4";
  meta["n"] = n;
  meta["seed"] = seed;
  meta["label_flips"] = flips;
  for (int k = 0; k < 4; ++k) {
    meta["clusters"].push_back({{"mean", {mean[k][0], mean[k][1]}},
                                {"std", {sd[k][0], sd[k][1]}},
                                {"angle", angle[k]}});
  }
  ds.metadata = meta.dump();
  return ds;
}

}  // namespace polyq
