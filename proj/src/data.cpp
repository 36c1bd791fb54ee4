// Copyright 2026 The missshap Authors. All Rights Reserved.
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

#include "missshap/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "missshap/error.hpp"
#include "missshap/rng.hpp"

namespace missshap {

std::string to_string(Task task) {
  return task == Task::kRegression ? "regression" : "classification";
}

Task parse_task(const std::string& s) {
  if (s == "regression") return Task::kRegression;
  if (s == "classification") return Task::kClassification;
  fail(ErrorKind::kInvalidArgument, "unknown task '" + s + "'");
}

DataMatrix::DataMatrix(Matrix values, Vector target, std::vector<std::string> feature_names,
                       Task task)
    : values_(std::move(values)),
      target_(std::move(target)),
      feature_names_(std::move(feature_names)),
      task_(task) {
  require(target_.size() == values_.rows(), "DataMatrix: target length != rows");
  require(feature_names_.size() == static_cast<std::size_t>(values_.cols()),
          "DataMatrix: feature_names length != cols");
  std::set<std::string> unique(feature_names_.begin(), feature_names_.end());
  require(unique.size() == feature_names_.size(), "DataMatrix: duplicate feature names");
  require(values_.allFinite(), "DataMatrix: non-finite value");
  require(target_.allFinite(), "DataMatrix: non-finite target");
  if (task_ == Task::kClassification) {
    double max_code = -1;
    for (Eigen::Index i = 0; i < target_.size(); ++i) {
      const double t = target_[i];
      require(t >= 0 && t == std::floor(t),
              "DataMatrix: class codes must be non-negative integers");
      max_code = std::max(max_code, t);
    }
    num_classes_ = static_cast<int>(max_code) + 1;
  }
}

DataMatrix DataMatrix::select_rows(const std::vector<std::size_t>& rows) const {
  Matrix v(static_cast<Eigen::Index>(rows.size()), values_.cols());
  Vector t(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r] < this->rows(), "select_rows: index out of range");
    v.row(static_cast<Eigen::Index>(r)) = values_.row(static_cast<Eigen::Index>(rows[r]));
    t[static_cast<Eigen::Index>(r)] = target_[static_cast<Eigen::Index>(rows[r])];
  }
  DataMatrix out(std::move(v), std::move(t), feature_names_, task_);
  // Class count is a property of the dataset, not of the subset.
  out.num_classes_ = std::max(out.num_classes_, num_classes_);
  return out;
}

DataMatrix DataMatrix::with_values(Matrix values) const {
  DataMatrix out(std::move(values), target_, feature_names_, task_);
  out.num_classes_ = num_classes_;
  return out;
}

DataMatrix DataMatrix::with_target(Vector target) const {
  DataMatrix out(values_, std::move(target), feature_names_, task_);
  out.num_classes_ = std::max(out.num_classes_, num_classes_);
  return out;
}

MaskedMatrix::MaskedMatrix(DataMatrix base, Mask mask)
    : base_(std::move(base)), mask_(std::move(mask)) {
  require(static_cast<std::size_t>(mask_.rows()) == base_.rows() &&
              static_cast<std::size_t>(mask_.cols()) == base_.cols(),
          "MaskedMatrix: mask shape mismatch");
  missing_ = static_cast<std::size_t>((!mask_.array()).count());
}

MaskedMatrix::MaskedMatrix(DataMatrix base)
    : MaskedMatrix(base, Mask::Constant(static_cast<Eigen::Index>(base.rows()),
                                        static_cast<Eigen::Index>(base.cols()), true)) {}

std::optional<double> MaskedMatrix::value(std::size_t row, std::size_t col) const {
  require(row < rows() && col < cols(), "MaskedMatrix::value: index out of range");
  if (!mask_(row, col)) return std::nullopt;
  return base_.values()(row, col);
}

Matrix MaskedMatrix::observed_values() const {
  Matrix out = base_.values();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      if (!mask_(i, j)) out(i, j) = nan;
  return out;
}

double MaskedMatrix::rate() const {
  const double cells = static_cast<double>(rows() * cols());
  return cells == 0 ? 0.0 : static_cast<double>(missing_) / cells;
}

std::vector<std::size_t> MaskedMatrix::fully_missing_rows() const {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < mask_.rows(); ++i)
    if (cols() > 0 && !mask_.row(i).any()) out.push_back(static_cast<std::size_t>(i));
  return out;
}

Matrix Standardizer::apply(const Matrix& x) const {
  require(x.cols() == mean.size(), "Standardizer::apply: column mismatch");
  return ((x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array())
      .matrix();
}

Matrix Standardizer::inverse(const Matrix& x) const {
  require(x.cols() == mean.size(), "Standardizer::inverse: column mismatch");
  return ((x.array().rowwise() * scale.transpose().array()).matrix().rowwise() +
          mean.transpose());
}

Standardizer fit_standardizer(const Matrix& train) {
  require(train.rows() > 0, "fit_standardizer: empty input");
  Standardizer s;
  const double n = static_cast<double>(train.rows());
  s.mean = train.colwise().sum().transpose() / n;
  s.scale.resize(train.cols());
  s.zero_variance.assign(static_cast<std::size_t>(train.cols()), false);
  for (Eigen::Index j = 0; j < train.cols(); ++j) {
    const double var = (train.col(j).array() - s.mean[j]).square().sum() / n;
    const double sd = std::sqrt(var);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(s.mean[j])))) {
      // Zero variance: leave the column unchanged.
      s.mean[j] = 0.0;
      s.scale[j] = 1.0;
      s.zero_variance[static_cast<std::size_t>(j)] = true;
    } else {
      s.scale[j] = sd;
    }
  }
  return s;
}

Standardizer fit_standardizer(const DataMatrix& train) {
  return fit_standardizer(train.values());
}

DataMatrix apply_standardizer(const Standardizer& s, const DataMatrix& data) {
  return data.with_values(s.apply(data.values()));
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  require(spec.test_fraction > 0 && spec.test_fraction < 1,
          "split: test_fraction must lie in (0, 1)");
  const auto m = static_cast<std::size_t>(std::llround(spec.test_fraction * static_cast<double>(n)));
  if (m == 0 || m >= n)
    fail(ErrorKind::kInvalidArgument,
         "split: degenerate partition (n=" + std::to_string(n) + ", test=" + std::to_string(m) + ")");
  Stream rng = Stream(spec.seed).split("split");
  auto test = rng.sample_without_replacement(n, m);
  std::sort(test.begin(), test.end());
  SplitIndices out;
  out.test = test;
  out.train.reserve(n - m);
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t < test.size() && test[t] == i) {
      ++t;
    } else {
      out.train.push_back(i);
    }
  }
  return out;
}

std::pair<DataMatrix, DataMatrix> split(const DataMatrix& data, const SplitSpec& spec) {
  const auto idx = split_indices(data.rows(), spec);
  return {data.select_rows(idx.train), data.select_rows(idx.test)};
}

std::size_t mcar_missing_count(std::size_t n, std::size_t p, double rate) {
  require(rate >= 0 && rate < 1, "apply_mcar: rate must lie in [0, 1)");
  // The epsilon absorbs representation error in decimal rates such as 0.29.
  return static_cast<std::size_t>(std::floor(rate * static_cast<double>(n * p) + 1e-9));
}

MaskedMatrix apply_mcar(const DataMatrix& data, double rate, std::uint64_t seed) {
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();
  const std::size_t k = mcar_missing_count(n, p, rate);
  Mask mask = Mask::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p), true);
  Stream rng = Stream(seed).split("mcar");
  // Cells are numbered row-major: cell = row * p + col.
  for (std::size_t cell : rng.sample_without_replacement(n * p, k))
    mask(static_cast<Eigen::Index>(cell / p), static_cast<Eigen::Index>(cell % p)) = false;
  return MaskedMatrix(data, std::move(mask));
}

std::vector<std::vector<std::size_t>> observed_rows(const MaskedMatrix& masked) {
  std::vector<std::vector<std::size_t>> out(masked.cols());
  for (std::size_t j = 0; j < masked.cols(); ++j)
    for (std::size_t i = 0; i < masked.rows(); ++i)
      if (masked.is_observed(i, j)) out[j].push_back(i);
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return v;
}

}  // namespace

DataMatrix parse_csv(const std::string& text, const std::string& target_column, Task task) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kParse, "csv: missing header row");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
  std::vector<std::string> header = split_line(trim(line));
  for (auto& h : header) h = trim(h);
  const auto target_it = std::find(header.begin(), header.end(), target_column);
  if (target_it == header.end())
    fail(ErrorKind::kParse, "csv: target column '" + target_column + "' not in header");
  const auto target_idx = static_cast<std::size_t>(target_it - header.begin());

  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != target_idx) names.push_back(header[c]);

  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    ++row_no;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      fail(ErrorKind::kParse, "csv: row " + std::to_string(row_no) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(header.size()));
    std::vector<double> row;
    row.reserve(names.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_number(trim(cells[c]));
      if (!v || !std::isfinite(*v))
        fail(ErrorKind::kParse, "csv: row " + std::to_string(row_no) + ", column '" +
                                    header[c] + "': cannot parse '" + trim(cells[c]) +
                                    "' as a finite number");
      if (c == target_idx) {
        targets.push_back(*v);
      } else {
        row.push_back(*v);
      }
    }
    rows.push_back(std::move(row));
  }
  Matrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < names.size(); ++j)
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  Vector target = Eigen::Map<Vector>(targets.data(), static_cast<Eigen::Index>(targets.size()));
  return DataMatrix(std::move(values), std::move(target), std::move(names), task);
}

DataMatrix load_csv(const std::string& path, const std::string& target_column, Task task) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kIo, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  try {
    return parse_csv(buf.str(), target_column, task);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& feature_names, const std::optional<Vector>& target,
               const std::string& target_name) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kIo, "cannot write '" + path + "'");
  for (std::size_t j = 0; j < feature_names.size(); ++j) f << (j ? "," : "") << feature_names[j];
  if (target) f << "," << target_name;
  f << "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      f << (j ? "," : "") << format_double(values(i, j));
    if (target) f << "," << format_double((*target)[i]);
    f << "\n";
  }
}

std::string mask_to_csv(const Mask& mask) {
  std::string out;
  for (Eigen::Index i = 0; i < mask.rows(); ++i) {
    for (Eigen::Index j = 0; j < mask.cols(); ++j) {
      if (j) out += ',';
      out += mask(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

Mask mask_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<bool>> rows;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<bool> row;
    for (const auto& c : split_line(line)) {
      const auto t = trim(c);
      if (t != "0" && t != "1") fail(ErrorKind::kParse, "mask csv: expected 0/1, got '" + t + "'");
      row.push_back(t == "1");
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(ErrorKind::kParse, "mask csv: ragged rows");
    rows.push_back(std::move(row));
  }
  const auto p = rows.empty() ? 0 : rows.front().size();
  Mask mask(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < p; ++j)
      mask(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return mask;
}

}  // namespace missshap
