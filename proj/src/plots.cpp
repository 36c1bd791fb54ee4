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

#include "missshap/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "missshap/error.hpp"
#include "missshap/rng.hpp"

namespace missshap::plots {

namespace {

constexpr double kLeft = 170.0;
constexpr double kPlotWidth = 420.0;
constexpr double kRowHeight = 26.0;
constexpr double kTop = 40.0;
constexpr const char* kMissingColor = "#999999";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& os, double width, double height, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
     << "\" fill=\"#ffffff\"/>\n";
  os << "<text class=\"title\" x=\"" << num(width / 2) << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"14\">"
     << escape(title) << "</text>\n";
}

// Blue (low) to red (high), as in common SHAP summary plots.
std::string gradient(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(0x1E + t * (0xFF - 0x1E)));
  const int g = static_cast<int>(std::lround(0x88 + t * (0x0D - 0x88)));
  const int b = static_cast<int>(std::lround(0xE5 + t * (0x57 - 0xE5)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", r, g, b);
  return buf;
}

const char* kPalette[] = {"#333333", "#1E88E5", "#FF0D57", "#43A047", "#FB8C00", "#8E24AA", "#00ACC1"};

}  // namespace

std::string label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  while (s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  if (s == "-0.0") s = "0.0";
  return s;
}

std::string importance_bar_svg(const shapley::GlobalImportance& importance,
                               const std::vector<std::string>& feature_names,
                               const std::string& title) {
  const std::size_t q = importance.order.size();
  require(feature_names.size() == q, "importance_bar_svg: name count mismatch");
  const double vmax = q ? importance.values.maxCoeff() : 0.0;
  const double height = kTop + kRowHeight * static_cast<double>(q) + 20.0;
  const double width = kLeft + kPlotWidth + 80.0;
  std::ostringstream os;
  open_svg(os, width, height, title);
  for (std::size_t r = 0; r < q; ++r) {
    const std::size_t j = importance.order[r];
    const double v = importance.values[static_cast<Eigen::Index>(j)];
    const double w = vmax > 0 ? v / vmax * kPlotWidth : 0.0;
    const double y = kTop + kRowHeight * static_cast<double>(r);
    os << "<text class=\"feature\" x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 16)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
       << escape(feature_names[j]) << "</text>\n";
    os << "<rect class=\"bar\" data-feature=\"" << escape(feature_names[j]) << "\" x=\""
       << num(kLeft) << "\" y=\"" << num(y + 4) << "\" width=\"" << num(w)
       << "\" height=\"18.00\" fill=\"#1E88E5\"/>\n";
    os << "<text class=\"value\" x=\"" << num(kLeft + w + 6) << "\" y=\"" << num(y + 17)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << label(v) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string beeswarm_svg(const shapley::ShapleyMatrix& phi, std::size_t class_index,
                         const std::string& title, std::uint64_t jitter_seed) {
  const auto records = shapley::beeswarm_export(phi, class_index);
  const std::size_t q = phi.players();
  double vmax = 0.0;
  for (const auto& r : records) vmax = std::max(vmax, std::abs(r.shap_value));
  const double zero_x = kLeft + kPlotWidth / 2;
  const double height = kTop + kRowHeight * static_cast<double>(q) + 30.0;
  const double width = kLeft + kPlotWidth + 40.0;
  std::vector<std::size_t> rank_of(q, 0);
  for (const auto& r : records) rank_of[r.feature] = r.rank;

  std::ostringstream os;
  open_svg(os, width, height, title);
  os << "<line class=\"zero\" x1=\"" << num(zero_x) << "\" y1=\"" << num(kTop) << "\" x2=\""
     << num(zero_x) << "\" y2=\"" << num(kTop + kRowHeight * static_cast<double>(q))
     << "\" stroke=\"#bbbbbb\"/>\n";
  for (std::size_t j = 0; j < q; ++j) {
    const double y = kTop + kRowHeight * static_cast<double>(rank_of[j]);
    os << "<text class=\"feature\" x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 16)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
       << escape(phi.feature_names[j]) << "</text>\n";
  }
  const Stream jitter(jitter_seed);
  for (const auto& r : records) {
    const double x = vmax > 0 ? zero_x + r.shap_value / vmax * (kPlotWidth / 2) : zero_x;
    Stream s = jitter.split(r.sample_id).split(r.feature);
    const double y = kTop + kRowHeight * static_cast<double>(r.rank) + 13.0 + (s.uniform() - 0.5) * 14.0;
    os << "<circle class=\"dot\" cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"2.50\" fill=\""
       << (r.was_missing ? kMissingColor : gradient(r.color)) << '"';
    if (r.was_missing) os << " data-missing=\"1\"";
    os << " data-feature=\"" << escape(phi.feature_names[r.feature]) << "\" data-shap=\""
       << format_double(r.shap_value) << "\"/>\n";
  }
  os << "<text class=\"axis\" x=\"" << num(zero_x) << "\" y=\"" << num(height - 8)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">Shapley value (max |phi| "
     << label(vmax) << ")</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string comparison_svg(const std::vector<Series>& series,
                           const std::vector<std::string>& feature_names,
                           const std::string& title) {
  require(!series.empty(), "comparison_svg: no series");
  const std::size_t q = feature_names.size();
  double vmax = 0.0;
  for (const auto& s : series) {
    require(static_cast<std::size_t>(s.importance.values.size()) == q,
            "comparison_svg: series size mismatch");
    if (q) vmax = std::max(vmax, s.importance.values.maxCoeff());
  }
  const double bar_h = 8.0;
  const double group_h = bar_h * static_cast<double>(series.size()) + 10.0;
  const double legend_h = 16.0 * static_cast<double>(series.size()) + 10.0;
  const double height = kTop + group_h * static_cast<double>(q) + legend_h;
  const double width = kLeft + kPlotWidth + 80.0;
  std::ostringstream os;
  open_svg(os, width, height, title);
  const auto& order = series.front().importance.order;
  for (std::size_t r = 0; r < q; ++r) {
    const std::size_t j = order[r];
    const double y0 = kTop + group_h * static_cast<double>(r);
    os << "<text class=\"feature\" x=\"" << num(kLeft - 8) << "\" y=\"" << num(y0 + group_h / 2)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
       << escape(feature_names[j]) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
      const double v = series[k].importance.values[static_cast<Eigen::Index>(j)];
      const double w = vmax > 0 ? v / vmax * kPlotWidth : 0.0;
      os << "<rect class=\"bar\" data-series=\"" << escape(series[k].label) << "\" data-feature=\""
         << escape(feature_names[j]) << "\" x=\"" << num(kLeft) << "\" y=\""
         << num(y0 + bar_h * static_cast<double>(k)) << "\" width=\"" << num(w) << "\" height=\""
         << num(bar_h - 1) << "\" fill=\"" << kPalette[k % std::size(kPalette)] << "\"/>\n";
    }
  }
  const double ly = kTop + group_h * static_cast<double>(q) + 8.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double y = ly + 16.0 * static_cast<double>(k);
    os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(y) << "\" width=\"10.00\" height=\"10.00\" fill=\""
       << kPalette[k % std::size(kPalette)] << "\"/>\n";
    os << "<text class=\"legend\" x=\"" << num(kLeft + 16) << "\" y=\"" << num(y + 9)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(series[k].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace missshap::plots
