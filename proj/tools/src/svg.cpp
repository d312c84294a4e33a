// Copyright 2026 The mmdbayes Authors
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

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mmdbayes::cli {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

std::string sweep_svg(const SweepResult& result) {
  const double x_lo = *std::min_element(result.epsilons.begin(), result.epsilons.end());
  double x_hi = *std::max_element(result.epsilons.begin(), result.epsilons.end());
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  double y_hi = 0.0;
  for (const auto& c : result.cells)
    if (std::isfinite(c.rmse)) y_hi = std::max(y_hi, c.rmse);
  if (y_hi <= 0.0) y_hi = 1.0;
  y_hi *= 1.05;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return kTop + ph - y / y_hi * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"18\" text-anchor=\"middle\">" << to_string(result.problem)
    << ", n = " << result.n << ", d = " << result.dim << ", " << result.repetitions << " repetitions</text>\n";

  // axes and ticks
  s << "<line x1=\"" << kLeft << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
    << num(kTop + ph) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << num(kTop + ph)
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 4.0;
    const double yv = y_hi * i / 4.0;
    s << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(px(xv)) << "\" y2=\""
      << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
      << tick_label(xv) << "</text>\n";
    s << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << kLeft << "\" y2=\""
      << num(py(yv)) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
      << tick_label(yv) << "</text>\n";
  }
  s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12) << "\" text-anchor=\"middle\">epsilon</text>\n";
  s << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << num(kTop + ph / 2) << ")\">RMSE</text>\n";

  const std::size_t n_est = result.estimators.size();
  for (std::size_t k = 0; k < n_est; ++k) {
    const char* color = kColors[k % std::size(kColors)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t e = 0; e < result.epsilons.size(); ++e) {
      const auto& c = result.cells[e * n_est + k];
      if (e > 0) s << ' ';
      s << num(px(c.epsilon)) << ',' << num(py(std::isfinite(c.rmse) ? c.rmse : 0.0));
    }
    s << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
    s << "<line x1=\"" << num(kLeft + pw + 15) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kLeft + pw + 40)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << num(kLeft + pw + 46) << "\" y=\"" << num(ly + 4) << "\">" << to_string(result.estimators[k])
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace mmdbayes::cli
