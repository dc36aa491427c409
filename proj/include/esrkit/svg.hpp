/* Copyright 2026 The Esrkit Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef ESRKIT_SVG_HPP
#define ESRKIT_SVG_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "esrkit/json_util.hpp"

namespace esrkit {

/// Minimal line-plot writer, convenience output only.
inline void write_svg_line_plot(const std::string& path, const std::vector<double>& x,
                                const std::vector<double>& y, const std::string& title,
                                const std::string& x_label, const std::string& y_label) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("svg: bad data");
  const int width = 820, height = 520;
  const int ml = 70, mr = 20, mt = 40, mb = 50;
  double x0 = *std::min_element(x.begin(), x.end());
  double x1 = *std::max_element(x.begin(), x.end());
  double y0 = *std::min_element(y.begin(), y.end());
  double y1 = *std::max_element(y.begin(), y.end());
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * (width - ml - mr); };
  const auto py = [&](double v) { return height - mb - (v - y0) / (y1 - y0) * (height - mt - mb); };

  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  char buf[128];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", x0);
  out << "<text x=\"" << ml << "\" y=\"" << height - mb + 18
      << "\" text-anchor=\"middle\" font-size=\"11\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", x1);
  out << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 18
      << "\" text-anchor=\"middle\" font-size=\"11\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", y0);
  out << "<text x=\"" << ml - 6 << "\" y=\"" << height - mb
      << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", y1);
  out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
      << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">" << y_label << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"#0a62a8\" stroke-width=\"1.4\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(x[i]), py(y[i]));
    out << buf;
  }
  out << "\"/>\n</svg>\n";
  if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace esrkit

#endif  // ESRKIT_SVG_HPP
