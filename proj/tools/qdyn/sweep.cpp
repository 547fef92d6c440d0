// Copyright 2026 The qdyn Authors
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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "cli.hpp"
#include "qdyn/dynamical.hpp"
#include "qdyn/error.hpp"

namespace qdyn::cli {
namespace {

/// Fixed-precision decimal; magnitudes below the last digit print as 0.
std::string fixed(double v, int digits = 12) {
  if (std::abs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<SweepRow> sweep(const std::vector<ChannelFamily>& families, int p_steps) {
  if (p_steps < 2) throw ValidationError("sweep needs at least 2 p steps");
  if (families.empty()) throw ValidationError("sweep needs at least one family");
  std::vector<SweepRow> rows;
  for (int k = 0; k < p_steps; ++k) {
    const double p = static_cast<double>(k) / static_cast<double>(p_steps - 1);
    for (ChannelFamily f : families) {
      const double s = channel_min_entropy(qubit_family_member(f, p));
      rows.push_back({to_string(f), p, s, -s});
    }
  }
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "family,p,s_min,neg_s_min\n";
  for (const SweepRow& r : rows) {
    out += r.channel_family + "," + fixed(r.p) + "," + fixed(r.s_min) + "," + fixed(r.neg_s_min) +
           "\n";
  }
  return out;
}

std::string to_svg(const std::vector<SweepRow>& rows) {
  const double width = 640.0;
  const double height = 400.0;
  const double left = 60.0;
  const double right = 150.0;
  const double top = 20.0;
  const double bottom = 50.0;
  double y_min = -1.0;
  double y_max = 1.0;
  for (const SweepRow& r : rows) {
    y_min = std::min(y_min, r.neg_s_min);
    y_max = std::max(y_max, r.neg_s_min);
  }
  const auto sx = [&](double p) { return left + p * (width - left - right); };
  const auto sy = [&](double v) {
    return top + (y_max - v) / (y_max - y_min) * (height - top - bottom);
  };

  // Families in order of first appearance.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const SweepRow*>> series;
  for (const SweepRow& r : rows) {
    if (series.find(r.channel_family) == series.end()) order.push_back(r.channel_family);
    series[r.channel_family].push_back(&r);
  }
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) + "\" height=\"" +
       fixed(height, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string x0 = fixed(sx(0.0), 2);
  const std::string x1 = fixed(sx(1.0), 2);
  const std::string yb = fixed(height - bottom, 2);
  s += "<line x1=\"" + x0 + "\" y1=\"" + yb + "\" x2=\"" + x1 + "\" y2=\"" + yb +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + x0 + "\" y1=\"" + fixed(top, 2) + "\" x2=\"" + x0 + "\" y2=\"" + yb +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + x0 + "\" y1=\"" + fixed(sy(0.0), 2) + "\" x2=\"" + x1 + "\" y2=\"" +
       fixed(sy(0.0), 2) + "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double p = 0.25 * k;
    s += "<text x=\"" + fixed(sx(p), 2) + "\" y=\"" + fixed(height - bottom + 16.0, 2) +
         "\" text-anchor=\"middle\">" + fixed(p, 2) + "</text>\n";
  }
  for (double v : {y_min, 0.0, y_max}) {
    s += "<text x=\"" + fixed(left - 6.0, 2) + "\" y=\"" + fixed(sy(v) + 4.0, 2) +
         "\" text-anchor=\"end\">" + fixed(v, 2) + "</text>\n";
  }
  s += "<text x=\"" + fixed(0.5 * (sx(0.0) + sx(1.0)), 2) + "\" y=\"" + fixed(height - 12.0, 2) +
       "\" text-anchor=\"middle\">p</text>\n";
  s += "<text x=\"16\" y=\"" + fixed(0.5 * height, 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fixed(0.5 * height, 2) + ")\">-S_min (bits)</text>\n";

  for (std::size_t i = 0; i < order.size(); ++i) {
    const char* color = colors[i % (sizeof(colors) / sizeof(colors[0]))];
    std::string points;
    for (const SweepRow* r : series[order[i]]) {
      if (!points.empty()) points += ' ';
      points += fixed(sx(r->p), 2) + "," + fixed(sy(r->neg_s_min), 2);
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    const double ly = top + 20.0 * static_cast<double>(i + 1);
    s += "<line x1=\"" + fixed(width - right + 15.0, 2) + "\" y1=\"" + fixed(ly, 2) + "\" x2=\"" +
         fixed(width - right + 40.0, 2) + "\" y2=\"" + fixed(ly, 2) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fixed(width - right + 46.0, 2) + "\" y=\"" + fixed(ly + 4.0, 2) + "\">" +
         order[i] + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace qdyn::cli
