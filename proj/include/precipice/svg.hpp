// Copyright 2026 The Precipice Authors
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

#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "precipice/errors.hpp"
#include "precipice/profiles.hpp"
#include "precipice/report.hpp"

// Deterministic SVG rendering: fixed canvas, fixed layout grid, no font
// metrics. The plotted series are embedded verbatim in data-* attributes
// (same formatter as the CSV sidecars), so artifacts can be diffed and
// cross-checked byte for byte.

namespace precipice::svg {

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {
      "#0077bb", "#ee7733", "#009988", "#cc3311", "#33bbee",
      "#ee3377", "#bbbbbb", "#555555", "#997700", "#6699cc",
  };
  return colors;
}

inline std::string escape_xml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

namespace detail {

// Pixel coordinates rounded to 1/100 px; keeps files small and stable.
inline std::string px(double v) {
  return format_double(std::round(v * 100.0) / 100.0);
}

// Axis tick labels only; the exact series lives in the data-* attributes.
inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

inline std::string join_values(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_double(values[i]);
  }
  return out;
}

struct Frame {
  double width = 960, height = 600;
  double left = 70, right = 230, top = 40, bottom = 60;
  double x_min = 0, x_max = 1;

  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
  double x(double v) const {
    return left + (v - x_min) / (x_max - x_min) * plot_w();
  }
  double y(double v) const { return top + (1.0 - v) * plot_h(); }
};

inline void open_svg(std::string& out, double w, double h) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(w) +
         "\" height=\"" + px(h) + "\" viewBox=\"0 0 " + px(w) + " " + px(h) +
         "\">\n";
  out += "<rect width=\"" + px(w) + "\" height=\"" + px(h) +
         "\" fill=\"#ffffff\"/>\n";
}

inline void text_at(std::string& out, double x, double y,
                    const std::string& body, const std::string& anchor,
                    int size = 13) {
  out += "<text x=\"" + px(x) + "\" y=\"" + px(y) +
         "\" font-family=\"monospace\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\">" + escape_xml(body) + "</text>\n";
}

}  // namespace detail

struct LabeledProfile {
  std::string label;
  ProfileCurve curve;
};

struct ProfileSvgOptions {
  std::string title = "Score distribution";
  std::string x_label = "Normalized score (tau)";
  std::string y_label = "Fraction of runs with score > tau";
  /// Optional per-grid-point x coordinates in [0, 1] (rescaled axis).
  std::vector<double> axis_coords;
};

/// Step plot of one or more profiles with optional shaded bands. All
/// curves must share a grid when a rescaled axis is used.
inline std::string render_profile_svg(const std::vector<LabeledProfile>& profiles,
                                      const ProfileSvgOptions& options = {}) {
  if (profiles.empty()) throw ValidationError("render_profile_svg: no curves");
  detail::Frame frame;
  const bool rescaled = !options.axis_coords.empty();
  if (rescaled) {
    frame.x_min = 0.0;
    frame.x_max = 1.0;
  } else {
    frame.x_min = profiles.front().curve.taus.front();
    frame.x_max = profiles.front().curve.taus.back();
    for (const auto& p : profiles) {
      frame.x_min = std::min(frame.x_min, p.curve.taus.front());
      frame.x_max = std::max(frame.x_max, p.curve.taus.back());
    }
    if (frame.x_max <= frame.x_min) frame.x_max = frame.x_min + 1.0;
  }

  const auto x_of = [&](const ProfileCurve& c, std::size_t i) {
    if (rescaled) {
      if (options.axis_coords.size() != c.taus.size()) {
        throw ValidationError("axis_coords size does not match the grid");
      }
      return frame.x(options.axis_coords[i]);
    }
    return frame.x(c.taus[i]);
  };

  std::string out;
  detail::open_svg(out, frame.width, frame.height);
  detail::text_at(out, frame.left, frame.top - 16, options.title, "start", 15);

  // plot frame and y grid lines
  for (int i = 0; i <= 4; ++i) {
    const double v = 0.25 * i;
    const double y = frame.y(v);
    out += "<line x1=\"" + detail::px(frame.left) + "\" y1=\"" + detail::px(y) +
           "\" x2=\"" + detail::px(frame.left + frame.plot_w()) + "\" y2=\"" +
           detail::px(y) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    detail::text_at(out, frame.left - 8, y + 4, format_double(v), "end", 12);
  }
  // x ticks: grid ends plus interior quarters
  for (int i = 0; i <= 4; ++i) {
    const double frac = 0.25 * i;
    const double xv = frame.x_min + frac * (frame.x_max - frame.x_min);
    const double x = frame.x(xv);
    out += "<line x1=\"" + detail::px(x) + "\" y1=\"" +
           detail::px(frame.top + frame.plot_h()) + "\" x2=\"" + detail::px(x) +
           "\" y2=\"" + detail::px(frame.top + frame.plot_h() + 6) +
           "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    std::string label;
    if (rescaled) {
      // nearest grid point by axis coordinate, labeled with its tau
      const auto& c = profiles.front().curve;
      std::size_t best = 0;
      for (std::size_t g = 1; g < c.taus.size(); ++g) {
        if (std::fabs(options.axis_coords[g] - frac) <
            std::fabs(options.axis_coords[best] - frac)) {
          best = g;
        }
      }
      label = detail::tick_label(c.taus[best]);
    } else {
      label = detail::tick_label(xv);
    }
    detail::text_at(out, x, frame.top + frame.plot_h() + 22, label, "middle", 12);
  }
  out += "<rect x=\"" + detail::px(frame.left) + "\" y=\"" + detail::px(frame.top) +
         "\" width=\"" + detail::px(frame.plot_w()) + "\" height=\"" +
         detail::px(frame.plot_h()) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  detail::text_at(out, frame.left + frame.plot_w() / 2,
                  frame.height - 18, options.x_label, "middle", 13);
  detail::text_at(out, frame.left, frame.top - 2, options.y_label, "start", 12);

  for (std::size_t p = 0; p < profiles.size(); ++p) {
    const auto& curve = profiles[p].curve;
    const std::string& color = palette()[p % palette().size()];
    std::string attrs = " data-algorithm=\"" + escape_xml(profiles[p].label) +
                        "\" data-taus=\"" + detail::join_values(curve.taus) +
                        "\" data-values=\"" + detail::join_values(curve.values) +
                        "\"";
    if (curve.has_bands()) {
      attrs += " data-lower=\"" + detail::join_values(*curve.lower) +
               "\" data-upper=\"" + detail::join_values(*curve.upper) + "\"";
    }
    out += "<g" + attrs + ">\n";

    if (curve.has_bands()) {
      std::string pts;
      for (std::size_t i = 0; i < curve.taus.size(); ++i) {
        pts += detail::px(x_of(curve, i)) + "," +
               detail::px(frame.y((*curve.upper)[i])) + " ";
        if (i + 1 < curve.taus.size()) {
          pts += detail::px(x_of(curve, i + 1)) + "," +
                 detail::px(frame.y((*curve.upper)[i])) + " ";
        }
      }
      for (std::size_t r = curve.taus.size(); r-- > 0;) {
        if (r + 1 < curve.taus.size()) {
          pts += detail::px(x_of(curve, r + 1)) + "," +
                 detail::px(frame.y((*curve.lower)[r])) + " ";
        }
        pts += detail::px(x_of(curve, r)) + "," +
               detail::px(frame.y((*curve.lower)[r]));
        if (r > 0) pts += " ";
      }
      out += "<polygon points=\"" + pts + "\" fill=\"" + color +
             "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
    }

    std::string path = "M " + detail::px(x_of(curve, 0)) + " " +
                       detail::px(frame.y(curve.values[0]));
    for (std::size_t i = 0; i + 1 < curve.taus.size(); ++i) {
      path += " H " + detail::px(x_of(curve, i + 1));
      path += " V " + detail::px(frame.y(curve.values[i + 1]));
    }
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "</g>\n";

    const double ly = frame.top + 16 + 20 * static_cast<double>(p);
    const double lx = frame.left + frame.plot_w() + 16;
    out += "<rect x=\"" + detail::px(lx) + "\" y=\"" + detail::px(ly - 10) +
           "\" width=\"14\" height=\"14\" fill=\"" + color + "\"/>\n";
    detail::text_at(out, lx + 20, ly + 2, profiles[p].label, "start", 12);
  }
  out += "</svg>\n";
  return out;
}

/// Stacked-bar chart of the task-averaged rank probabilities: column r
/// shows how the probability of attaining rank r+1 splits across
/// algorithms.
inline std::string render_ranks_svg(const RankDistribution& ranks) {
  const std::size_t algs = ranks.algorithms.size();
  if (algs == 0) throw ValidationError("render_ranks_svg: empty distribution");
  detail::Frame frame;
  frame.width = 760;
  frame.height = 480;
  frame.right = 230;

  std::string out;
  detail::open_svg(out, frame.width, frame.height);
  detail::text_at(out, frame.left, frame.top - 16,
                  "Rank distribution (bootstrap, task mean)", "start", 15);
  for (int i = 0; i <= 4; ++i) {
    const double v = 0.25 * i;
    detail::text_at(out, frame.left - 8, frame.y(v) + 4, format_double(v),
                    "end", 12);
  }
  out += "<rect x=\"" + detail::px(frame.left) + "\" y=\"" + detail::px(frame.top) +
         "\" width=\"" + detail::px(frame.plot_w()) + "\" height=\"" +
         detail::px(frame.plot_h()) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

  const double slot = frame.plot_w() / static_cast<double>(algs);
  const double bar_w = slot * 0.6;
  for (std::size_t r = 0; r < algs; ++r) {
    const double x0 = frame.left + slot * (static_cast<double>(r) + 0.2);
    double stacked = 0.0;
    for (std::size_t a = 0; a < algs; ++a) {
      const double p = ranks.mean_matrix[a][r];
      if (p <= 0.0) continue;
      const double y_top = frame.y(stacked + p);
      const double h = frame.y(stacked) - y_top;
      out += "<rect x=\"" + detail::px(x0) + "\" y=\"" + detail::px(y_top) +
             "\" width=\"" + detail::px(bar_w) + "\" height=\"" + detail::px(h) +
             "\" fill=\"" + palette()[a % palette().size()] +
             "\" data-algorithm=\"" + escape_xml(ranks.algorithms[a]) +
             "\" data-rank=\"" + std::to_string(r + 1) + "\" data-prob=\"" +
             format_double(p) + "\"/>\n";
      stacked += p;
    }
    detail::text_at(out, x0 + bar_w / 2, frame.top + frame.plot_h() + 22,
                    "rank " + std::to_string(r + 1), "middle", 12);
  }
  for (std::size_t a = 0; a < algs; ++a) {
    const double ly = frame.top + 16 + 20 * static_cast<double>(a);
    const double lx = frame.left + frame.plot_w() + 16;
    out += "<rect x=\"" + detail::px(lx) + "\" y=\"" + detail::px(ly - 10) +
           "\" width=\"14\" height=\"14\" fill=\"" +
           palette()[a % palette().size()] + "\"/>\n";
    detail::text_at(out, lx + 20, ly + 2, ranks.algorithms[a], "start", 12);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace precipice::svg
