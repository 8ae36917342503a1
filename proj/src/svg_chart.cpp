#include "pacmarl/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace pacmarl::svg {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 130.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
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

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double t(double v) const { return log ? std::log10(v) : v; }

  void fit(const std::vector<double>& values) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (double v : values) {
      if (!usable(v)) continue;
      mn = std::min(mn, t(v));
      mx = std::max(mx, t(v));
    }
    if (!std::isfinite(mn)) {
      mn = 0.0;
      mx = 1.0;
    }
    if (mx - mn < 1e-12) {
      mn -= 0.5;
      mx += 0.5;
    }
    const double pad = 0.05 * (mx - mn);
    lo = mn - pad;
    hi = mx + pad;
  }

  double frac(double v) const { return (t(v) - lo) / (hi - lo); }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::ceil(lo); e <= hi; e += 1.0) out.push_back(std::pow(10.0, e));
      if (out.size() < 2) {
        for (int i = 0; i <= 4; ++i) out.push_back(std::pow(10.0, lo + (hi - lo) * i / 4.0));
      }
    } else {
      for (int i = 0; i <= 5; ++i) out.push_back(lo + (hi - lo) * i / 5.0);
    }
    return out;
  }
};

}  // namespace

std::string render(const LineChart& chart) {
  Axis ax{chart.log_x};
  Axis ay{chart.log_y};
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& s : chart.series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
    ys.insert(ys.end(), s.band_low.begin(), s.band_low.end());
    ys.insert(ys.end(), s.band_high.begin(), s.band_high.end());
  }
  ax.fit(xs);
  ay.fit(ys);

  const double plot_w = chart.width - kLeft - kRight;
  const double plot_h = chart.height - kTop - kBottom;
  auto px = [&](double v) { return kLeft + ax.frac(v) * plot_w; };
  auto py = [&](double v) { return kTop + (1.0 - std::clamp(ay.frac(v), 0.0, 1.0)) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\""
      << chart.height << "\" viewBox=\"0 0 " << chart.width << ' ' << chart.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(chart.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(chart.title) << "</text>\n";

  // Axes and ticks.
  out << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n";
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\"/>\n";
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">\n";
  for (double v : ax.ticks()) {
    const double x = px(v);
    if (x < kLeft - 0.5 || x > kLeft + plot_w + 0.5) continue;
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
  }
  for (double v : ay.ticks()) {
    const double frac = ay.frac(v);
    if (frac < -1e-9 || frac > 1 + 1e-9) continue;
    const double y = kTop + (1.0 - frac) * plot_h;
    out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(y) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(chart.height - 12.0)
      << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 16 " << num(kTop + plot_h / 2) << ")\">" << escape(chart.y_label)
      << "</text>\n</g>\n";

  for (const auto& s : chart.series) {
    // Band: upper edge left to right, lower edge right to left.
    if (!s.band_low.empty() && s.band_low.size() == s.x.size() && s.band_high.size() == s.x.size()) {
      std::string points;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!ax.usable(s.x[i]) || !ay.usable(s.band_high[i])) continue;
        points += num(px(s.x[i])) + "," + num(py(s.band_high[i])) + " ";
      }
      for (std::size_t k = s.x.size(); k-- > 0;) {
        if (!ax.usable(s.x[k])) continue;
        // A lower edge at or below zero on a log axis is pinned to the bottom.
        const double low = ay.usable(s.band_low[k]) ? py(s.band_low[k]) : kTop + plot_h;
        if (!ay.usable(s.band_high[k])) continue;
        points += num(px(s.x[k])) + "," + num(low) + " ";
      }
      if (!points.empty()) {
        out << "<polygon points=\"" << points << "\" fill=\"" << s.color
            << "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
      }
    }
    std::string points;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
      points += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
      out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
          << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
    out << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
  }

  // Legend.
  double ly = kTop + 10;
  for (const auto& s : chart.series) {
    const double lx = kLeft + plot_w + 15;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 22)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.name) << "</text>\n";
    ly += 20;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pacmarl::svg
