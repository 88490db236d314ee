#include "krein/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "krein/error.hpp"

namespace krein::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::pair<double, double> padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double h = std::max(1.0, std::abs(lo)) * 0.5;
    return {lo - h, hi + h};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string header(const PlotStyle& style, const Frame& f, bool y_ticks) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
       "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(style.title) +
       "</text>\n";
  const double bx = kLeft, by = kTop, bw = kWidth - kLeft - kRight, bh = kHeight - kTop - kBottom;
  s += "<rect x=\"" + fmt(bx) + "\" y=\"" + fmt(by) + "\" width=\"" + fmt(bw) + "\" height=\"" + fmt(bh) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double x = f.x0 + (f.x1 - f.x0) * k / 5.0;
    s += "<line x1=\"" + fmt(f.px(x)) + "\" y1=\"" + fmt(by + bh) + "\" x2=\"" + fmt(f.px(x)) + "\" y2=\"" +
         fmt(by + bh + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(f.px(x)) + "\" y=\"" + fmt(by + bh + 18) + "\" text-anchor=\"middle\">" + tick_label(x) +
         "</text>\n";
    if (!y_ticks) continue;
    const double y = f.y0 + (f.y1 - f.y0) * k / 5.0;
    s += "<line x1=\"" + fmt(bx - 5) + "\" y1=\"" + fmt(f.py(y)) + "\" x2=\"" + fmt(bx) + "\" y2=\"" + fmt(f.py(y)) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(bx - 8) + "\" y=\"" + fmt(f.py(y) + 4) + "\" text-anchor=\"end\">" + tick_label(y) +
         "</text>\n";
  }
  s += "<text x=\"" + fmt(bx + bw / 2) + "\" y=\"" + fmt(kHeight - 10) + "\" text-anchor=\"middle\">" +
       escape(style.x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt(by + bh / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fmt(by + bh / 2) + ")\">" + escape(style.y_label) + "</text>\n";
  return s;
}

std::string legend(const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kTop + 14 + 16.0 * static_cast<double>(i);
    const char* color = kPalette[i % std::size(kPalette)];
    s += "<rect x=\"" + fmt(kWidth - kRight - 150) + "\" y=\"" + fmt(y - 9) + "\" width=\"12\" height=\"10\" fill=\"" +
         color + "\"/>\n";
    s += "<text x=\"" + fmt(kWidth - kRight - 132) + "\" y=\"" + fmt(y) + "\">" + escape(names[i]) + "</text>\n";
  }
  return s;
}

}  // namespace

Histogram histogram(std::span<const double> values, std::span<const double> weights, std::size_t bins) {
  if (values.empty()) fail(ErrorKind::argument, "histogram of an empty series");
  if (weights.size() != values.size()) fail(ErrorKind::argument, "histogram needs one weight per value");
  if (bins == 0) fail(ErrorKind::argument, "histogram needs at least one bin");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn, hi = *mx;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  h.density.assign(bins, 0.0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto k = static_cast<std::size_t>(std::floor((values[i] - lo) / width));
    if (k >= bins) k = bins - 1;
    h.density[k] += weights[i];
  }
  for (double& d : h.density) d /= width;
  return h;
}

std::string line_plot(std::span<const Series> series, const PlotStyle& style) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::size_t points = 0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) fail(ErrorKind::argument, "series '" + s.name + "' has mismatched columns");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
      ++points;
    }
  }
  if (points == 0) fail(ErrorKind::argument, "nothing to plot: empty series");
  std::tie(x0, x1) = padded(x0, x1);
  if (style.y_range)
    std::tie(y0, y1) = *style.y_range;
  else
    std::tie(y0, y1) = padded(y0, y1);
  const Frame f{x0, x1, y0, y1};
  std::string out = header(style, f, true);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    names.push_back(s.name);
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt(f.px(s.x[i])) + "," + fmt(f.py(std::clamp(s.y[i], y0, y1)));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[k % std::size(kPalette)]) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }
  if (series.size() > 1) out += legend(names);
  out += "</svg>\n";
  return out;
}

std::string bar_plot(const Histogram& h, const PlotStyle& style) {
  if (h.density.empty() || h.edges.size() != h.density.size() + 1) fail(ErrorKind::argument, "nothing to plot: empty histogram");
  double top = *std::max_element(h.density.begin(), h.density.end());
  if (!(top > 0.0)) top = 1.0;
  const Frame f{h.edges.front(), h.edges.back(), 0.0, style.y_range ? style.y_range->second : 1.05 * top};
  std::string out = header(style, f, true);
  for (std::size_t k = 0; k < h.density.size(); ++k) {
    const double xa = f.px(h.edges[k]), xb = f.px(h.edges[k + 1]);
    const double ya = f.py(std::min(h.density[k], f.y1)), yb = f.py(0.0);
    out += "<rect x=\"" + fmt(xa) + "\" y=\"" + fmt(ya) + "\" width=\"" + fmt(xb - xa) + "\" height=\"" + fmt(yb - ya) +
           "\" fill=\"" + kPalette[0] + "\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string region_overlay(std::span<const Band> bands, const PlotStyle& style) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  for (const auto& b : bands)
    if (!b.region.empty()) {
      x0 = std::min(x0, b.region.lower());
      x1 = std::max(x1, b.region.upper());
    }
  if (bands.empty() || !(x1 >= x0)) fail(ErrorKind::argument, "nothing to plot: all regions empty");
  std::tie(x0, x1) = padded(x0, x1);
  const Frame f{x0, x1, 0.0, static_cast<double>(bands.size())};
  std::string out = header(style, f, false);
  for (std::size_t k = 0; k < bands.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    const double yc = f.py(static_cast<double>(bands.size() - k) - 0.5);
    out += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(yc + 4) + "\" text-anchor=\"end\">" + escape(bands[k].name) +
           "</text>\n";
    for (const auto& iv : bands[k].region.intervals()) {
      const double xa = f.px(iv.lo), xb = f.px(iv.hi);
      out += "<rect x=\"" + fmt(xa) + "\" y=\"" + fmt(yc - 10) + "\" width=\"" + fmt(std::max(xb - xa, 0.5)) +
             "\" height=\"20\" fill=\"" + color + "\" fill-opacity=\"0.7\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace krein::svg
