#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "krein/region_set.hpp"

namespace krein::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotStyle {
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Fixed y-axis; data range with 5% padding otherwise.
  std::optional<std::pair<double, double>> y_range;
};

struct Histogram {
  /// bins + 1 increasing edges.
  std::vector<double> edges;
  /// Weight per bin divided by bin width.
  std::vector<double> density;
};

/// Weighted histogram on [min, max] of the values.
Histogram histogram(std::span<const double> values, std::span<const double> weights, std::size_t bins);

/// Polylines on a fixed 720x440 canvas. Output depends only on the inputs.
std::string line_plot(std::span<const Series> series, const PlotStyle& style);
std::string bar_plot(const Histogram& h, const PlotStyle& style);

struct Band {
  std::string name;
  RegionSet region;
};

/// One horizontal row of interval bars per band, on a shared x-axis.
std::string region_overlay(std::span<const Band> bands, const PlotStyle& style);

}  // namespace krein::svg
