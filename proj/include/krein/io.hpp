#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "krein/anderson.hpp"
#include "krein/measure.hpp"
#include "krein/region_set.hpp"
#include "krein/spectral_shift.hpp"

namespace krein::io {

using json = nlohmann::ordered_json;

/// {atoms: [[pos, mass], ...], ac: [{a, b, grid, values}, ...], sc_tag?}
json to_json(const Measure& mu);
Measure measure_from_json(const json& j);

/// {grid, values, c}
json to_json(const ShiftFunction& u);
ShiftFunction shift_from_json(const json& j);

/// {dim, L, boundary, distribution: {kind, params}, master_seed, sites, edits?}
json to_json(const AndersonModel& model);
AndersonModel model_from_json(const json& j);

/// [[lo, hi], ...]
json to_json(const RegionSet& region);
RegionSet region_from_json(const json& j);

json to_json(const DeterministicReport& report);
json to_json(const PairwiseReport& report);
json to_json(const ShiftClassification& c);

/// Shortest round-trip decimal form; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

std::string shift_csv(const ShiftFunction& u);
/// index,eigenvalue,weight
std::string spectra_csv(std::span<const SampleSpectrum> spectra);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Comma-separated numeric table with one header line.
Table parse_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

/// Write to a sibling temp file, then rename over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace krein::io
