#include "krein/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "krein/error.hpp"

namespace krein::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { fail(ErrorKind::io, what); }

double number(const json& j, const char* what) {
  if (!j.is_number()) malformed(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::uint64_t unsigned_field(const json& j, const char* what) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    malformed(std::string(what) + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

json numbers_json(std::span<const double> xs) {
  json out = json::array();
  for (double x : xs) out.push_back(x);
  return out;
}

}  // namespace

json to_json(const Measure& mu) {
  json out;
  out["atoms"] = json::array();
  for (const auto& a : mu.atoms()) out["atoms"].push_back({a.position, a.mass});
  out["ac"] = json::array();
  for (const auto& piece : mu.ac_pieces())
    out["ac"].push_back({{"a", piece.front()},
                         {"b", piece.back()},
                         {"grid", numbers_json(piece.grid())},
                         {"values", numbers_json(piece.values())}});
  if (mu.sc_tag()) out["sc_tag"] = {{"generator", mu.sc_tag()->generator}, {"depth", mu.sc_tag()->depth}};
  return out;
}

Measure measure_from_json(const json& j) {
  if (!j.is_object()) malformed("measure must be a JSON object");
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array()) malformed("atoms must be an array");
    for (const auto& a : j["atoms"]) {
      if (!a.is_array() || a.size() != 2) malformed("each atom must be [position, mass]");
      atoms.push_back({number(a[0], "atom position"), number(a[1], "atom mass")});
    }
  }
  std::vector<GridFunction> ac;
  if (j.contains("ac")) {
    if (!j["ac"].is_array()) malformed("ac must be an array");
    for (const auto& piece : j["ac"]) {
      std::vector<double> grid = numbers(field(piece, "grid"), "grid");
      std::vector<double> values = numbers(field(piece, "values"), "values");
      if (grid.empty()) malformed("a.c. piece needs a nonempty grid");
      if (piece.contains("a") && number(piece["a"], "a") != grid.front()) malformed("a.c. piece: a differs from grid start");
      if (piece.contains("b") && number(piece["b"], "b") != grid.back()) malformed("a.c. piece: b differs from grid end");
      ac.emplace_back(std::move(grid), std::move(values));
    }
  }
  std::optional<ScTag> tag;
  if (j.contains("sc_tag") && !j["sc_tag"].is_null()) {
    const json& t = j["sc_tag"];
    if (!t.is_object() || !field(t, "generator").is_string() || !field(t, "depth").is_number_integer())
      malformed("sc_tag must be {generator: string, depth: integer}");
    tag = ScTag{t["generator"].get<std::string>(), t["depth"].get<int>()};
  }
  return build_measure(std::move(atoms), std::move(ac), std::move(tag));
}

json to_json(const ShiftFunction& u) {
  return {{"grid", numbers_json(u.u().grid())}, {"values", numbers_json(u.u().values())}, {"c", u.c()}};
}

ShiftFunction shift_from_json(const json& j) {
  std::vector<double> grid = numbers(field(j, "grid"), "grid");
  std::vector<double> values = numbers(field(j, "values"), "values");
  const double c = j.contains("c") ? number(j["c"], "c") : 0.0;
  return ShiftFunction(std::move(grid), std::move(values), c);
}

json to_json(const AndersonModel& model) {
  json out;
  out["dim"] = model.dim;
  out["L"] = model.L;
  out["boundary"] = to_string(model.boundary);
  json params = json::array();
  const auto& d = model.distribution;
  switch (d.kind) {
    case Distribution::Kind::uniform:
      params = {d.a, d.b};
      break;
    case Distribution::Kind::bernoulli:
      params = {d.a, d.b, d.p};
      break;
    case Distribution::Kind::constant:
      params = {d.a};
      break;
  }
  out["distribution"] = {{"kind", to_string(d.kind)}, {"params", params}};
  out["master_seed"] = model.master_seed;
  out["sites"] = model.sites;
  if (!model.edits.empty()) {
    out["edits"] = json::array();
    for (const auto& e : model.edits) out["edits"].push_back({e.site, e.value});
  }
  return out;
}

AndersonModel model_from_json(const json& j) {
  AndersonModel m;
  const json& dim = field(j, "dim");
  const json& L = field(j, "L");
  if (!dim.is_number_integer() || !L.is_number_integer()) malformed("dim and L must be integers");
  m.dim = dim.get<int>();
  m.L = L.get<int>();
  if (j.contains("boundary")) {
    const json& b = j["boundary"];
    if (b == "dirichlet")
      m.boundary = Boundary::dirichlet;
    else if (b == "periodic")
      m.boundary = Boundary::periodic;
    else
      malformed("boundary must be \"dirichlet\" or \"periodic\"");
  }
  const json& dist = field(j, "distribution");
  const json& kind = field(dist, "kind");
  const std::vector<double> p = numbers(field(dist, "params"), "params");
  if (kind == "uniform") {
    if (p.size() != 2) malformed("uniform needs params [a, b]");
    m.distribution = Distribution::uniform(p[0], p[1]);
  } else if (kind == "bernoulli") {
    if (p.size() != 3) malformed("bernoulli needs params [a, b, p]");
    m.distribution = Distribution::bernoulli(p[0], p[1], p[2]);
  } else if (kind == "constant") {
    if (p.size() != 1) malformed("constant needs params [c]");
    m.distribution = Distribution::constant(p[0]);
  } else {
    malformed("distribution kind must be uniform, bernoulli or constant");
  }
  if (j.contains("master_seed")) m.master_seed = unsigned_field(j["master_seed"], "master_seed");
  if (j.contains("sites")) {
    if (!j["sites"].is_array()) malformed("sites must be an array");
    for (const auto& s : j["sites"]) m.sites.push_back(static_cast<std::size_t>(unsigned_field(s, "site")));
  }
  if (j.contains("edits")) {
    if (!j["edits"].is_array()) malformed("edits must be an array");
    for (const auto& e : j["edits"]) {
      if (!e.is_array() || e.size() != 2) malformed("each edit must be [site, value]");
      m.edits.push_back({static_cast<std::size_t>(unsigned_field(e[0], "edit site")), number(e[1], "edit value")});
    }
  }
  m.validate();
  return m;
}

json to_json(const RegionSet& region) {
  json out = json::array();
  for (const auto& iv : region.intervals()) out.push_back({iv.lo, iv.hi});
  return out;
}

RegionSet region_from_json(const json& j) {
  if (!j.is_array()) malformed("region must be an array of [lo, hi]");
  std::vector<Interval> intervals;
  for (const auto& iv : j) {
    if (!iv.is_array() || iv.size() != 2) malformed("each interval must be [lo, hi]");
    const double lo = number(iv[0], "interval end");
    const double hi = number(iv[1], "interval end");
    if (!(lo < hi)) malformed("interval needs lo < hi");
    intervals.push_back({lo, hi});
  }
  return RegionSet(std::move(intervals));
}

json to_json(const DeterministicReport& r) {
  json out;
  out["n_samples"] = r.n_samples;
  out["resolution"] = r.resolution;
  out["eps_smooth"] = r.eps_smooth;
  out["theta_ac"] = r.theta_ac;
  out["sigma_ess_estimate"] = to_json(r.sigma_ess_estimate);
  out["ac_support_estimate"] = to_json(r.ac_support_estimate);
  out["sigma_ess_halves"] = {to_json(r.sigma_ess_first), to_json(r.sigma_ess_second)};
  out["ac_support_halves"] = {to_json(r.ac_first), to_json(r.ac_second)};
  out["batch_variation"] = {{"sigma_ess", r.batch_variation.at(0)}, {"ac_support", r.batch_variation.at(1)}};
  out["outlier_cells"] = r.outlier_cells;
  out["eigenvalue_range"] = {r.min_eigenvalue, r.max_eigenvalue};
  out["notes"] = r.notes;
  return out;
}

json to_json(const PairwiseReport& r) {
  json out;
  out["applicable"] = r.applicable;
  out["identical"] = r.identical;
  out["note"] = r.note;
  out["min_distance"] = r.min_distance;
  out["close_pairs"] = r.close_pairs;
  out["close_fraction"] = r.close_fraction;
  out["sigma_ess_estimate"] = to_json(r.sigma_ess_estimate);
  out["intersection"] = to_json(r.intersection);
  out["open_set"] = to_string(r.open_set);
  return out;
}

json to_json(const ShiftClassification& c) {
  return {{"up_jumps", c.up_jumps}, {"down_jumps", c.down_jumps}, {"ac_region", to_json(c.ac_region)}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string shift_csv(const ShiftFunction& u) {
  std::string out = "x,u\n";
  const auto g = u.u().grid();
  const auto v = u.u().values();
  for (std::size_t i = 0; i < g.size(); ++i) out += format_double(g[i]) + "," + format_double(v[i]) + "\n";
  return out;
}

std::string spectra_csv(std::span<const SampleSpectrum> spectra) {
  std::string out = "index,eigenvalue,weight\n";
  for (const auto& s : spectra)
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k)
      out += std::to_string(s.omega_index) + "," + format_double(s.eigenvalues[k]) + "," + format_double(s.weights[k]) +
             "\n";
  return out;
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };
  if (!std::getline(in, line)) malformed("CSV is empty");
  t.header = split(line);
  if (t.header.empty()) malformed("CSV header is empty");
  t.columns.resize(t.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) malformed("CSV row " + std::to_string(row) + " has the wrong column count");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const char* b = cells[c].data();
      const char* e = b + cells[c].size();
      const auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc() || res.ptr != e)
        malformed("CSV row " + std::to_string(row) + ": '" + cells[c] + "' is not a number");
      t.columns[c].push_back(v);
    }
  }
  return t;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) malformed("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) malformed("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp, ec);
      malformed("write failed for " + path.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    malformed("cannot move output into place at " + path.string());
  }
}

}  // namespace krein::io
