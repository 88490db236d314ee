// krein_lab: command-line front end for the krein library.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 malformed input,
// 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "krein/anderson.hpp"
#include "krein/cauchy.hpp"
#include "krein/error.hpp"
#include "krein/io.hpp"
#include "krein/rank_one.hpp"
#include "krein/spectral_shift.hpp"
#include "krein/svg.hpp"
#include "krein/verify.hpp"

namespace fs = std::filesystem;
using krein::io::json;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitNumeric = 3;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Outputs are buffered and written only once the command has finished.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string content) { files_.emplace_back(dir_ / name, std::move(content)); }
  void add_json(const std::string& name, const json& j) { add(name, j.dump(2) + "\n"); }
  void commit() const {
    for (const auto& [path, content] : files_) krein::io::write_file_atomic(path, content);
  }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, std::string>> files_;
};

class Checks {
 public:
  void report(const std::string& name, bool passed, double value, double threshold) {
    std::printf("[%s] %s: %s (bound %s)\n", passed ? "PASS" : "FAIL", name.c_str(),
                krein::io::format_double(value).c_str(), krein::io::format_double(threshold).c_str());
    failed_ += passed ? 0 : 1;
  }
  void info(const std::string& line) { std::printf("[INFO] %s\n", line.c_str()); }
  int status() const { return failed_ == 0 ? 0 : kExitCheckFailed; }

 private:
  int failed_ = 0;
};

struct GridArgs {
  std::optional<double> lo;
  std::optional<double> hi;
  int points = 801;
};

std::vector<double> make_grid(const GridArgs& g, double default_lo, double default_hi) {
  const double lo = g.lo.value_or(default_lo), hi = g.hi.value_or(default_hi);
  if (!(lo < hi) || g.points < 2) throw Usage("grid needs lo < hi and at least two points");
  std::vector<double> out(static_cast<std::size_t>(g.points));
  for (int i = 0; i < g.points; ++i) out[i] = lo + (hi - lo) * i / (g.points - 1);
  return out;
}

// "a,b" or "a,b;c,d"
krein::RegionSet parse_region(const std::string& text) {
  std::vector<krein::Interval> ivs;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    const std::string part = text.substr(start, end - start);
    double lo = 0.0, hi = 0.0;
    char tail = 0;
    if (std::sscanf(part.c_str(), " %lf , %lf %c", &lo, &hi, &tail) != 2 || !(lo < hi))
      throw Usage("region '" + text + "' must look like 'a,b' or 'a,b;c,d' with a < b");
    ivs.push_back({lo, hi});
    start = end + 1;
  }
  return krein::RegionSet(std::move(ivs));
}

std::string region_text(const krein::RegionSet& r) {
  if (r.empty()) return "empty";
  std::string s;
  for (const auto& iv : r.intervals())
    s += (s.empty() ? "" : " u ") + std::string("(") + krein::io::format_double(iv.lo) + ", " +
         krein::io::format_double(iv.hi) + ")";
  return s;
}

krein::svg::Series shift_series(const krein::ShiftFunction& u) {
  const auto g = u.u().grid();
  const auto v = u.u().values();
  return {"u", {g.begin(), g.end()}, {v.begin(), v.end()}};
}

std::string shift_svg(const krein::ShiftFunction& u, const std::string& title) {
  const krein::svg::Series s[] = {shift_series(u)};
  return krein::svg::line_plot(s, {title, "x", "u(x)", std::pair{0.0, std::numbers::pi}});
}

// ---------------------------------------------------------------- perturb

struct PerturbArgs {
  fs::path measure;
  double alpha = 1.0;
  fs::path out = "out";
  GridArgs grid;
  double eta = 0.05;
  std::optional<double> tol;
};

int run_perturb(const PerturbArgs& a) {
  const krein::Measure mu = krein::io::measure_from_json(krein::io::read_json(a.measure));
  if (mu.is_zero()) throw Usage("measure is zero");
  const krein::RankOneFamily fam{mu, a.alpha};
  Checks checks;
  Outputs out(a.out);

  const bool oracle = mu.is_atomic() && std::abs(mu.total_mass() - 1.0) <= 1e-10;
  const krein::Interval hull = mu.support_hull();
  const double reach = std::abs(a.alpha) * mu.total_mass() + 1.0;
  std::vector<double> grid = make_grid(a.grid, hull.lo - reach, hull.hi + reach);
  krein::Measure mu_alpha;
  if (oracle) {
    mu_alpha = krein::perturb_discrete(fam);
    checks.info("route: matrix oracle (" + std::to_string(mu.atoms().size()) + " atoms)");
  } else {
    mu_alpha = krein::perturb_via_shift(fam, grid);
    checks.info("route: spectral shift on " + std::to_string(grid.size()) + " grid points");
  }
  const double tol = a.tol.value_or(oracle ? 1e-9 : 1e-2);

  std::string csv = "x,eta,re_aronszajn_krein,im_aronszajn_krein,re_mu_alpha,im_mu_alpha\n";
  double worst = 0.0;
  for (double x : grid) {
    const krein::cplx z(x, a.eta);
    const krein::cplx ak = krein::perturbed_transform(fam, z);
    const krein::cplx direct = krein::cauchy_transform(mu_alpha, z).value;
    worst = std::max(worst, std::abs(ak - direct) / std::max(std::abs(ak), 1e-300));
    using krein::io::format_double;
    csv += format_double(x) + "," + format_double(a.eta) + "," + format_double(ak.real()) + "," +
           format_double(ak.imag()) + "," + format_double(direct.real()) + "," + format_double(direct.imag()) + "\n";
  }
  checks.report("K mu_alpha: Aronszajn-Krein vs transform of mu_alpha (max relative)", worst <= tol, worst, tol);
  checks.report("mass conservation", std::abs(mu_alpha.total_mass() - mu.total_mass()) <= std::max(tol, 1e-10),
                std::abs(mu_alpha.total_mass() - mu.total_mass()), std::max(tol, 1e-10));

  out.add_json("mu_alpha.json", krein::io::to_json(mu_alpha));
  out.add("transform.csv", std::move(csv));
  out.commit();
  return checks.status();
}

// ---------------------------------------------------------------- shift

struct ShiftArgs {
  fs::path measure;
  fs::path shift;
  double alpha = 1.0;
  fs::path out = "out";
  GridArgs grid;
  double tol = 1e-6;
  std::optional<double> reference_point;
  double reference_mass = 1.0;
};

int run_shift(const ShiftArgs& a) {
  if (a.measure.empty() == a.shift.empty()) throw Usage("shift needs exactly one of --measure or --shift");
  Checks checks;
  Outputs out(a.out);
  if (!a.measure.empty()) {
    const krein::Measure mu = krein::io::measure_from_json(krein::io::read_json(a.measure));
    if (mu.is_zero()) throw Usage("measure is zero");
    const krein::Interval hull = mu.support_hull();
    const double reach = std::abs(a.alpha) * mu.total_mass() + 1.0;
    const std::vector<double> grid = make_grid(a.grid, hull.lo - reach, hull.hi + reach);
    const krein::ShiftResult r = krein::shift_from_measure({mu, a.alpha}, grid);
    const krein::ShiftClassification c = krein::classify_shift(r.shift);
    checks.report("consistency residual max |u - u'|", r.consistency_residual <= a.tol, r.consistency_residual, a.tol);
    checks.info("c = " + krein::io::format_double(r.shift.c()) + " (" + r.normalization + "), " +
                std::to_string(r.nonconverged) + " of " + std::to_string(r.points) + " points not converged");
    checks.info(std::to_string(c.up_jumps.size()) + " up-jumps, " + std::to_string(c.down_jumps.size()) +
                " down-jumps, a.c. region " + region_text(c.ac_region));
    json meta = krein::io::to_json(r.shift);
    meta["normalization"] = r.normalization;
    meta["consistency_residual"] = r.consistency_residual;
    meta["nonconverged"] = r.nonconverged;
    out.add_json("shift.json", meta);
    out.add("shift.csv", krein::io::shift_csv(r.shift));
    out.add("shift.svg", shift_svg(r.shift, "spectral shift, alpha = " + krein::io::format_double(a.alpha)));
    out.add_json("classification.json", krein::io::to_json(c));
  } else {
    const krein::ShiftFunction u = krein::io::shift_from_json(krein::io::read_json(a.shift));
    const krein::Normalization norm = a.reference_point
                                          ? krein::Normalization::reference(*a.reference_point, a.reference_mass)
                                          : krein::Normalization::fitted();
    const krein::ShiftPair p = krein::measures_from_shift(u, norm);
    checks.info("c = " + krein::io::format_double(p.c) + " (" + p.normalization + ")");
    checks.info("mu: " + std::to_string(p.mu.atoms().size()) + " atoms, mass " +
                krein::io::format_double(p.mu.total_mass()) + "; nu: " + std::to_string(p.nu.atoms().size()) +
                " atoms, mass " + krein::io::format_double(p.nu.total_mass()));
    out.add_json("mu.json", krein::io::to_json(p.mu));
    out.add_json("nu.json", krein::io::to_json(p.nu));
    out.add_json("pair.json", {{"c", p.c}, {"normalization", p.normalization}});
  }
  out.commit();
  return checks.status();
}

// ---------------------------------------------------------------- surgery

struct SurgeryArgs {
  fs::path shift;
  std::string region;
  fs::path out = "out";
  int points = 200;
  double tol = 1e-6;
};

int run_surgery(const SurgeryArgs& a) {
  const krein::ShiftFunction u = krein::io::shift_from_json(krein::io::read_json(a.shift));
  const krein::RegionSet O = parse_region(a.region);
  if (a.points < 2) throw Usage("--points must be at least 2");
  Checks checks;
  Outputs out(a.out);
  const krein::ShiftFunction ut = krein::dm_surgery(u, O);
  const krein::SurgeryBound b = krein::surgery_bound(u, ut, O, static_cast<std::size_t>(a.points));
  checks.report("sup |K1(u - u~)| off O against |O|", b.holds, b.max_deviation, b.bound);

  const krein::ShiftPair p = krein::measures_from_shift(u);
  const krein::ShiftPair q = krein::measures_from_shift(ut);
  const double lo = std::min(u.u().front(), O.lower()) - 10.0, hi = std::max(u.u().back(), O.upper()) + 10.0;
  const krein::RegionSet off = O.complement(lo, hi);
  const krein::Comparison cm = krein::compare_measures(p.mu, q.mu, off, a.tol);
  const krein::Comparison cn = krein::compare_measures(p.nu, q.nu, off, a.tol);
  const bool mu_eq = cm.relation == krein::Relation::equivalent;
  const bool nu_eq = cn.relation == krein::Relation::equivalent;
  checks.report("mu vs mu~ off O equivalent (C / c)", mu_eq, mu_eq ? cm.C / cm.c : 0.0,
                std::numeric_limits<double>::infinity());
  checks.report("nu vs nu~ off O equivalent (C / c)", nu_eq, nu_eq ? cn.C / cn.c : 0.0,
                std::numeric_limits<double>::infinity());

  json report;
  report["region"] = krein::io::to_json(O);
  report["bound"] = b.bound;
  report["max_deviation"] = b.max_deviation;
  report["holds"] = b.holds;
  report["points"] = b.points.size();
  report["mu"] = {{"relation", krein::to_string(cm.relation)}, {"c", cm.c}, {"C", cm.C}};
  report["nu"] = {{"relation", krein::to_string(cn.relation)}, {"c", cn.c}, {"C", cn.C}};
  report["c"] = p.c;
  report["c_tilde"] = q.c;
  out.add_json("shift_tilde.json", krein::io::to_json(ut));
  out.add("shift_tilde.csv", krein::io::shift_csv(ut));
  out.add("shift_tilde.svg", shift_svg(ut, "shift function after surgery"));
  out.add_json("surgery.json", report);
  out.commit();
  return checks.status();
}

// ---------------------------------------------------------------- anderson

struct AndersonArgs {
  fs::path model;
  int samples = 50;
  fs::path out = "out";
  std::optional<std::uint64_t> seed;
  double resolution = 0.05;
  double eps = 0.0;
  double theta = 0.1;
  std::uint64_t first_index = 0;
  std::vector<std::uint64_t> pair;
  std::string region = "10,11";
  double tol = 1e-9;
};

int run_anderson(const AndersonArgs& a) {
  krein::AndersonModel model = krein::io::model_from_json(krein::io::read_json(a.model));
  if (a.seed) model.master_seed = *a.seed;
  if (a.samples < 2) throw Usage("--samples must be at least 2");
  if (!a.pair.empty() && a.pair.size() != 2) throw Usage("--pair takes two realization indices");
  Checks checks;
  Outputs out(a.out);
  krein::EstimateOptions opt;
  opt.resolution = a.resolution;
  opt.eps_smooth = a.eps;
  opt.theta_ac = a.theta;
  opt.first_index = a.first_index;

  const auto spectra =
      krein::kernels::sample_spectra_parallel(model, a.first_index, static_cast<std::size_t>(a.samples));
  const krein::DeterministicReport r = krein::estimate_from_spectra(model, spectra, opt);
  // cell edges k * resolution carry rounding
  const double bound = 2 * a.resolution * (1 + 1e-9);
  checks.report("sigma_ess: Hausdorff distance between sample halves", r.batch_variation[0] <= bound,
                r.batch_variation[0], bound);
  checks.report("a.c. support: Hausdorff distance between sample halves", r.batch_variation[1] <= bound,
                r.batch_variation[1], bound);
  checks.info("sigma_ess estimate " + region_text(r.sigma_ess_estimate));
  checks.info("a.c. support estimate " + region_text(r.ac_support_estimate));

  json report;
  report["model"] = krein::io::to_json(model);
  report["estimates"] = krein::io::to_json(r);
  if (!a.pair.empty()) {
    const krein::PairwiseReport p =
        krein::pairwise_checks(model, a.pair[0], a.pair[1], parse_region(a.region), a.tol, a.resolution);
    if (p.applicable && !p.identical)
      checks.report("eigenvalue pairs closer than tol", p.close_pairs == 0, static_cast<double>(p.close_pairs), 0.0);
    else
      checks.info("pairwise singularity check: " + p.note);
    if (p.open_set == krein::OpenSetStatus::violation)
      checks.report("open set meets sigma_ess in a null set", false, p.intersection.length(), 0.0);
    else
      checks.info("open set and sigma_ess: " + krein::to_string(p.open_set) + ", length " +
                  krein::io::format_double(p.intersection.length()));
    report["pairwise"] = krein::io::to_json(p);
  }

  std::vector<double> values, weights;
  for (const auto& s : spectra)
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
      values.push_back(s.eigenvalues[k]);
      weights.push_back(s.weights[k] / static_cast<double>(spectra.size()));
    }
  const krein::svg::Histogram h = krein::svg::histogram(values, weights, 60);
  const krein::svg::Band bands[] = {{"first half", r.sigma_ess_first},
                                    {"second half", r.sigma_ess_second},
                                    {"all", r.sigma_ess_estimate},
                                    {"a.c.", r.ac_support_estimate}};

  out.add_json("report.json", report);
  out.add("samples.csv", krein::io::spectra_csv(spectra));
  out.add("dos.svg", krein::svg::bar_plot(h, {"averaged spectral density", "energy", "density", std::nullopt}));
  out.add("sigma_overlay.svg", krein::svg::region_overlay(bands, {"essential spectrum estimates", "energy", "", {}}));
  out.commit();
  return checks.status();
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 1;
  fs::path out;
  bool json_only = false;
};

int run_verify(const VerifyArgs& a) {
  const auto& names = krein::verify::suite_names();
  if (a.suite != "all" && std::find(names.begin(), names.end(), a.suite) == names.end())
    throw Usage("unknown suite '" + a.suite + "'");
  const auto checks = krein::verify::run_suite(a.suite, a.seed);
  const json j = krein::verify::to_json(checks, a.suite, a.seed);
  int failed = 0;
  for (const auto& c : checks) {
    failed += c.passed ? 0 : 1;
    if (a.json_only) continue;
    std::printf("[%s] %s: %s: %s (bound %s)\n", c.passed ? "PASS" : "FAIL", c.suite.c_str(), c.name.c_str(),
                krein::io::format_double(c.value).c_str(), krein::io::format_double(c.threshold).c_str());
  }
  if (a.json_only) std::cout << j.dump(2) << "\n";
  if (!a.out.empty()) {
    Outputs out(a.out);
    out.add_json("verify.json", j);
    out.commit();
  }
  return failed == 0 ? 0 : kExitCheckFailed;
}

// ---------------------------------------------------------------- plot

struct PlotArgs {
  std::vector<fs::path> inputs;
  std::string style = "line";
  fs::path out = "plot.svg";
  std::string title;
  int bins = 60;
};

krein::RegionSet sigma_region(const json& j, std::size_t half) {
  if (j.is_array()) return krein::io::region_from_json(j);
  const json& e = j.contains("estimates") ? j["estimates"] : j;
  if (half < 2 && e.contains("sigma_ess_halves")) return krein::io::region_from_json(e["sigma_ess_halves"][half]);
  if (e.contains("sigma_ess_estimate")) return krein::io::region_from_json(e["sigma_ess_estimate"]);
  throw Usage("overlay input must be a region array or an anderson report");
}

int run_plot(const PlotArgs& a) {
  if (a.inputs.empty()) throw Usage("plot needs at least one --input");
  std::string svg;
  if (a.style == "shift" || a.style == "line") {
    std::vector<krein::svg::Series> series;
    for (const auto& path : a.inputs) {
      const krein::io::Table t = krein::io::parse_csv(krein::io::read_file(path));
      if (t.columns.size() < 2) throw Usage(path.string() + ": need at least two columns");
      for (std::size_t c = 1; c < t.columns.size(); ++c)
        series.push_back({a.inputs.size() > 1 ? path.stem().string() + ":" + t.header[c] : t.header[c], t.columns[0],
                          t.columns[c]});
    }
    krein::svg::PlotStyle style{a.title, "x", a.style == "shift" ? "u(x)" : "", std::nullopt};
    if (a.style == "shift") style.y_range = std::pair{0.0, std::numbers::pi};
    svg = krein::svg::line_plot(series, style);
  } else if (a.style == "dos") {
    std::vector<double> values, weights;
    std::size_t samples = 0;
    for (const auto& path : a.inputs) {
      const krein::io::Table t = krein::io::parse_csv(krein::io::read_file(path));
      if (t.columns.size() != 3) throw Usage(path.string() + ": expected columns index,eigenvalue,weight");
      std::vector<double> idx = t.columns[0];
      std::sort(idx.begin(), idx.end());
      samples += static_cast<std::size_t>(std::unique(idx.begin(), idx.end()) - idx.begin());
      values.insert(values.end(), t.columns[1].begin(), t.columns[1].end());
      weights.insert(weights.end(), t.columns[2].begin(), t.columns[2].end());
    }
    for (double& w : weights) w /= static_cast<double>(std::max<std::size_t>(samples, 1));
    if (values.empty()) throw Usage("nothing to plot: empty series");
    svg = krein::svg::bar_plot(krein::svg::histogram(values, weights, static_cast<std::size_t>(a.bins)),
                               {a.title, "energy", "density", std::nullopt});
  } else if (a.style == "overlay") {
    std::vector<krein::svg::Band> bands;
    for (const auto& path : a.inputs) {
      const json j = krein::io::read_json(path);
      if (a.inputs.size() == 1 && !j.is_array()) {
        bands.push_back({"first half", sigma_region(j, 0)});
        bands.push_back({"second half", sigma_region(j, 1)});
      } else {
        bands.push_back({path.stem().string(), sigma_region(j, 2)});
      }
    }
    svg = krein::svg::region_overlay(bands, {a.title, "energy", "", std::nullopt});
  } else {
    throw Usage("unknown plot style '" + a.style + "' (line, shift, dos, overlay)");
  }
  krein::io::write_file_atomic(a.out, svg);
  return 0;
}

// ---------------------------------------------------------------- run --config

fs::path config_path(const json& cfg, const char* key, const fs::path& base, bool must_exist = true) {
  if (!cfg.contains(key)) return {};
  if (!cfg[key].is_string()) throw Usage(std::string("config field '") + key + "' must be a string");
  fs::path p = cfg[key].get<std::string>();
  if (p.is_relative()) p = base / p;
  if (must_exist && !fs::exists(p)) throw Usage("config references a missing file: " + p.string());
  return p;
}

template <class T>
void config_value(const json& cfg, const char* key, T& target) {
  if (!cfg.contains(key)) return;
  try {
    target = cfg[key].get<T>();
  } catch (const json::exception&) {
    throw Usage(std::string("config field '") + key + "' has the wrong type");
  }
}

template <class T>
void config_value(const json& cfg, const char* key, std::optional<T>& target) {
  if (!cfg.contains(key)) return;
  T v{};
  config_value(cfg, key, v);
  target = v;
}

void config_grid(const json& cfg, GridArgs& g) {
  config_value(cfg, "grid_min", g.lo);
  config_value(cfg, "grid_max", g.hi);
  config_value(cfg, "grid_points", g.points);
}

int run_config(const fs::path& path) {
  const json cfg = krein::io::read_json(path);
  if (!cfg.is_object() || !cfg.contains("kind") || !cfg["kind"].is_string())
    throw Usage("config must be an object with a string field 'kind'");
  const fs::path base = path.parent_path();
  const std::string kind = cfg["kind"].get<std::string>();
  const fs::path out = cfg.contains("out") ? config_path(cfg, "out", base, false) : base / "out";
  if (kind == "perturb") {
    PerturbArgs a;
    a.measure = config_path(cfg, "measure", base);
    if (a.measure.empty()) throw Usage("perturb config needs 'measure'");
    a.out = out;
    config_value(cfg, "alpha", a.alpha);
    config_value(cfg, "eta", a.eta);
    config_value(cfg, "tol", a.tol);
    config_grid(cfg, a.grid);
    return run_perturb(a);
  }
  if (kind == "shift") {
    ShiftArgs a;
    a.measure = config_path(cfg, "measure", base);
    a.shift = config_path(cfg, "shift", base);
    a.out = out;
    config_value(cfg, "alpha", a.alpha);
    config_value(cfg, "tol", a.tol);
    config_value(cfg, "reference_point", a.reference_point);
    config_value(cfg, "reference_mass", a.reference_mass);
    config_grid(cfg, a.grid);
    return run_shift(a);
  }
  if (kind == "surgery") {
    SurgeryArgs a;
    a.shift = config_path(cfg, "shift", base);
    if (a.shift.empty()) throw Usage("surgery config needs 'shift'");
    a.out = out;
    config_value(cfg, "region", a.region);
    config_value(cfg, "points", a.points);
    config_value(cfg, "tol", a.tol);
    return run_surgery(a);
  }
  if (kind == "anderson") {
    AndersonArgs a;
    a.model = config_path(cfg, "model", base);
    if (a.model.empty()) throw Usage("anderson config needs 'model'");
    a.out = out;
    config_value(cfg, "samples", a.samples);
    config_value(cfg, "seed", a.seed);
    config_value(cfg, "resolution", a.resolution);
    config_value(cfg, "eps", a.eps);
    config_value(cfg, "theta", a.theta);
    config_value(cfg, "first_index", a.first_index);
    config_value(cfg, "pair", a.pair);
    config_value(cfg, "region", a.region);
    config_value(cfg, "tol", a.tol);
    return run_anderson(a);
  }
  if (kind == "verify") {
    VerifyArgs a;
    config_value(cfg, "suite", a.suite);
    config_value(cfg, "seed", a.seed);
    a.out = out;
    return run_verify(a);
  }
  throw Usage("unknown scenario kind '" + kind + "'");
}

int exit_code_for(krein::ErrorKind kind) {
  switch (kind) {
    case krein::ErrorKind::accuracy:
    case krein::ErrorKind::numeric:
    case krein::ErrorKind::pole_proximity:
    case krein::ErrorKind::indeterminate_ratio:
      return kExitNumeric;
    default:
      return kExitMalformed;
  }
}

void add_grid_options(CLI::App* cmd, GridArgs& g) {
  cmd->add_option("--grid-min", g.lo, "Left end of the evaluation grid");
  cmd->add_option("--grid-max", g.hi, "Right end of the evaluation grid");
  cmd->add_option("--grid-points", g.points, "Number of grid points")->check(CLI::Range(2, 1000000));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-one perturbations, spectral shift functions and Anderson Monte Carlo"};
  app.require_subcommand(1);

  PerturbArgs perturb;
  auto* p = app.add_subcommand("perturb", "Spectral measure of the rank-one perturbation");
  p->add_option("--measure", perturb.measure, "Measure JSON")->required();
  p->add_option("--alpha", perturb.alpha, "Coupling");
  p->add_option("--out", perturb.out, "Output directory");
  p->add_option("--eta", perturb.eta, "Height of the transform.csv sample line")->check(CLI::PositiveNumber);
  p->add_option("--tol", perturb.tol, "Relative tolerance for the transform check");
  add_grid_options(p, perturb.grid);

  ShiftArgs shift;
  auto* s = app.add_subcommand("shift", "Spectral shift function (--measure) or measure pair (--shift)");
  s->add_option("--measure", shift.measure, "Measure JSON (forward direction)");
  s->add_option("--shift", shift.shift, "Shift function JSON (inverse direction)");
  s->add_option("--alpha", shift.alpha, "Coupling, forward direction")->check(CLI::PositiveNumber);
  s->add_option("--out", shift.out, "Output directory");
  s->add_option("--tol", shift.tol, "Bound on the consistency residual");
  s->add_option("--reference-point", shift.reference_point, "Normalize mu to carry an atom here");
  s->add_option("--reference-mass", shift.reference_mass, "Mass of that atom");
  add_grid_options(s, shift.grid);

  SurgeryArgs surgery;
  auto* g = app.add_subcommand("surgery", "Modify a shift function on an open set and check the bound");
  g->add_option("--shift", surgery.shift, "Shift function JSON")->required();
  g->add_option("--region", surgery.region, "Open set, e.g. '2,3' or '2,3;5,6'")->required();
  g->add_option("--out", surgery.out, "Output directory");
  g->add_option("--points", surgery.points, "Check points off the region");
  g->add_option("--tol", surgery.tol, "Atom matching tolerance");

  AndersonArgs anderson;
  auto* n = app.add_subcommand("anderson", "Monte Carlo estimates for a finite-volume Anderson model");
  n->add_option("--model", anderson.model, "Model JSON")->required();
  n->add_option("--samples", anderson.samples, "Number of realizations");
  n->add_option("--out", anderson.out, "Output directory");
  n->add_option("--seed", anderson.seed, "Override the model's master seed");
  n->add_option("--resolution", anderson.resolution, "Cell width")->check(CLI::PositiveNumber);
  n->add_option("--eps", anderson.eps, "Poisson smoothing width (default 4 * width / L)");
  n->add_option("--theta", anderson.theta, "Smoothed density threshold");
  n->add_option("--first-index", anderson.first_index, "Index of the first realization");
  n->add_option("--pair", anderson.pair, "Two realization indices for the pairwise checks, e.g. 1,2")
      ->expected(2)
      ->delimiter(',');
  n->add_option("--region", anderson.region, "Open set for the pairwise check");
  n->add_option("--tol", anderson.tol, "Eigenvalue coincidence tolerance")->check(CLI::PositiveNumber);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run a verification suite");
  v->add_option("--suite", verify.suite, "measures, cauchy, rank_one, spectral_shift, anderson or all");
  v->add_option("--seed", verify.seed, "Seed for all randomized checks");
  v->add_option("--out", verify.out, "Write verify.json into this directory");
  v->add_flag("--json", verify.json_only, "Print the JSON result list instead of summary lines");

  PlotArgs plot;
  auto* l = app.add_subcommand("plot", "Render CSV/JSON series as SVG");
  l->add_option("--input", plot.inputs, "Input file (repeatable)")->required();
  l->add_option("--style", plot.style, "line, shift, dos or overlay");
  l->add_option("--out", plot.out, "Output SVG path");
  l->add_option("--title", plot.title, "Plot title");
  l->add_option("--bins", plot.bins, "Histogram bins for dos")->check(CLI::Range(1, 100000));

  fs::path config;
  auto* r = app.add_subcommand("run", "Run a scenario from a JSON config");
  r->add_option("--config", config, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitMalformed;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "perturb") return run_perturb(perturb);
    if (cmd == "shift") return run_shift(shift);
    if (cmd == "surgery") return run_surgery(surgery);
    if (cmd == "anderson") return run_anderson(anderson);
    if (cmd == "verify") return run_verify(verify);
    if (cmd == "plot") return run_plot(plot);
    return run_config(config);
  } catch (const Usage& e) {
    std::fprintf(stderr, "krein_lab %s: %s\n", cmd.c_str(), e.what());
    return kExitMalformed;
  } catch (const krein::Error& e) {
    std::fprintf(stderr, "krein_lab %s: %s\n", cmd.c_str(), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "krein_lab %s: %s\n", cmd.c_str(), e.what());
    return kExitMalformed;
  }
}
