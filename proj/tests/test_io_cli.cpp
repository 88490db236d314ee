#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "krein/error.hpp"
#include "krein/io.hpp"
#include "krein/svg.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using krein::ErrorKind;
using krein::io::json;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("krein_io_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const krein::Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::argument;
}

int lab(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + KREIN_LAB + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("measure json round trip is exact") {
  const std::string text =
      R"({"atoms": [[0.1, 0.3], [-2.5, 0.25]], "ac": [{"grid": [0, 0.5, 1.25], "values": [1, 0.7, 0.2]}]})";
  const krein::Measure mu = krein::io::measure_from_json(json::parse(text));
  CHECK(mu.atoms().size() == 2);
  CHECK(mu.atoms()[0].position == -2.5);
  CHECK(mu.atoms()[1].position == 0.1);
  CHECK(mu.atoms()[1].mass == 0.3);
  const krein::Measure back = krein::io::measure_from_json(json::parse(krein::io::to_json(mu).dump()));
  CHECK(back == mu);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const krein::Measure r = test::random_mixed(seed);
    CHECK(krein::io::measure_from_json(json::parse(krein::io::to_json(r).dump())) == r);
  }
  const krein::Measure c = krein::cantor_measure(4);
  const krein::Measure cb = krein::io::measure_from_json(json::parse(krein::io::to_json(c).dump()));
  CHECK(cb == c);
  REQUIRE(cb.sc_tag());
  CHECK(cb.sc_tag()->depth == 4);
}

TEST_CASE("malformed measure json is an io error") {
  CHECK(kind_of([] { krein::io::measure_from_json(json::parse("[1, 2]")); }) == ErrorKind::io);
  CHECK(kind_of([] { krein::io::measure_from_json(json::parse(R"({"atoms": [[1]]})")); }) == ErrorKind::io);
  CHECK(kind_of([] { krein::io::measure_from_json(json::parse(R"({"atoms": [["a", 1]]})")); }) == ErrorKind::io);
  CHECK(kind_of([] { krein::io::measure_from_json(json::parse(R"({"ac": [{"grid": [0, 1]}]})")); }) == ErrorKind::io);
  CHECK(kind_of([] {
          krein::io::measure_from_json(json::parse(R"({"ac": [{"a": 0.5, "grid": [0, 1], "values": [1, 1]}]})"));
        }) == ErrorKind::io);
  CHECK_THROWS_AS(krein::io::measure_from_json(json::parse(R"({"atoms": [[0, -1]]})")), krein::Error);
}

TEST_CASE("shift, model and region json round trips") {
  const krein::ShiftFunction u({0.0, 0.0, 1.0, 1.0}, {0.0, std::numbers::pi, std::numbers::pi, 0.0}, 0.125);
  CHECK(krein::io::shift_from_json(json::parse(krein::io::to_json(u).dump())) == u);

  krein::AndersonModel m;
  m.dim = 2;
  m.L = 7;
  m.boundary = krein::Boundary::periodic;
  m.distribution = krein::Distribution::bernoulli(-1.0, 2.5, 0.3);
  m.master_seed = 0xfedcba9876543210ULL;
  m.sites = {0, 5, 48};
  m.edits = {{3, 0.75}};
  CHECK(krein::io::model_from_json(json::parse(krein::io::to_json(m).dump())) == m);

  const krein::RegionSet r{{-1.0, 0.5}, {2.0, 3.25}};
  CHECK(krein::io::region_from_json(json::parse(krein::io::to_json(r).dump())) == r);
}

TEST_CASE("format_double") {
  using krein::io::format_double;
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  for (std::uint64_t i = 0; i < 200; ++i) {
    const double x = (krein::rng::uniform01(5, 6, i) - 0.5) * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("parse_csv") {
  const auto t = krein::io::parse_csv("x, u\r\n0,1.5\n\n2, -3e-2\n");
  REQUIRE(t.header == std::vector<std::string>{"x", "u"});
  CHECK(t.rows() == 2);
  CHECK(t.columns[1][1] == -0.03);

  CHECK(kind_of([] { krein::io::parse_csv(""); }) == ErrorKind::io);
  CHECK(kind_of([] { krein::io::parse_csv("x,y\n1\n"); }) == ErrorKind::io);
  CHECK(kind_of([] { krein::io::parse_csv("x,y\n1,abc\n"); }) == ErrorKind::io);

  const krein::ShiftFunction u({0.0, 0.5, 1.0}, {0.5, 1.0, 2.0}, 0.0);
  const auto s = krein::io::parse_csv(krein::io::shift_csv(u));
  CHECK(s.rows() == 3);
  CHECK(s.columns[1][2] == 2.0);
}

TEST_CASE("atomic writes and missing files") {
  const fs::path dir = scratch("atomic");
  const fs::path p = dir / "nested" / "a.txt";
  krein::io::write_file_atomic(p, "first");
  krein::io::write_file_atomic(p, "second");
  CHECK(krein::io::read_file(p) == "second");
  CHECK_FALSE(fs::exists(dir / "nested" / "a.txt.tmp"));
  CHECK(kind_of([&] { krein::io::read_file(dir / "missing.json"); }) == ErrorKind::io);
  write(dir / "bad.json", "{not json");
  CHECK(kind_of([&] { krein::io::read_json(dir / "bad.json"); }) == ErrorKind::io);
}

TEST_CASE("svg output is deterministic and rejects empty input") {
  const auto x = test::linspace(0.0, 1.0, 11);
  std::vector<double> y;
  for (double v : x) y.push_back(v * v);
  const std::vector<krein::svg::Series> series{{"square", x, y}};
  krein::svg::PlotStyle style;
  style.title = "t";
  const std::string a = krein::svg::line_plot(series, style);
  CHECK(a == krein::svg::line_plot(series, style));
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("</svg>") != std::string::npos);

  const std::vector<krein::svg::Series> empty{{"none", {}, {}}};
  CHECK_THROWS_AS(krein::svg::line_plot(empty, {}), krein::Error);
  CHECK_THROWS_AS(krein::svg::histogram(std::vector<double>{}, std::vector<double>{}, 10), krein::Error);
  CHECK_THROWS_AS(krein::svg::region_overlay(std::vector<krein::svg::Band>{}, {}), krein::Error);

  const auto h = krein::svg::histogram(x, std::vector<double>(x.size(), 1.0 / 11.0), 5);
  double total = 0.0;
  for (std::size_t k = 0; k < h.density.size(); ++k) total += h.density[k] * (h.edges[k + 1] - h.edges[k]);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cli exit codes and outputs") {
  const fs::path dir = scratch("cli");
  const fs::path log = dir / "log.txt";
  write(dir / "delta.json", R"({"atoms": [[0, 1]]})");
  write(dir / "half.json", R"({"atoms": [[-1, 0.5], [1, 0.5]]})");

  CHECK(lab("--help", log) == 0);
  CHECK(lab("", log) == 2);
  CHECK(lab("frobnicate", log) == 2);
  CHECK(lab("perturb --measure \"" + (dir / "missing.json").string() + "\"", log) == 2);
  CHECK(lab("run --config \"" + (dir / "missing.json").string() + "\"", log) == 2);

  SUBCASE("perturb") {
    const fs::path out = dir / "perturb";
    CHECK(lab("perturb --measure \"" + (dir / "half.json").string() + "\" --alpha 1 --out \"" + out.string() + "\"",
              log) == 0);
    const krein::Measure m = krein::io::measure_from_json(krein::io::read_json(out / "mu_alpha.json"));
    REQUIRE(m.atoms().size() == 2);
    CHECK(m.atoms()[0].position == doctest::Approx((1.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    CHECK(fs::exists(out / "transform.csv"));
  }

  SUBCASE("shift forward, inverse and failed check") {
    const fs::path out = dir / "shift";
    const std::string base = "shift --measure \"" + (dir / "delta.json").string() + "\" --out \"" + out.string() + "\"";
    CHECK(lab(base, log) == 0);
    for (const char* f : {"shift.json", "shift.csv", "shift.svg", "classification.json"})
      CHECK(fs::exists(out / f));
    const fs::path inv = dir / "inverse";
    CHECK(lab("shift --shift \"" + (out / "shift.json").string() + "\" --out \"" + inv.string() + "\"", log) == 0);
    const krein::Measure mu = krein::io::measure_from_json(krein::io::read_json(inv / "mu.json"));
    REQUIRE(mu.atoms().size() == 1);
    CHECK(std::abs(mu.atoms()[0].position) < 1e-9);

    CHECK(lab(base + " --tol -1", log) == 1);
    CHECK(lab("shift --out \"" + out.string() + "\"", log) == 2);
    CHECK(lab(base + " --alpha -1", log) == 2);
  }

  SUBCASE("surgery") {
    write(dir / "box.json", R"({"grid": [0, 0, 1, 1], "values": [0, 3.141592653589793, 3.141592653589793, 0]})");
    const fs::path out = dir / "surgery";
    CHECK(lab("surgery --shift \"" + (dir / "box.json").string() + "\" --region 2,3 --out \"" + out.string() + "\"",
              log) == 0);
    CHECK(fs::exists(out / "surgery.json"));
    CHECK(fs::exists(out / "shift_tilde.json"));
    CHECK(lab("surgery --shift \"" + (dir / "box.json").string() + "\" --region 3,2 --out \"" + out.string() + "\"",
              log) == 2);
  }

  SUBCASE("anderson") {
    write(dir / "model.json",
          R"({"dim": 1, "L": 200, "boundary": "dirichlet", "distribution": {"kind": "uniform", "params": [0, 1]},
              "master_seed": 7})");
    const fs::path out = dir / "anderson";
    CHECK(lab("anderson --model \"" + (dir / "model.json").string() + "\" --samples 50 --out \"" + out.string() + "\"",
              log) == 0);
    for (const char* f : {"report.json", "samples.csv", "dos.svg", "sigma_overlay.svg"}) CHECK(fs::exists(out / f));
    const json r = krein::io::read_json(out / "report.json");
    CHECK(r.contains("estimates"));
  }

  SUBCASE("verify determinism and thread count") {
    const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
    CHECK(lab("verify --suite measures --seed 3 --json", a) == 0);
    const std::string cmd = std::string("KREIN_LAB_THREADS=2 \"") + KREIN_LAB +
                            "\" verify --suite measures --seed 3 --json > \"" + b + "\" 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(krein::io::read_file(a) == krein::io::read_file(b));
    CHECK(json::parse(krein::io::read_file(a))["failed"] == 0);
    CHECK(lab("verify --suite nope", log) == 2);
  }

  SUBCASE("plot") {
    write(dir / "series.csv", "x,y\n0,1\n1,2\n2,0\n");
    write(dir / "empty.csv", "x,y\n");
    CHECK(lab("plot --input \"" + (dir / "series.csv").string() + "\" --out \"" + (dir / "p.svg").string() + "\"",
              log) == 0);
    CHECK(fs::exists(dir / "p.svg"));
    CHECK(lab("plot --input \"" + (dir / "empty.csv").string() + "\" --out \"" + (dir / "q.svg").string() + "\"",
              log) == 2);
    CHECK_FALSE(fs::exists(dir / "q.svg"));
  }

  SUBCASE("run config") {
    write(dir / "scenario.json",
          R"({"kind": "perturb", "measure": "half.json", "alpha": 1, "out": "scenario_out"})");
    CHECK(lab("run --config \"" + (dir / "scenario.json").string() + "\"", log) == 0);
    CHECK(fs::exists(dir / "scenario_out" / "mu_alpha.json"));
  }
}
