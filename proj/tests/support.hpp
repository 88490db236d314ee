#pragma once

#include <cstdint>
#include <vector>

#include "krein/measure.hpp"
#include "krein/rng.hpp"

namespace test {

class Draw {
 public:
  Draw(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  double uniform(double a, double b) { return a + (b - a) * krein::rng::uniform01(seed_, stream_, counter_++); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform(0.0, 1.0) * (hi - lo + 1)); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

// n atoms in [lo, hi] with total mass 1
inline krein::Measure random_atomic(std::uint64_t seed, int n, double lo, double hi) {
  Draw d(seed, 1000);
  std::vector<krein::Atom> atoms;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    atoms.push_back({d.uniform(lo, hi), d.uniform(0.05, 1.0)});
    total += atoms.back().mass;
  }
  for (auto& a : atoms) a.mass /= total;
  return krein::build_measure(std::move(atoms), {});
}

inline krein::Measure random_mixed(std::uint64_t seed) {
  Draw d(seed, 2000);
  std::vector<krein::Atom> atoms;
  const int n = d.integer(0, 5);
  for (int i = 0; i < n; ++i) atoms.push_back({d.uniform(-4.0, 4.0), d.uniform(0.01, 1.0)});
  const double a = d.uniform(-3.0, 2.0), b = a + d.uniform(0.2, 2.0);
  const int points = d.integer(2, 8);
  std::vector<double> g, v;
  for (int i = 0; i < points; ++i) {
    g.push_back(a + (b - a) * i / (points - 1));
    v.push_back(d.uniform(0.0, 2.0));
  }
  return krein::build_measure(std::move(atoms), {krein::GridFunction(std::move(g), std::move(v))});
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

}  // namespace test
