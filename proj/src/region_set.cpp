#include "krein/region_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "krein/error.hpp"

namespace krein {

RegionSet::RegionSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      fail(ErrorKind::argument, "region endpoints must be finite");
    if (iv.hi > iv.lo) intervals_.push_back(iv);
  }
  std::sort(intervals_.begin(), intervals_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& iv : intervals_) {
    if (!merged.empty() && iv.lo < merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    else
      merged.push_back(iv);
  }
  intervals_ = std::move(merged);
}

RegionSet::RegionSet(std::initializer_list<Interval> intervals) : RegionSet(std::vector<Interval>(intervals)) {}

double RegionSet::length() const {
  double sum = 0.0;
  for (const auto& iv : intervals_) sum += iv.length();
  return sum;
}

bool RegionSet::contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(), [x](const Interval& iv) { return x > iv.lo && x < iv.hi; });
}

bool RegionSet::contains_closed(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(), [x](const Interval& iv) { return x >= iv.lo && x <= iv.hi; });
}

double RegionSet::distance_to_complement(double x) const {
  for (const auto& iv : intervals_)
    if (x > iv.lo && x < iv.hi) return std::min(x - iv.lo, iv.hi - x);
  return 0.0;
}

RegionSet RegionSet::intersect(const RegionSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < intervals_.size() && j < other.intervals_.size()) {
    const Interval& a = intervals_[i];
    const Interval& b = other.intervals_[j];
    const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a.hi < b.hi) ++i; else ++j;
  }
  return RegionSet(std::move(out));
}

RegionSet RegionSet::unite(const RegionSet& other) const {
  std::vector<Interval> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return RegionSet(std::move(all));
}

RegionSet RegionSet::complement(double lo, double hi) const {
  std::vector<Interval> out;
  double cursor = lo;
  for (const auto& iv : intervals_) {
    if (iv.hi <= lo) continue;
    if (iv.lo >= hi) break;
    if (iv.lo > cursor) out.push_back({cursor, iv.lo});
    cursor = std::max(cursor, iv.hi);
  }
  if (hi > cursor) out.push_back({cursor, hi});
  return RegionSet(std::move(out));
}

namespace {

// sup over the closure of `a` of the distance to the closure of `b`
double directed_hausdorff(const RegionSet& a, const RegionSet& b) {
  const auto& bi = b.intervals();
  auto dist = [&](double x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& iv : bi) {
      if (x >= iv.lo && x <= iv.hi) return 0.0;
      d = std::min(d, x < iv.lo ? iv.lo - x : x - iv.hi);
    }
    return d;
  };
  double worst = 0.0;
  for (const auto& iv : a.intervals()) {
    worst = std::max({worst, dist(iv.lo), dist(iv.hi)});
    // the farthest point inside iv from b sits at the middle of a gap of b
    for (std::size_t k = 0; k + 1 < bi.size(); ++k) {
      const double mid = 0.5 * (bi[k].hi + bi[k + 1].lo);
      if (mid > iv.lo && mid < iv.hi) worst = std::max(worst, dist(mid));
    }
  }
  return worst;
}

}  // namespace

double hausdorff(const RegionSet& a, const RegionSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

RegionSet region_from_cells(const std::vector<long long>& cells, double width) {
  std::vector<long long> sorted = cells;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<Interval> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[j] + 1) ++j;
    out.push_back({static_cast<double>(sorted[i]) * width, static_cast<double>(sorted[j] + 1) * width});
    i = j + 1;
  }
  return RegionSet(std::move(out));
}

}  // namespace krein
