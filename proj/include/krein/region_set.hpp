#pragma once

#include <utility>
#include <vector>

namespace krein {

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Finite union of open intervals, kept sorted and disjoint. Overlapping
/// intervals are merged on construction; touching ones stay separate since
/// the shared endpoint is not in the set.
class RegionSet {
 public:
  RegionSet() = default;
  explicit RegionSet(std::vector<Interval> intervals);
  RegionSet(std::initializer_list<Interval> intervals);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  double length() const;
  bool contains(double x) const;
  /// Closure membership.
  bool contains_closed(double x) const;
  double distance_to_complement(double x) const;

  RegionSet intersect(const RegionSet& other) const;
  RegionSet unite(const RegionSet& other) const;
  /// Open complement inside the window [lo, hi].
  RegionSet complement(double lo, double hi) const;

  double lower() const { return intervals_.front().lo; }
  double upper() const { return intervals_.back().hi; }

  bool operator==(const RegionSet&) const = default;

 private:
  std::vector<Interval> intervals_;
};

/// Hausdorff distance between the closures of two nonempty region sets.
double hausdorff(const RegionSet& a, const RegionSet& b);

/// Union of cells [k*width, (k+1)*width) for the listed cell indices.
RegionSet region_from_cells(const std::vector<long long>& cells, double width);

}  // namespace krein
