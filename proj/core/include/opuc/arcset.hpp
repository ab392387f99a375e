#ifndef OPUC_ARCSET_HPP
#define OPUC_ARCSET_HPP

#include <vector>

#include "opuc/types.hpp"

namespace opuc {

/// Closed arc traversed counterclockwise from lo to hi. Stored normalized
/// with lo in [0, 2*pi) and hi in [lo, lo + 2*pi]; hi > 2*pi means the arc
/// wraps through 0. A degenerate arc (hi == lo) is a single point.
struct Arc {
  double lo = 0.0;
  double hi = 0.0;
  double measure() const { return hi - lo; }
};

/// Finite union of closed arcs on the unit circle, kept normalized: arcs are
/// pairwise disjoint (not even touching), sorted by lo, and at most one arc
/// wraps through 0. The full circle is canonically {[0, 2*pi]}.
class ArcSet {
 public:
  ArcSet() = default;
  static ArcSet full_circle();
  static ArcSet single(double lo, double hi);
  static ArcSet from_arcs(std::vector<Arc> arcs);

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }
  bool is_full_circle() const;
  double measure() const;
  bool contains(double theta) const;

  ArcSet unite(const ArcSet& other) const;
  ArcSet intersect(const ArcSet& other) const;
  ArcSet complement() const;

  /// Measure of the symmetric difference; 0 iff the sets agree up to
  /// measure zero.
  double symmetric_difference_measure(const ArcSet& other) const;

  /// Largest angular distance between matched endpoints of two sets with the
  /// same arc count; +inf when the counts differ. Used to compare band
  /// predictions at a stated tolerance.
  static double endpoint_distance(const ArcSet& a, const ArcSet& b);

 private:
  std::vector<Arc> arcs_;
};

}  // namespace opuc

#endif  // OPUC_ARCSET_HPP
