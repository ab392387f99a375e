#include "opuc/arcset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opuc/errors.hpp"

namespace opuc {

namespace {

// Non-wrapping segments [lo, hi] with 0 <= lo <= hi <= 2*pi.
using Segments = std::vector<Arc>;

Segments split(const std::vector<Arc>& arcs) {
  Segments out;
  for (const Arc& a : arcs) {
    if (a.hi <= kTwoPi) {
      out.push_back(a);
    } else {
      out.push_back({a.lo, kTwoPi});
      out.push_back({0.0, a.hi - kTwoPi});
    }
  }
  return out;
}

Segments merge_sorted(Segments segs) {
  std::sort(segs.begin(), segs.end(), [](const Arc& x, const Arc& y) {
    return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
  });
  Segments out;
  for (const Arc& s : segs) {
    if (!out.empty() && s.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, s.hi);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

double circular_distance(double x, double y) {
  const double d = std::abs(wrap_angle(x) - wrap_angle(y));
  return std::min(d, kTwoPi - d);
}

}  // namespace

ArcSet ArcSet::full_circle() {
  ArcSet s;
  s.arcs_ = {Arc{0.0, kTwoPi}};
  return s;
}

ArcSet ArcSet::single(double lo, double hi) { return from_arcs({Arc{lo, hi}}); }

ArcSet ArcSet::from_arcs(std::vector<Arc> arcs) {
  std::vector<Arc> canon;
  for (Arc a : arcs) {
    double len = a.hi - a.lo;
    if (len < 0.0) len += kTwoPi;  // [lo, hi] given with hi wrapped past 0
    if (len < 0.0 || !std::isfinite(len)) throw ConfigError("arc with invalid extent");
    if (len >= kTwoPi) return full_circle();
    const double lo = wrap_angle(a.lo);
    canon.push_back({lo, lo + len});
  }
  Segments merged = merge_sorted(split(canon));
  if (merged.empty()) return ArcSet{};

  // Re-join across zero when the first segment starts at 0 and the last ends
  // at 2*pi; the result is the single wrapping arc.
  if (merged.size() >= 2 && merged.front().lo == 0.0 && merged.back().hi == kTwoPi) {
    const Arc first = merged.front();
    const Arc last = merged.back();
    merged.erase(merged.begin());
    merged.pop_back();
    merged.push_back({last.lo, first.hi + kTwoPi});
  }
  double total = 0.0;
  for (const Arc& a : merged) total += a.measure();
  if (total >= kTwoPi) return full_circle();

  std::sort(merged.begin(), merged.end(),
            [](const Arc& x, const Arc& y) { return x.lo < y.lo; });
  ArcSet s;
  s.arcs_ = std::move(merged);
  return s;
}

bool ArcSet::is_full_circle() const {
  return arcs_.size() == 1 && arcs_[0].lo == 0.0 && arcs_[0].hi == kTwoPi;
}

double ArcSet::measure() const {
  double total = 0.0;
  for (const Arc& a : arcs_) total += a.measure();
  return total;
}

bool ArcSet::contains(double theta) const {
  const double t = wrap_angle(theta);
  for (const Arc& a : arcs_) {
    if (t >= a.lo && t <= a.hi) return true;
    if (a.hi > kTwoPi && t + kTwoPi <= a.hi) return true;
  }
  return false;
}

ArcSet ArcSet::unite(const ArcSet& other) const {
  std::vector<Arc> all = arcs_;
  all.insert(all.end(), other.arcs_.begin(), other.arcs_.end());
  return from_arcs(std::move(all));
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
  const Segments a = split(arcs_);
  const Segments b = split(other.arcs_);
  std::vector<Arc> out;
  for (const Arc& x : a) {
    for (const Arc& y : b) {
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (lo <= hi) out.push_back({lo, hi});
    }
  }
  return from_arcs(std::move(out));
}

ArcSet ArcSet::complement() const {
  if (arcs_.empty()) return full_circle();
  if (is_full_circle()) return ArcSet{};
  const Segments segs = merge_sorted(split(arcs_));
  // Gaps between consecutive segments, cyclically. Closed complement arcs
  // share endpoints with the set; the measure-zero overlap is intentional.
  std::vector<Arc> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double gap_lo = segs[i].hi;
    const double gap_hi = i + 1 < segs.size() ? segs[i + 1].lo : segs[0].lo + kTwoPi;
    if (gap_hi > gap_lo) out.push_back({gap_lo, gap_hi});
  }
  return from_arcs(std::move(out));
}

double ArcSet::symmetric_difference_measure(const ArcSet& other) const {
  return intersect(other.complement()).measure() + other.intersect(complement()).measure();
}

double ArcSet::endpoint_distance(const ArcSet& a, const ArcSet& b) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (a.arcs_.size() != b.arcs_.size()) return kInf;
  if (a.empty()) return 0.0;
  if (a.is_full_circle() || b.is_full_circle()) {
    return a.is_full_circle() == b.is_full_circle() ? 0.0 : kInf;
  }
  const std::size_t n = a.arcs_.size();
  double best = kInf;
  for (std::size_t shift = 0; shift < n; ++shift) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Arc& x = a.arcs_[i];
      const Arc& y = b.arcs_[(i + shift) % n];
      worst = std::max(worst, circular_distance(x.lo, y.lo));
      worst = std::max(worst, circular_distance(x.hi, y.hi));
    }
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace opuc
