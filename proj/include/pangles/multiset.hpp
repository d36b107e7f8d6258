#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "pangles/error.hpp"

namespace pangles {

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Default grouping tolerance for multiplicities.
inline constexpr double kMergeTol = 1e-8;

/// Value with multiplicity; used for angle sets and spectra alike.
struct Cluster {
  double value = 0.0;
  int mult = 0;
};

/// Groups a list of reals into ascending clusters. Consecutive sorted values
/// closer than tol join the same cluster; the cluster value is their mean.
inline std::vector<Cluster> cluster_values(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<Cluster> out;
  double sum = 0.0;
  double last = 0.0;
  for (double v : values) {
    if (!out.empty() && v - last <= tol) {
      auto& c = out.back();
      sum += v;
      ++c.mult;
      c.value = sum / c.mult;
    } else {
      out.push_back({v, 1});
      sum = v;
    }
    last = v;
  }
  return out;
}

/// Hausdorff distance between two finite nonempty real sets, by direct
/// evaluation of both directed sup-inf distances.
inline double hausdorff(std::span<const double> s1, std::span<const double> s2) {
  if (s1.empty() || s2.empty()) throw Error(ErrorCode::EmptySet, "Hausdorff distance of an empty set");
  auto directed = [](std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (double x : a) {
      double best = std::numeric_limits<double>::infinity();
      for (double y : b) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(s1, s2), directed(s2, s1));
}

inline double hausdorff(const std::vector<double>& s1, const std::vector<double>& s2) {
  return hausdorff(std::span<const double>(s1), std::span<const double>(s2));
}

/// Largest elementwise gap between two sorted multisets of equal size;
/// +inf when the sizes differ.
inline double sorted_mismatch(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/// Sorted multiset of angles in [0, π/2].
class AngleMultiset {
 public:
  AngleMultiset() = default;

  static AngleMultiset from_values(const std::vector<double>& thetas, double merge_tol = kMergeTol) {
    AngleMultiset m;
    m.entries_ = cluster_values(thetas, merge_tol);
    for (auto& c : m.entries_) c.value = std::clamp(c.value, 0.0, kHalfPi);
    return m;
  }

  static AngleMultiset from_clusters(std::vector<Cluster> entries) {
    AngleMultiset m;
    m.entries_ = std::move(entries);
    return m;
  }

  const std::vector<Cluster>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  int total() const {
    int t = 0;
    for (const auto& c : entries_) t += c.mult;
    return t;
  }

  /// Every angle repeated by its multiplicity, ascending.
  std::vector<double> expanded() const {
    std::vector<double> out;
    for (const auto& c : entries_) out.insert(out.end(), static_cast<std::size_t>(c.mult), c.value);
    return out;
  }

  int multiplicity_of(double theta, double tol = kMergeTol) const {
    int m = 0;
    for (const auto& c : entries_)
      if (std::abs(c.value - theta) <= tol) m += c.mult;
    return m;
  }

  AngleMultiset without(double theta, double tol = kMergeTol) const {
    AngleMultiset m;
    for (const auto& c : entries_)
      if (std::abs(c.value - theta) > tol) m.entries_.push_back(c);
    return m;
  }

  AngleMultiset without_zero(double tol = kMergeTol) const { return without(0.0, tol); }
  AngleMultiset without_right(double tol = kMergeTol) const { return without(kHalfPi, tol); }

  /// {π/2 − θ}, re-sorted.
  AngleMultiset complemented() const {
    AngleMultiset m;
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) m.entries_.push_back({kHalfPi - it->value, it->mult});
    return m;
  }

  double min() const {
    if (entries_.empty()) throw Error(ErrorCode::EmptySet, "empty angle multiset");
    return entries_.front().value;
  }
  double max() const {
    if (entries_.empty()) throw Error(ErrorCode::EmptySet, "empty angle multiset");
    return entries_.back().value;
  }

 private:
  std::vector<Cluster> entries_;
};

/// Multiset distance: elementwise after sorting; +inf when totals differ.
inline double multiset_mismatch(const AngleMultiset& a, const AngleMultiset& b) {
  return sorted_mismatch(a.expanded(), b.expanded());
}

/// Multiset intersection: values matched within tol, multiplicity is the
/// minimum of the two.
inline AngleMultiset multiset_intersection(const AngleMultiset& a, const AngleMultiset& b, double tol = kMergeTol) {
  std::vector<Cluster> out;
  for (const auto& ca : a.entries()) {
    const Cluster* best = nullptr;
    for (const auto& cb : b.entries())
      if (std::abs(ca.value - cb.value) <= tol && (!best || std::abs(ca.value - cb.value) < std::abs(ca.value - best->value)))
        best = &cb;
    if (best) out.push_back({ca.value, std::min(ca.mult, best->mult)});
  }
  return AngleMultiset::from_clusters(std::move(out));
}

}  // namespace pangles
