#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace pangles {

/// One verified identity or inequality. For identities `value` is the
/// measured mismatch and `limit` the tolerance; for bounds `value` is the
/// left-hand side and `limit` the right-hand side plus slack.
struct CheckItem {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct CheckResult {
  std::vector<CheckItem> items;

  void add(std::string name, double value, double limit) {
    items.push_back({std::move(name), value, limit, value <= limit});
  }

  void add_flag(std::string name, bool ok) { items.push_back({std::move(name), ok ? 0.0 : 1.0, 0.0, ok}); }

  void append(const CheckResult& other) { items.insert(items.end(), other.items.begin(), other.items.end()); }

  bool pass() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
  }

  /// Smallest limit - value over all items (negative when something fails).
  double worst_margin() const {
    double m = 0.0;
    bool first = true;
    for (const auto& c : items) {
      const double d = c.limit - c.value;
      if (first || d < m) m = d;
      first = false;
    }
    return m;
  }
};

/// Reports from the relation checks share the same shape.
using RelationReport = CheckResult;

}  // namespace pangles
