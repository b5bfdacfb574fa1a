#pragma once

// Refinement-study helpers shared by the unit and acceptance suites.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace willmore::testing {

struct Decay {
  std::vector<double> values;  // coarse to fine, one per resolution doubling
  double floor = 0.0;

  /// Every value is at or below the roundoff floor.
  bool at_floor() const {
    return std::all_of(values.begin(), values.end(), [&](double v) { return v <= floor; });
  }

  std::vector<double> ratios() const {
    std::vector<double> r;
    for (std::size_t k = 1; k < values.size(); ++k) r.push_back(values[k] > 0.0 ? values[k - 1] / values[k] : 1e300);
    return r;
  }

  /// Ratios between successive doublings inside [lo, hi], counting only
  /// steps whose coarse value is above the floor; true at the floor.
  bool ratios_within(double lo, double hi) const {
    if (at_floor()) return true;
    const auto r = ratios();
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (values[k] <= floor) continue;
      if (r[k] < lo || r[k] > hi) return false;
    }
    return true;
  }

  bool second_order() const { return ratios_within(3.0, 5.0); }
  /// Decays at least at second order.
  bool at_least_second_order() const { return ratios_within(3.0, 1e300); }

  std::string describe() const {
    std::ostringstream os;
    os.precision(3);
    for (std::size_t k = 0; k < values.size(); ++k) os << (k ? " -> " : "") << values[k];
    if (at_floor()) {
      os << " (roundoff floor)";
    } else {
      os << " ratios";
      for (double r : ratios()) os << " " << r;
    }
    return os.str();
  }
};

}  // namespace willmore::testing
