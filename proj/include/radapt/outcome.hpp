#pragma once

#include <string>
#include <utility>
#include <vector>

#include "radapt/error.hpp"

namespace radapt {

/// A real value or an explicit +infinity marker. Optimizers branch on
/// is_finite() instead of comparing against a floating-point sentinel.
class Extended {
 public:
  static Extended finite(double v) { return Extended(v, {}, true); }
  static Extended infinite(std::string reason) {
    return Extended(0.0, std::move(reason), false);
  }

  bool is_finite() const { return finite_; }
  double value() const {
    if (!finite_) throw NumericError("value requested from +infinity outcome: " + reason_);
    return value_;
  }
  const std::string& reason() const { return reason_; }

 private:
  Extended(double v, std::string r, bool f) : value_(v), reason_(std::move(r)), finite_(f) {}
  double value_;
  std::string reason_;
  bool finite_;
};

/// Collects non-fatal warnings (fallbacks, snapping, degenerate densities).
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
  bool empty() const { return warnings.empty(); }
};

}  // namespace radapt
