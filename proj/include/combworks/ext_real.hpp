#pragma once

#include <cmath>
#include <limits>

namespace combworks {

/// Real number extended with a single +infinity element. Infinity is an
/// ordinary outcome for relative entropies with support violations, so it is
/// carried as a tagged value rather than an error. It orders above every
/// finite value and absorbs under addition.
class ExtReal {
 public:
  ExtReal() : value_(0.0), infinite_(false) {}

  static ExtReal finite(double v) { return ExtReal(v, false); }
  static ExtReal infinity() { return ExtReal(0.0, true); }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }

  /// Finite value; meaningless when infinite (use value_or_inf for math).
  double value() const { return value_; }
  double value_or_inf() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  ExtReal& operator+=(const ExtReal& o) {
    infinite_ = infinite_ || o.infinite_;
    value_ += o.value_;
    return *this;
  }
  friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }
  friend ExtReal operator*(double s, const ExtReal& a) {
    return a.infinite_ ? infinity() : finite(s * a.value_);
  }

  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }

 private:
  ExtReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

}  // namespace combworks
