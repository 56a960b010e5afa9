#pragma once

#include <cstdio>
#include <string>

#include "shapelab/error.hpp"

namespace shapelab {

// Robin parameter. Dirichlet (beta = infinity) is a distinguished value, never
// a large float, so closed forms for the Dirichlet case stay exact.
class Beta {
 public:
  static Beta dirichlet() { return Beta(true, 0.0); }

  explicit Beta(double value) : Beta(false, value) {
    if (!(value > 0.0)) {
      throw ValidationError("beta must be positive, got " +
                            std::to_string(value));
    }
  }

  bool infinite() const { return infinite_; }

  double value() const {
    if (infinite_) {
      throw ValidationError("finite beta requested from dirichlet mode");
    }
    return value_;
  }

  // beta for the rescaled domain t*Omega; infinity is a fixed point.
  Beta scaled(double t) const {
    return infinite_ ? dirichlet() : Beta(t * value_);
  }

  static Beta parse(const std::string& text) {
    if (text == "inf" || text == "INF" || text == "Inf") return dirichlet();
    try {
      return Beta(std::stod(text));
    } catch (const std::invalid_argument&) {
      throw ValidationError("cannot parse beta value '" + text + "'");
    } catch (const std::out_of_range&) {
      throw ValidationError("beta value out of range: '" + text + "'");
    }
  }

  std::string str() const {
    if (infinite_) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value_);
    return buf;
  }

  bool operator==(const Beta& o) const {
    return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
  }

 private:
  Beta(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

}  // namespace shapelab
