#ifndef HOLOWAVE_PROFILE_HPP
#define HOLOWAVE_PROFILE_HPP

#include <memory>
#include <vector>

#include "errors.hpp"

namespace holowave {

// Scalar time profile with derivative evaluation up to a declared order.
// Closed-form kinds evaluate derivatives in Taylor mode through the series
// engine (exact up to roundoff); sampled profiles fall back to 8th-order
// central differences and are the documented lower-accuracy path.
class TimeProfile {
 public:
  enum class Kind { Zero, Bump, SineBump, Sampled };

  static TimeProfile zero();
  // amplitude * exp(-1/(1-s^2)), s = (t-center)/width, support |s| < 1.
  static TimeProfile bump(double center, double width, double amplitude);
  // bump modulated by cos(freq (t-center)).
  static TimeProfile sine_bump(double center, double width, double amplitude,
                               double freq);
  static TimeProfile sampled(std::vector<double> values, double t0, double dt,
                             int max_deriv = 4);

  Kind kind() const { return kind_; }
  int budget() const { return budget_; }
  bool compact() const { return kind_ != Kind::Sampled; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

  // d-th derivative at t; throws DerivativeBudget beyond the declared order.
  double eval(double t, int d = 0) const;

 private:
  Kind kind_ = Kind::Zero;
  double center_ = 0.0, width_ = 1.0, amp_ = 0.0, freq_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  int budget_ = 64;
  std::vector<double> samples_;
  double t0_ = 0.0, dts_ = 1.0;
};

// Conformal-boundary datum: one time profile per tracked zonal mode.
struct BoundaryDatum {
  std::vector<std::pair<int, TimeProfile>> modes;

  double support_lo() const;
  double support_hi() const;
  bool compact() const;
  int budget() const;
};

}  // namespace holowave

#endif
