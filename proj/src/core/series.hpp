#ifndef HOLOWAVE_SERIES_HPP
#define HOLOWAVE_SERIES_HPP

#include <cmath>
#include <vector>

#include "errors.hpp"

namespace holowave {

// Truncated generalized power series  x^lead * sum_k c[k] x^k  with a real
// leading exponent. The number of retained coefficients is the knowledge
// horizon of the series: products and sums propagate the weaker horizon.
// Plain Taylor series are the special case lead == 0.
class Series {
 public:
  // Horizon assigned to exactly-known polynomials (metric inputs, constants).
  static constexpr int kExactLen = 48;

  Series() : lead_(0.0), c_(1, 0.0) {}
  Series(double lead, std::vector<double> coeffs)
      : lead_(lead), c_(std::move(coeffs)) {
    if (c_.empty()) c_.assign(1, 0.0);
  }

  static Series constant(double v, int len = kExactLen);
  // c0 + c1 x + ... as an exactly-known polynomial.
  static Series poly(std::vector<double> coeffs);
  // x^p (single exact monomial).
  static Series monomial(double p, double coeff = 1.0, int len = kExactLen);

  double lead() const { return lead_; }
  int length() const { return static_cast<int>(c_.size()); }
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(int k) const {
    return (k >= 0 && k < length()) ? c_[k] : 0.0;
  }

  bool is_zero(double tol = 0.0) const;
  double eval(double x) const;

  Series truncated(int len) const;
  // Drops leading zero coefficients, shifting the exponent accordingly.
  Series normalized(double tol = 0.0) const;
  // Zeroes coefficients below tol * max|c| (exact-cancellation cleanup).
  Series chopped(double rel_tol = 1e-13) const;

  Series operator-() const;
  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const { return *this + (-o); }
  Series operator*(const Series& o) const;
  Series operator*(double s) const;
  friend Series operator*(double s, const Series& a) { return a * s; }

  // d/dx, term by term.
  Series derivative() const;
  // Multiplies by x^p.
  Series shifted(double p) const;

  // 1/series; requires a nonzero leading coefficient.
  Series reciprocal() const;
  Series operator/(const Series& o) const { return *this * o.reciprocal(); }
  // series^q for real q (leading coefficient must be positive).
  Series pow(double q) const;
  Series sqrt() const { return pow(0.5); }
  // exp of a Taylor series (lead must be 0).
  Series exp() const;

 private:
  double lead_;
  std::vector<double> c_;
};

}  // namespace holowave

#endif
