#include "series.hpp"

#include <algorithm>
#include <cmath>

namespace holowave {

Series Series::constant(double v, int len) {
  std::vector<double> c(static_cast<size_t>(len), 0.0);
  c[0] = v;
  return Series(0.0, std::move(c));
}

Series Series::poly(std::vector<double> coeffs) {
  coeffs.resize(std::max<size_t>(coeffs.size(), kExactLen), 0.0);
  return Series(0.0, std::move(coeffs));
}

Series Series::monomial(double p, double coeff, int len) {
  std::vector<double> c(static_cast<size_t>(len), 0.0);
  c[0] = coeff;
  return Series(p, std::move(c));
}

bool Series::is_zero(double tol) const {
  for (double v : c_)
    if (std::abs(v) > tol) return false;
  return true;
}

double Series::eval(double x) const {
  double s = 0.0;
  for (int k = length() - 1; k >= 0; --k) s = s * x + c_[k];
  return s * std::pow(x, lead_);
}

Series Series::truncated(int len) const {
  std::vector<double> c(c_.begin(), c_.begin() + std::min<int>(len, length()));
  c.resize(static_cast<size_t>(len), 0.0);
  return Series(lead_, std::move(c));
}

Series Series::normalized(double tol) const {
  int k0 = 0;
  while (k0 < length() - 1 && std::abs(c_[k0]) <= tol) ++k0;
  std::vector<double> c(c_.begin() + k0, c_.end());
  return Series(lead_ + k0, std::move(c));
}

Series Series::chopped(double rel_tol) const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  Series out = *this;
  for (double& v : out.c_)
    if (std::abs(v) < rel_tol * m) v = 0.0;
  return out;
}

Series Series::operator-() const {
  Series out = *this;
  for (double& v : out.c_) v = -v;
  return out;
}

Series Series::operator+(const Series& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  double d = o.lead_ - lead_;
  double dr = std::round(d);
  if (std::abs(d - dr) > 1e-9)
    fail(ErrorCode::DomainError,
         "series addition requires leading exponents to differ by an integer");
  int shift = static_cast<int>(dr);
  double lead = lead_;
  const Series* a = this;
  const Series* b = &o;
  if (shift < 0) {
    std::swap(a, b);
    shift = -shift;
    lead = o.lead_;
  }
  // a starts at `lead`, b starts `shift` slots later. The horizon of the sum
  // is measured from `lead`.
  int len = std::min(a->length(), b->length() + shift);
  std::vector<double> c(static_cast<size_t>(len), 0.0);
  for (int k = 0; k < len; ++k) {
    c[k] = a->coeff(k);
    if (k >= shift) c[k] += b->coeff(k - shift);
  }
  return Series(lead, std::move(c));
}

Series Series::operator*(const Series& o) const {
  int len = std::min(length(), o.length());
  std::vector<double> c(static_cast<size_t>(len), 0.0);
  for (int i = 0; i < len; ++i) {
    if (c_[i] == 0.0) continue;
    for (int j = 0; i + j < len && j < o.length(); ++j)
      c[i + j] += c_[i] * o.c_[j];
  }
  return Series(lead_ + o.lead_, std::move(c));
}

Series Series::operator*(double s) const {
  Series out = *this;
  for (double& v : out.c_) v *= s;
  return out;
}

Series Series::derivative() const {
  std::vector<double> c(c_.size(), 0.0);
  for (int k = 0; k < length(); ++k) c[k] = (lead_ + k) * c_[k];
  return Series(lead_ - 1.0, std::move(c));
}

Series Series::shifted(double p) const { return Series(lead_ + p, c_); }

Series Series::reciprocal() const {
  if (c_[0] == 0.0)
    fail(ErrorCode::DomainError,
         "series reciprocal requires a nonzero leading coefficient");
  std::vector<double> b(c_.size(), 0.0);
  b[0] = 1.0 / c_[0];
  for (int m = 1; m < length(); ++m) {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += coeff(j) * b[m - j];
    b[m] = -s / c_[0];
  }
  return Series(-lead_, std::move(b));
}

Series Series::pow(double q) const {
  if (c_[0] <= 0.0)
    fail(ErrorCode::DomainError,
         "series pow requires a positive leading coefficient");
  // J.C.P. Miller recurrence.
  std::vector<double> b(c_.size(), 0.0);
  b[0] = std::pow(c_[0], q);
  for (int m = 1; m < length(); ++m) {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += ((q + 1.0) * j - m) * coeff(j) * b[m - j];
    b[m] = s / (m * c_[0]);
  }
  return Series(lead_ * q, std::move(b));
}

Series Series::exp() const {
  if (lead_ != 0.0)
    fail(ErrorCode::DomainError, "series exp requires a plain Taylor series");
  std::vector<double> b(c_.size(), 0.0);
  b[0] = std::exp(c_[0]);
  for (int m = 1; m < length(); ++m) {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += j * coeff(j) * b[m - j];
    b[m] = s / m;
  }
  return Series(0.0, std::move(b));
}

}  // namespace holowave
