#include "profile.hpp"

#include <cmath>

#include "series.hpp"

namespace holowave {

TimeProfile TimeProfile::zero() { return TimeProfile(); }

TimeProfile TimeProfile::bump(double center, double width, double amplitude) {
  if (width <= 0.0) fail(ErrorCode::DomainError, "bump width must be positive");
  TimeProfile p;
  p.kind_ = Kind::Bump;
  p.center_ = center;
  p.width_ = width;
  p.amp_ = amplitude;
  p.lo_ = center - width;
  p.hi_ = center + width;
  return p;
}

TimeProfile TimeProfile::sine_bump(double center, double width,
                                   double amplitude, double freq) {
  TimeProfile p = bump(center, width, amplitude);
  p.kind_ = Kind::SineBump;
  p.freq_ = freq;
  return p;
}

TimeProfile TimeProfile::sampled(std::vector<double> values, double t0,
                                 double dt, int max_deriv) {
  if (values.size() < 16)
    fail(ErrorCode::DomainError, "sampled profile needs at least 16 samples");
  TimeProfile p;
  p.kind_ = Kind::Sampled;
  p.samples_ = std::move(values);
  p.t0_ = t0;
  p.dts_ = dt;
  p.budget_ = max_deriv;
  p.lo_ = t0;
  p.hi_ = t0 + dt * (p.samples_.size() - 1);
  return p;
}

namespace {

// Taylor coefficients (about t) of the bump, optionally modulated.
Series bump_series(double t, int len, double center, double width, double amp,
                   double freq, bool modulated) {
  double s0 = (t - center) / width;
  if (std::abs(s0) >= 1.0) return Series::constant(0.0, len);
  std::vector<double> sc(len, 0.0);
  sc[0] = s0;
  if (len > 1) sc[1] = 1.0 / width;
  Series s(0.0, sc);
  Series arg = -1.0 * (Series::constant(1.0, len) - s * s).reciprocal();
  Series f = arg.exp() * amp;
  if (modulated) {
    // cos(freq (t-center)) via its Taylor series about t
    std::vector<double> cc(len, 0.0);
    double ph = freq * (t - center);
    for (int k = 0; k < len; ++k) {
      double der;
      switch (k % 4) {
        case 0: der = std::cos(ph); break;
        case 1: der = -std::sin(ph); break;
        case 2: der = -std::cos(ph); break;
        default: der = std::sin(ph); break;
      }
      double fact = 1.0;
      for (int j = 2; j <= k; ++j) fact *= j;
      cc[k] = der * std::pow(freq, k) / fact;
    }
    f = f * Series(0.0, cc);
  }
  return f;
}

}  // namespace

double TimeProfile::eval(double t, int d) const {
  if (d < 0) fail(ErrorCode::NegativeOrder, "derivative order must be >= 0");
  if (d > budget_)
    fail(ErrorCode::DerivativeBudget,
         "profile supplies only " + std::to_string(budget_) + " derivatives");
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Bump:
    case Kind::SineBump: {
      if (t <= lo_ || t >= hi_) return 0.0;
      Series f = bump_series(t, d + 1, center_, width_, amp_, freq_,
                             kind_ == Kind::SineBump);
      double fact = 1.0;
      for (int j = 2; j <= d; ++j) fact *= j;
      return f.coeff(d) * fact;
    }
    case Kind::Sampled: {
      // repeated 8th-order first derivative on the sample grid
      std::vector<double> cur = samples_;
      static const double w9[9] = {1.0 / 280,  -4.0 / 105, 1.0 / 5,
                                   -4.0 / 5,   0.0,        4.0 / 5,
                                   -1.0 / 5,   4.0 / 105,  -1.0 / 280};
      for (int pass = 0; pass < d; ++pass) {
        std::vector<double> nxt(cur.size(), 0.0);
        int n = static_cast<int>(cur.size());
        for (int i = 0; i < n; ++i) {
          int c = std::min(std::max(i, 4), n - 5);
          double acc = 0.0;
          for (int j = -4; j <= 4; ++j) acc += w9[j + 4] * cur[c + j];
          nxt[i] = acc / dts_;
        }
        cur = nxt;
      }
      double pos = (t - t0_) / dts_;
      int i0 = std::min(std::max((int)std::floor(pos), 0),
                        (int)cur.size() - 2);
      double fr = pos - i0;
      return (1.0 - fr) * cur[i0] + fr * cur[i0 + 1];
    }
  }
  return 0.0;
}

double BoundaryDatum::support_lo() const {
  double lo = 1e300;
  for (const auto& [l, pr] : modes) lo = std::min(lo, pr.support_lo());
  return lo;
}

double BoundaryDatum::support_hi() const {
  double hi = -1e300;
  for (const auto& [l, pr] : modes) hi = std::max(hi, pr.support_hi());
  return hi;
}

bool BoundaryDatum::compact() const {
  for (const auto& [l, pr] : modes)
    if (!pr.compact()) return false;
  return true;
}

int BoundaryDatum::budget() const {
  int b = 1 << 20;
  for (const auto& [l, pr] : modes) b = std::min(b, pr.budget());
  return b;
}

}  // namespace holowave
