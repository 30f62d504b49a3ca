#include "metric.hpp"

#include <cmath>

namespace holowave {

MetricSeries ads_metric(int n, int order) {
  if (n < 3) fail(ErrorCode::DomainError, "dimension must be >= 3");
  if (order < 2) fail(ErrorCode::SeriesOrderTooLow, "series order K must be >= 2");
  MetricSeries m;
  m.n = n;
  m.order = order;
  int len = order + 1;
  m.tt = Series::poly({-1.0, 0.0, -2.0, 0.0, -1.0}).truncated(len);
  m.xx = Series::poly({1.0}).truncated(len);
  m.thth = Series::poly({1.0, 0.0, -2.0, 0.0, 1.0}).truncated(len);
  m.tx = Series::poly({0.0}).truncated(len);
  m.tth = Series::poly({0.0}).truncated(len);
  m.xth = Series::poly({0.0}).truncated(len);
  return m;
}

double coordinate_map_forward(double r) {
  if (r < 0.0) fail(ErrorCode::DomainError, "coordinate map needs r >= 0");
  return 1.0 / std::sqrt(2.0 * std::cosh(0.5 * r) - 1.0);
}

double coordinate_map_inverse(double x) {
  if (x <= 0.0 || x > 1.0)
    fail(ErrorCode::DomainError, "inverse coordinate map needs x in (0, 1]");
  double c = 0.5 * (1.0 / (x * x) + 1.0);
  return 2.0 * std::acosh(c);
}

namespace {

// Fitted decay slope (in g units, i.e. series-in-xhat slope minus 2) of a
// rescaled-component remainder on the grid window (0, a/4]. An identically
// vanishing remainder counts as infinitely steep.
double series_remainder_slope(const Series& rem, const GridPtr& g) {
  double scale = 0.0;
  for (double c : rem.coeffs()) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 1e9;
  std::vector<double> lx, ly;
  for (int i = 1; i <= g->cells(); ++i) {
    double x = g->x(i);
    if (x > 0.25 * g->width()) break;
    double v = rem.eval(x);
    if (std::abs(v) < 1e-13 * scale) continue;
    lx.push_back(std::log(x));
    ly.push_back(std::log(std::abs(v)));
  }
  if (lx.size() < 2) return 1e9;
  double mx = 0, my = 0;
  for (size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxx = 0, sxy = 0;
  for (size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  return sxy / sxx - 2.0;  // back to g units
}

Series drop_low_orders(const Series& s, int upto) {
  // zero out coefficients of x^0..x^upto
  std::vector<double> c = s.coeffs();
  for (int k = 0; k <= upto && k < (int)c.size(); ++k) c[k] = 0.0;
  return Series(s.lead(), c);
}

}  // namespace

EstimateReport aads_decay_check(const MetricSeries& metric, const GridPtr& grid) {
  EstimateReport rep;
  rep.name = "aads_decay";
  rep.param_names = {"component", "required", "slope"};
  rep.bound = 0.1;

  struct Row {
    const Series* s;
    double pole;    // required x^0 coefficient of the rescaled series
    int kill_upto;  // orders absorbed by pole + free constant
    double required;
    double id;
  };
  // Rescaled series are x^2 g: a g-remainder of order O(x^p) sits at series
  // order p+2. Diagonal components allow a free constant (series order 2).
  const Row rows[] = {
      {&metric.tt, -1.0, 2, 2.0, 0.0},   // g_tt = -x^-2 + c + O(x^2)
      {&metric.xx, 1.0, 2, 1.0, 1.0},    // g_xx =  x^-2 + c + O(x)
      {&metric.thth, 1.0, 2, 1.0, 2.0},  // g_thth = x^-2 g_S + c + O(x)
      {&metric.tx, 0.0, -1, 1.0, 3.0},   // g_tx = O(x)
      {&metric.tth, 0.0, -1, 1.0, 4.0},  // g_ttheta = O(x)
      {&metric.xth, 0.0, -1, 2.0, 5.0},  // g_xtheta = O(x^2)
  };

  bool ok = true;
  for (const Row& r : rows) {
    if (r.pole != 0.0) {
      if (std::abs(r.s->coeff(0) - r.pole) > 1e-10) ok = false;
      // no 1/x pole hides under the free constant
      if (std::abs(r.s->coeff(1)) > 1e-10) ok = false;
    }
    Series rem = (r.kill_upto >= 0) ? drop_low_orders(*r.s, r.kill_upto)
                                    : *r.s;
    double slope = series_remainder_slope(rem, grid);
    rep.add({r.id, r.required, slope}, r.required - std::min(slope, 1e6));
  }

  // Lorentzian signature at every grid point (on the rescaled matrix, which
  // differs by the positive conformal factor x^-2).
  for (int i = 1; i <= grid->cells(); ++i) {
    double x = grid->x(i);
    double tt = metric.tt.eval(x), xx = metric.xx.eval(x),
           tx = metric.tx.eval(x), th = metric.thth.eval(x);
    if (!(tt * xx - tx * tx < 0.0) || !(th > 0.0)) {
      ok = false;
      rep.note = "signature failure at x = " + fmt17(x);
      break;
    }
  }

  rep.finalize();
  rep.pass = rep.pass && ok;
  return rep;
}

}  // namespace holowave
