#include "twist.hpp"

#include <algorithm>
#include <cmath>

namespace holowave {

namespace {

double lambda_mode(int l, int n) { return double(l) * (l + n - 3); }

}  // namespace

GridFunction twist_d(const GridFunction& u, const TwistParams& p) {
  if (u.centering() != Centering::Node)
    fail(ErrorCode::GridMismatch, "twist_d expects a node function");
  const auto& g = u.grid();
  GridFunction w = u.as_rep(Rep::TwistA, p.alpha);
  GridFunction out = GridFunction::cell_zero(g, u.mode());
  for (int c = 0; c < g->cells(); ++c)
    out[c] = std::pow(g->mid(c), -p.alpha) * (w[c + 1] - w[c]) / g->h(c);
  return out;
}

GridFunction twist_d_star(const GridFunction& v, const TwistParams& p) {
  const auto& g = v.grid();
  const double al = p.alpha;
  if (v.centering() == Centering::Node) {
    GridFunction gv = v.as_rep(Rep::Twist1mA, al);
    GridFunction out = GridFunction::cell_zero(g, v.mode());
    for (int c = 0; c < g->cells(); ++c)
      out[c] = -std::pow(g->mid(c), al - 1.0) * (gv[c + 1] - gv[c]) / g->h(c);
    return out;
  }
  // Dual-grid form. Interior rows are exactly quadrature-adjoint to twist_d
  // for zero-trace data; the two boundary rows are one-sided in the
  // detwisted variable so that the kernel x^{alpha-1} is annihilated there
  // as well.
  const int N = g->cells();
  GridFunction out(g, v.mode(), Centering::Node, Rep::Plain);
  std::vector<double> G(N);
  for (int c = 0; c < N; ++c) G[c] = std::pow(g->mid(c), 1.0 - al) * v[c];
  for (int i = 1; i < N; ++i)
    out[i] = -std::pow(g->x(i), al - 1.0) * (G[i] - G[i - 1]) / g->dual_len(i);
  out[0] = out[1];
  out[N] = -std::pow(g->x(N), al - 1.0) * (G[N - 1] - G[N - 2]) /
           (g->mid(N - 1) - g->mid(N - 2));
  return out;
}

GridFunction op_A(const GridFunction& phi, const TwistParams& p) {
  if (phi.centering() != Centering::Cell)
    fail(ErrorCode::GridMismatch, "op_A expects a cell function");
  const auto& g = phi.grid();
  GridFunction out(g, phi.mode(), Centering::Node, Rep::TwistA);
  double s = 0.0;
  out[0] = 0.0;
  for (int c = 0; c < g->cells(); ++c) {
    s += g->h(c) * std::pow(g->mid(c), p.alpha) * phi[c];
    out[c + 1] = s;
  }
  return out;
}

GridFunction op_A_star(const GridFunction& phi, const TwistParams& p) {
  if (phi.centering() != Centering::Cell)
    fail(ErrorCode::GridMismatch, "op_A_star expects a cell function");
  const auto& g = phi.grid();
  const int N = g->cells();
  GridFunction out(g, phi.mode(), Centering::Node, Rep::Twist1mA);
  double t = 0.0;
  out[N] = 0.0;
  for (int c = N - 1; c >= 0; --c) {
    t += g->h(c) * std::pow(g->mid(c), 1.0 - p.alpha) * phi[c];
    out[c] = t;
  }
  return out;
}

GridFunction ordered_twist(int m, const GridFunction& u, const TwistParams& p) {
  if (m < 0) fail(ErrorCode::NegativeOrder, "derivative order must be >= 0");
  GridFunction cur = u;
  for (int step = 1; step <= m; ++step)
    cur = (step % 2 == 1) ? twist_d(cur, p) : twist_d_star(cur, p);
  return cur;
}

double ip_weighted(const GridFunction& f, const GridFunction& g,
                   const TwistParams& p) {
  require_same_grid(f.grid(), g.grid());
  if (f.centering() != g.centering())
    fail(ErrorCode::GridMismatch, "inner product needs matching centerings");
  const auto& gr = f.grid();
  double s = 0.0;
  if (f.centering() == Centering::Cell) {
    for (int c = 0; c < gr->cells(); ++c) s += gr->cell_weight(c) * f[c] * g[c];
  } else {
    for (int i = 1; i <= gr->cells(); ++i)
      s += gr->node_weight(i) * f.plain(i, p.alpha) * g.plain(i, p.alpha);
  }
  return s;
}

namespace {

// Exact integral of |f|^2 x dx over (0, x_up) for f ~ f1 (x/x1)^q, fitted
// from the two innermost samples. Falls back to a constant-extrapolation
// rule when the fit is not meaningful.
double axis_cell_mass(double x1, double f1, double x2, double f2, double x_up) {
  double fallback = 0.5 * f1 * f1 * x_up * x_up;
  if (f1 == 0.0 || f2 == 0.0 || f1 * f2 < 0.0) return fallback;
  double q = std::log(std::abs(f2 / f1)) / std::log(x2 / x1);
  q = std::clamp(q, -0.95, 24.0);
  double e = 2.0 * q + 2.0;
  return f1 * f1 * std::pow(x_up / x1, 2.0 * q) * x_up * x_up / e;
}

}  // namespace

double norm_l2(const GridFunction& f, const TwistParams& p) {
  const auto& g = f.grid();
  double s = 0.0;
  if (f.centering() == Centering::Cell) {
    for (int c = 0; c < g->cells(); ++c)
      s += g->cell_weight(c) * f[c] * f[c];
    return std::sqrt(s);
  }
  for (int i = 1; i <= g->cells(); ++i) {
    double v = f.plain(i, p.alpha);
    s += g->node_weight(i) * v * v;
  }
  s += axis_cell_mass(g->x(1), f.plain(1, p.alpha), g->x(2),
                      f.plain(2, p.alpha), g->mid(0));
  return std::sqrt(s);
}

double norm_linf(const GridFunction& f, const TwistParams& p) {
  const auto& g = f.grid();
  double m = 0.0;
  if (f.centering() == Centering::Cell) {
    for (int c = 0; c < g->cells(); ++c) m = std::max(m, std::abs(f[c]));
  } else {
    for (int i = 1; i <= g->cells(); ++i)
      m = std::max(m, std::abs(f.plain(i, p.alpha)));
  }
  return m;
}

int min_cells_for_order(int m) { return 16 * (m + 1); }

double hm_norm_sq_mode(const GridFunction& u, int m, const TwistParams& p) {
  if (m < 0) fail(ErrorCode::NegativeOrder, "norm order must be >= 0");
  if (u.grid()->cells() < min_cells_for_order(m))
    fail(ErrorCode::InsufficientOrder,
         "grid resolution cannot support the requested derivative order");
  double lam = lambda_mode(u.mode(), p.n);
  double l2 = norm_l2(u, p);
  double acc = l2 * l2;
  GridFunction cur = u;
  for (int k = 1; k <= m; ++k) {
    cur = (k % 2 == 1) ? twist_d(cur, p) : twist_d_star(cur, p);
    double nk = norm_l2(cur, p);
    acc = (1.0 + lam) * acc + nk * nk;
  }
  return acc;
}

double decay_slope(const GridFunction& u, double x_lo, double x_hi,
                   const TwistParams& p, int log_power) {
  const auto& g = u.grid();
  std::vector<double> lx, ly;
  int sign = 0;
  auto visit = [&](double x, double v) {
    if (x < x_lo || x > x_hi) return;
    if (v == 0.0) fail(ErrorCode::SignChange, "u vanishes inside the window");
    int s = v > 0.0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign)
      fail(ErrorCode::SignChange, "u changes sign inside the window");
    double y = std::log(std::abs(v));
    if (log_power != 0) y -= log_power * std::log(-std::log(x));
    lx.push_back(std::log(x));
    ly.push_back(y);
  };
  if (u.centering() == Centering::Cell) {
    for (int c = 0; c < g->cells(); ++c) visit(g->mid(c), u[c]);
  } else {
    for (int i = 1; i <= g->cells(); ++i) visit(g->x(i), u.plain(i, p.alpha));
  }
  if (lx.size() < 2)
    fail(ErrorCode::EmptyWindow, "decay window holds fewer than two samples");
  double mx = 0.0, my = 0.0;
  for (size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxx = 0.0, sxy = 0.0;
  for (size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  return sxy / sxx;
}

}  // namespace holowave
