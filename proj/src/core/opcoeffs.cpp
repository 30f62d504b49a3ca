#include "opcoeffs.hpp"

#include <cmath>

namespace holowave {

namespace {

void sample_arrays(OperatorCoefficients& oc) {
  const auto& g = oc.grid;
  int N = g->cells();
  oc.b_cell.resize(N);
  for (int c = 0; c < N; ++c) oc.b_cell[c] = oc.cdd.eval(g->mid(c));
  oc.cth_node.assign(N + 1, 0.0);
  oc.pdx_node.assign(N + 1, 0.0);
  oc.pt_node.assign(N + 1, 0.0);
  oc.ptdx_node.assign(N + 1, 0.0);
  oc.p0_node.assign(N + 1, 0.0);
  for (int i = 1; i <= N; ++i) {
    double x = g->x(i);
    oc.cth_node[i] = oc.cth.eval(x);
    oc.pdx_node[i] = oc.pdx.eval(x);
    oc.pt_node[i] = oc.pt.eval(x);
    oc.ptdx_node[i] = oc.ptdx.eval(x);
    oc.p0_node[i] = oc.p0.eval(x);
  }
  // x -> 0 limits (all regular; evaluate the series at 0 via leading term)
  auto at0 = [](const Series& s) {
    return s.lead() > 0.0 ? 0.0 : (s.lead() == 0.0 ? s.coeff(0) : 0.0);
  };
  oc.cth_node[0] = at0(oc.cth);
  oc.pdx_node[0] = at0(oc.pdx);
  oc.pt_node[0] = at0(oc.pt);
  oc.ptdx_node[0] = at0(oc.ptdx);
  oc.p0_node[0] = at0(oc.p0);
}

}  // namespace

OperatorCoefficients model_operator(const TwistParams& p, int mode,
                                    const GridPtr& grid) {
  OperatorCoefficients oc;
  oc.params = p;
  oc.mode = mode;
  oc.lambda = double(mode) * (mode + p.n - 3);
  oc.grid = grid;
  oc.model_only = true;
  oc.cdd = Series::constant(1.0);
  oc.cth = Series::constant(1.0);
  oc.pdx = Series::constant(0.0);
  oc.pt = Series::constant(0.0);
  oc.ptdx = Series::constant(0.0);
  oc.p0 = Series::constant(0.0);
  oc.boxpg = Series::monomial(0.5 * (p.n + 3), 1.0);
  sample_arrays(oc);
  return oc;
}

OperatorCoefficients assemble_operator(const MetricSeries& metric,
                                       const TwistParams& p, int mode,
                                       const GridPtr& grid) {
  if (metric.order < 2)
    fail(ErrorCode::SeriesOrderTooLow, "metric series order K must be >= 2");
  if (metric.n != p.n)
    fail(ErrorCode::DomainError, "metric dimension disagrees with parameters");
  {
    EstimateReport chk = aads_decay_check(metric, grid);
    if (!chk.pass)
      fail(ErrorCode::NotAAdS, "metric violates the asymptotic decay orders");
  }
  if (metric.has_angular_cross())
    fail(ErrorCode::NotAAdS,
         "angular cross terms induce mode mixing, which is not modeled");

  const double pp = 0.5 * (p.n - 1);  // conformal weight
  const Series xm2 = Series::monomial(-2.0);
  const Series x2 = Series::monomial(2.0);

  // Inverse of the rescaled (t,x) block and the angular factor.
  Series det2 = metric.tt * metric.xx - metric.tx * metric.tx;  // < 0
  Series inv_det = det2.reciprocal();
  // g^{..} = x^2 * ghat^{..}
  Series gtt_up = metric.xx * inv_det;
  Series gxx_up = metric.tt * inv_det;
  Series gtx_up = -1.0 * (metric.tx * inv_det);
  Series gth_up = metric.thth.reciprocal();

  // sqrt(|det g|) = x^{-n} W(x) sqrt(det g_S),
  // W = sqrt(-det2) * thth^{(n-2)/2}.
  Series W = (-1.0 * det2).pow(0.5) * metric.thth.pow(0.5 * (p.n - 2));

  // div-form radial coefficients: (1/(x^{-n} W)) d/dx (x^{-n} W * g^{x nu}).
  // All raw up-index components carry the factor x^2.
  auto div_x = [&](const Series& up) {
    Series inside = Series::monomial(double(-p.n)) * W * x2 * up;
    return Series::monomial(double(p.n)) * W.reciprocal() * inside.derivative();
  };

  Series c_tt = x2 * gtt_up;                      // coeff of phi_tt
  Series c_xx = x2 * gxx_up;                      // coeff of phi_xx
  Series c_tx = 2.0 * (x2 * gtx_up);              // coeff of phi_tx
  Series c_x = div_x(gxx_up);                     // coeff of phi_x
  Series c_t = div_x(gtx_up);                     // coeff of phi_t
  Series c_th = x2 * gth_up;                      // times Delta_theta
  Series c_0 = Series::constant(-p.mu);

  // Divide by -(coeff of phi_tt) so the normal form starts with -phi_tt.
  Series s = (-1.0 * c_tt).reciprocal();
  Series A_xx = (s * c_xx).chopped();
  Series A_tx = (s * c_tx).chopped().normalized(1e-13);
  Series A_x = (s * c_x).chopped().normalized(1e-13);
  Series A_t = (s * c_t).chopped().normalized(1e-13);
  Series A_th = (s * c_th).chopped();
  Series A_0 = (s * c_0).chopped();

  // Conjugation phi = x^pp u.
  const Series inv_x = Series::monomial(-1.0);
  Series B_xx = A_xx;
  Series B_x = A_x + 2.0 * pp * (A_xx * inv_x);
  Series B_0 = A_0 + pp * (A_x * inv_x) + pp * (pp - 1.0) * (A_xx * xm2);
  Series B_tx = A_tx;
  Series B_t = A_t + pp * (A_tx * inv_x);

  OperatorCoefficients oc;
  oc.params = p;
  oc.mode = mode;
  oc.lambda = double(mode) * (mode + p.n - 3);
  oc.grid = grid;
  oc.cdd = B_xx;
  oc.cth = A_th;
  // Normal-form extraction: B_xx d^2 + B_x d + B_0 =
  //   -cdd D*D + (B_x - cdd/x) d + (B_0 + cdd alpha^2/x^2).
  Series p1 = (B_x - oc.cdd * inv_x).chopped(1e-12).normalized(1e-12);
  Series p4 = (B_0 + p.alpha * p.alpha * (oc.cdd * xm2)).chopped(1e-12)
                  .normalized(1e-12);
  // plain d/dx -> twisted D_x on every first-order radial slot, and flux
  // form for the second-order part (commutator into pdx).
  oc.pdx = (p1 - oc.cdd.derivative().chopped(1e-13).normalized(1e-13))
               .chopped(1e-12);
  oc.p0 = (p4 - p.alpha * (p1 * inv_x)).chopped(1e-12).normalized(1e-12);
  oc.ptdx = B_tx;
  oc.pt = (B_t - p.alpha * (B_tx * inv_x)).chopped(1e-12).normalized(1e-12);

  // (box - mu) phi = boxpg * P u with boxpg = x^pp / s.
  oc.boxpg = Series::monomial(pp) * s.reciprocal();

  sample_arrays(oc);
  return oc;
}

GridFunction apply_elliptic(const OperatorCoefficients& oc,
                            const GridFunction& u) {
  require_same_grid(oc.grid, u.grid());
  const auto& g = oc.grid;
  const TwistParams& p = oc.params;
  int N = g->cells();
  GridFunction du = twist_d(u, p);
  // flux D*(b Du)
  GridFunction bdu = du;
  for (int c = 0; c < N; ++c) bdu[c] *= oc.b_cell[c];
  GridFunction dstar = twist_d_star(bdu, p);
  GridFunction out(g, u.mode(), Centering::Node, Rep::Plain);
  for (int i = 1; i < N; ++i) {
    double ui = u.plain(i, p.alpha);
    double du_avg = 0.5 * (du[i - 1] + du[i]);
    out[i] = -dstar[i] - oc.lambda * oc.cth_node[i] * ui +
             oc.pdx_node[i] * du_avg + oc.p0_node[i] * ui;
  }
  return out;
}

GridFunction phi_u_transform(const GridFunction& f, PhiUDirection dir,
                             const TwistParams& p) {
  double e = 0.5 * (p.n - 1) * (dir == PhiUDirection::PhiToU ? -1.0 : 1.0);
  GridFunction out(f.grid(), f.mode(), Centering::Node, Rep::Plain);
  const auto& g = f.grid();
  for (int i = 1; i <= g->cells(); ++i)
    out[i] = f.plain(i, p.alpha) * std::pow(g->x(i), e);
  out[0] = 0.0;
  return out;
}

}  // namespace holowave
