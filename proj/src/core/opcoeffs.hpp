#ifndef HOLOWAVE_OPCOEFFS_HPP
#define HOLOWAVE_OPCOEFFS_HPP

#include "field.hpp"
#include "metric.hpp"
#include "twist.hpp"

namespace holowave {

// Per-mode coefficients of the normal-form wave operator
//   P u = -u_tt - D*(b D_x u) + cth * Delta_theta u
//         + pdx * D_x u + pt * u_t + ptdx * D_x u_t + p0 * u,
// obtained from the metric by dividing by the phi_tt coefficient and
// conjugating with x^{(n-1)/2}. The second-order radial part is kept in flux
// form (b on cells) so that discrete integration by parts is exact; the flux
// commutator is folded into pdx. The elliptic part L_g drops the three
// t-derivative terms.
struct OperatorCoefficients {
  TwistParams params;
  int mode = 0;
  double lambda = 0.0;
  GridPtr grid;
  bool model_only = false;

  // series forms (valid in the chi == 1 zone; used by the peeling engine)
  Series cdd, cth, pdx, pt, ptdx, p0;
  Series boxpg;  // (box_g - mu) phi = boxpg(x) * P u,  boxpg = [1+O(x^2)] x^{(n+3)/2}

  // grid samples
  std::vector<double> b_cell;
  std::vector<double> cth_node, pdx_node, pt_node, ptdx_node, p0_node;
};

// Exact model operator: P u = -u_tt - D*D u + Delta_theta u.
OperatorCoefficients model_operator(const TwistParams& p, int mode,
                                    const GridPtr& grid);

OperatorCoefficients assemble_operator(const MetricSeries& metric,
                                       const TwistParams& p, int mode,
                                       const GridPtr& grid);

// Elliptic part applied to a node function; returns plain node values of
// L_g u (rows 1..N-1; the Dirichlet boundary rows are zero).
GridFunction apply_elliptic(const OperatorCoefficients& oc,
                            const GridFunction& u);

// phi = x^{(n-1)/2} u conversion, either direction.
enum class PhiUDirection { PhiToU, UToPhi };
GridFunction phi_u_transform(const GridFunction& f, PhiUDirection dir,
                             const TwistParams& p);

}  // namespace holowave

#endif
