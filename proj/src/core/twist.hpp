#ifndef HOLOWAVE_TWIST_HPP
#define HOLOWAVE_TWIST_HPP

#include "gridfn.hpp"

namespace holowave {

// Twisted derivative D_x u = x^{-alpha} d/dx (x^alpha u), staggered: node
// input, cell output. Exact on the kernel x^{-alpha} by construction.
GridFunction twist_d(const GridFunction& u, const TwistParams& p);

// Formal adjoint D_x* = -x^{alpha-1} d/dx (x^{1-alpha} .). Two samplings of
// the same operator:
//   node input  -> cell output (detwisted difference of x^{1-alpha} v);
//   cell input  -> node output (dual-grid form; this is the realization that
//                  is quadrature-adjoint to twist_d on zero-trace data).
// Both annihilate x^{alpha-1} identically.
GridFunction twist_d_star(const GridFunction& v, const TwistParams& p);

// A phi = x^{-alpha} int_0^x y^alpha phi(y) dy, cell input, node output.
// Built from the cumulative midpoint sums that make twist_d(op_A(phi)) = phi
// exact at the discrete level.
GridFunction op_A(const GridFunction& phi, const TwistParams& p);

// A* phi = x^{alpha-1} int_x^a y^{1-alpha} phi(y) dy, cell input, node
// output; A*phi(a) = 0 exactly and twist_d_star(op_A_star(phi)) = phi.
GridFunction op_A_star(const GridFunction& phi, const TwistParams& p);

// Ordered twisted derivative D_x^(m): (D*D)^(m/2) for even m,
// D (D*D)^((m-1)/2) for odd m. Even orders land on nodes, odd on cells.
GridFunction ordered_twist(int m, const GridFunction& u, const TwistParams& p);

// Quadrature inner product against x dx (fixed linear weights; the axis node
// carries zero weight).
double ip_weighted(const GridFunction& f, const GridFunction& g,
                   const TwistParams& p);

// L2(x dx) norm with the first-cell power-law refinement: the exponent of the
// integrand near the axis is estimated from the two innermost samples and the
// cell (0, m_0) is integrated exactly against that power.
double norm_l2(const GridFunction& f, const TwistParams& p);
double norm_linf(const GridFunction& f, const TwistParams& p);

// Squared twisted Sobolev norm of a single-mode radial profile, recursively
//   |u|_{H^m}^2 = (1 + lambda) |u|_{H^{m-1}}^2 + |D^(m) u|_{L2}^2,
// lambda = l(l+n-3) the -Delta_theta eigenvalue of the mode.
double hm_norm_sq_mode(const GridFunction& u, int m, const TwistParams& p);

// Least-squares slope of log|u| against log x over the window. With
// log_power > 0 the fit removes a known (log x)^p factor first.
double decay_slope(const GridFunction& u, double x_lo, double x_hi,
                   const TwistParams& p, int log_power = 0);

int min_cells_for_order(int m);

}  // namespace holowave

#endif
