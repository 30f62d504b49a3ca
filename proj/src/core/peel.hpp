#ifndef HOLOWAVE_PEEL_HPP
#define HOLOWAVE_PEEL_HPP

#include "evolve.hpp"
#include "opcoeffs.hpp"
#include "profile.hpp"

namespace holowave {

// Smooth cutoff, identically 1 on [0, a0/2] and 0 beyond a0, with closed
// first and second derivatives (evaluated in Taylor mode).
struct Cutoff {
  double a0 = 0.0;
  double chi(double x) const;
  double dchi(double x) const;
  double d2chi(double x) const;

 private:
  void taylor3(double x, double out[3]) const;
};

// One peeled layer: chi(x) x^{-alpha+j} (log x)^log_power H(t) with
// H(t) = sum_d combo[d] f^{(d)}(t). H depends on at most 2j derivatives of
// the datum, so layers inherit its temporal support (causality).
struct ExpansionLayer {
  int mode = 0;
  int j = 0;
  int log_power = 0;
  std::vector<std::pair<int, double>> combo;

  double eval_H(const TimeProfile& f, double t) const;
};

// Symbolic residual term c x^{-alpha+j} (log x)^p f^{(d)}(t).
struct PeelTerm {
  int j;
  int logp;
  int d;
  double c;
};

struct ModePeel {
  int mode = 0;
  double lambda = 0.0;
  TimeProfile profile;
  std::vector<ExpansionLayer> layers;
  std::vector<PeelTerm> residual;  // -P(sum of layers), valid where chi == 1
};

class PeelResult {
 public:
  TwistParams params;
  GridPtr grid;
  int k = 0;
  Cutoff cutoff;
  std::vector<ModePeel> modes;
  // shared operator series (chi == 1 zone)
  Series cdd, cth, pdx, pt, ptdx, p0;

  // sum of cutoff layers at time t (or its tderiv-th time derivative),
  // detwisted storage
  Field layer_sum(double t, int tderiv = 0) const;
  // detwisted source values F_w = x^alpha Ftilde(x, t) with
  // Ftilde = -P_g(sum of cutoff layers); this is the source for the
  // homogeneous remainder problem P_g psi = Ftilde.
  void residual_w(double t, int mode_index, std::vector<double>& Fw) const;
  SourceFn source() const;
  // plain values of Ftilde at time t for one mode
  GridFunction residual_field(double t, int mode_index) const;
  int max_log_power_at_leading_order(int mode_index) const;
};

// Peeling to depth k: constructs layers x^{-alpha+j}(log x)^p H_j that
// cancel every residual order below x^{-alpha+2k-2}. Resonant steps
// (j == 2 alpha) emit log layers. The operator series are taken from `op`
// (its mode index is ignored; the angular eigenvalue enters per datum mode).
PeelResult peel(const BoundaryDatum& f, int k, const OperatorCoefficients& op,
                const TwistParams& p, const GridPtr& grid,
                double a0_factor = 0.5);

// Evaluates the layer sum of `pr` on its grid at time t.
Field layer_eval(const PeelResult& pr, double t);

// Decay order of the residual at the probe time: fitted slope of
// log|Ftilde| vs log x (log-corrected when resonant layers are present).
// Pass iff slope >= -alpha + 2k - 2 - 0.1.
EstimateReport residual_slope(const PeelResult& pr, double t_probe,
                              double x_lo, double x_hi);

}  // namespace holowave

#endif
