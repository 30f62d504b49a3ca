#ifndef HOLOWAVE_HOLO_HPP
#define HOLOWAVE_HOLO_HPP

#include <optional>
#include <string>

#include "peel.hpp"

namespace holowave {

// Quadratic nonlinearity Q(u,v) = x^{q-(n+3)/2} Gamma_hat g^{mu nu}
// d_mu(x^{(n-1)/2} u) d_nu(x^{(n-1)/2} v).
struct NonlinearitySpec {
  bool enabled = false;
  double q = 0.0;
  Series gamma_hat = Series::constant(1.0);

  void validate(const TwistParams& p) const;
};

// Precomputed inverse-metric arrays and the zonal basis (with polar
// derivatives) for evaluating Q on the grid.
class QContext {
 public:
  QContext(const MetricSeries& metric, const NonlinearitySpec& nl,
           const TwistParams& p, const GridPtr& grid, int lmax);

  // Bilinear evaluation at one time level; inputs carry the time-derivative
  // slot explicitly. Output is mode-projected, detwisted storage.
  Field eval(const Field& u, const Field& ut, const Field& v,
             const Field& vt) const;

  const AngularBasis& basis() const { return basis_; }
  const NonlinearitySpec& spec() const { return nl_; }

 private:
  NonlinearitySpec nl_;
  TwistParams p_;
  GridPtr grid_;
  AngularBasis basis_;
  std::vector<double> sin_q_, dz_;  // dz_[l*Q+q] = dZ_l/dtheta at angle q
  std::vector<double> gtt_, gxx_, gtx_, gth_, pref_;  // node arrays
};

Field eval_Q(const Field& u, const Field& ut, const Field& v, const Field& vt,
             const QContext& ctx);

struct HoloSolution {
  TwistParams params;
  GridPtr grid;
  int k = 0, m = 0;
  double q = 0.0;  // nonlinearity exponent (0 on the linear path)
  PeelResult peel;
  Trajectory remainder;
  std::string repeel_note;  // numeric Q-feedback re-peel, when it fired

  // verification summary
  double boundary_error = 0.0;     // sup_t |extrapolated trace - f|
  double trace_norm_scale = 1.0;   // sup_t |f| for relative reading
  double remainder_trace_sup = 0.0;
  double causality_sup = 0.0;
  bool causality_pass = true;
  bool converged = true;           // nonlinear path
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> contraction_ratios;

  Field total_state(int snap) const;  // layers + remainder, detwisted
  void write_dir(const std::string& dir) const;
};

struct HoloOptions {
  int n_cells = 320;
  GridKind grid_kind = GridKind::Graded;
  double a0_factor = 0.5;
  EvolveOptions evolve;
  int picard_max_iter = 12;
  double picard_tol = 1e-6;
};

HoloSolution solve_linear_ibvp(const BoundaryDatum& f, int k, int m,
                               const MetricSeries& metric,
                               const TwistParams& p, double T,
                               const HoloOptions& opt = {});

HoloSolution solve_nonlinear_ibvp(const BoundaryDatum& f, int k, int m,
                                  const NonlinearitySpec& nl,
                                  const MetricSeries& metric,
                                  const TwistParams& p, double T,
                                  const HoloOptions& opt = {});

// sup over stored times below t0 of the detwisted total-field sup norm.
EstimateReport causality_check(const HoloSolution& sol, double t0);

}  // namespace holowave

#endif
