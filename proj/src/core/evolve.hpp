#ifndef HOLOWAVE_EVOLVE_HPP
#define HOLOWAVE_EVOLVE_HPP

#include <functional>
#include <optional>

#include "elliptic.hpp"
#include "field.hpp"

namespace holowave {

// Snapshot trajectory of the first-order system (w, w_t) in detwisted
// storage. Snapshot s holds all tracked modes at times[s].
struct Trajectory {
  GridPtr grid;
  TwistParams params;
  std::vector<int> modes;
  double dt = 0.0;
  int stride = 1;
  std::vector<double> times;
  std::vector<std::vector<std::vector<double>>> w;  // [snap][mode][node]
  std::vector<std::vector<std::vector<double>>> v;

  int snapshots() const { return static_cast<int>(times.size()); }
  Field state(int snap) const;
  Field state_dt(int snap) const;
  // index of the snapshot closest to t
  int snap_near(double t) const;
};

// Source callback: fills the detwisted interior values of F (from P_g u = F)
// for the given mode index at time t.
using SourceFn =
    std::function<void(double t, int mode_index, std::vector<double>& Fw)>;

struct EvolveOptions {
  double dt = 0.0;   // 0: pick from the CFL bound
  double cfl = 0.9;  // fraction of the RK4 stability limit
  int stride = 8;    // snapshot every `stride` steps
};

// Method-of-lines RK4 evolution of P_g u = F with zero-trace Dirichlet
// conditions. The spatial operator is the exact-adjoint flux form, so the
// model-operator energy is conserved to integrator order when F = 0.
Trajectory evolve(const Field& u0, const Field& u1, const SourceFn& F,
                  const std::vector<OperatorCoefficients>& ocs, double T,
                  const EvolveOptions& opt = {});

// Largest stable time step for the assembled systems.
double cfl_dt(const std::vector<OperatorCoefficients>& ocs, double cfl = 0.9);

// Energy quadratic form (Eq-level: v_t^2 + b (D_x v)^2 + angular part,
// against x dx / a^2).
double energy_quadratic(const Field& w, const Field& wt,
                        const std::vector<OperatorCoefficients>& ocs);

struct EnergyReport {
  std::vector<double> times;
  std::vector<double> E;
  std::vector<double> source_l2;            // ||F(t)||_{L2}
  std::vector<std::vector<double>> towers;  // E_k rows, k = 0..kmax
  std::vector<double> em;                   // e_m(t)
  double fitted_c = 0.0;
  std::string to_csv() const;
};

EnergyReport energy_series(const Trajectory& traj,
                           const std::vector<OperatorCoefficients>& ocs,
                           const SourceFn* src = nullptr);

// E_k(t) = sum_{j<=k} E[d_t^j v](t) via 4th-order differences on the stored
// history, and e_m(t) with the ordered-derivative ladder; also records the
// equivalence ratios e_m vs ||v||_{H^{m+1}}^2 + ||v_t||_{H^m}^2.
EnergyReport energy_tower(const Trajectory& traj, int k, int m,
                          const std::vector<OperatorCoefficients>& ocs,
                          std::vector<double>* em_equiv_ratios = nullptr);

// Fits the smallest c with E^(1/2)(t) <= exp(c a t) (E^(1/2)(0) +
// int_0^t ||F||); pass iff the inequality then holds with margin.
EstimateReport gronwall_check(const EnergyReport& rep, const TwistParams& p);

// Compatibility functions v_j = d_t^j v(0), j = 2..m, from the recursion
// v_{j+2} = L_g v_j + pt v_{j+1} + ptdx D_x v_{j+1} - d_t^j F(0).
// time_deriv_source(j) must return d_t^j F(0); zero_trace_flags records the
// H^1_0 admissibility of each returned function.
std::vector<Field> compatibility(
    const Field& v0, const Field& v1,
    const std::function<Field(int)>& time_deriv_source, int m,
    const std::vector<OperatorCoefficients>& ocs,
    std::vector<bool>* zero_trace_flags = nullptr);

// Spectral (eigenmode-expansion) evolution of the self-adjoint part with
// F = 0; used to cross-validate the finite-difference path.
Trajectory evolve_galerkin(const Field& u0, const Field& u1,
                           const std::vector<OperatorCoefficients>& ocs,
                           double T, int count, int snapshots);

}  // namespace holowave

#endif
