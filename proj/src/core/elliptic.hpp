#ifndef HOLOWAVE_ELLIPTIC_HPP
#define HOLOWAVE_ELLIPTIC_HPP

#include <functional>

#include "opcoeffs.hpp"
#include "report.hpp"

namespace holowave {

// Tridiagonal system for one mode: rows are the detwisted residual
// x^alpha (-L_g u) at interior nodes, unknowns are the detwisted values
// W_i = x_i^alpha u(x_i), i = 1..N-1, with W_0 = W_N = 0. The flux part is
// symmetric positive definite in the detwisted quadrature inner product;
// the sampled first- and zeroth-order corrections are folded in exactly.
class EllipticSystem {
 public:
  explicit EllipticSystem(const OperatorCoefficients& oc);

  const OperatorCoefficients& coefficients() const { return *oc_; }
  int dofs() const { return n_; }

  // y = M w on interior dofs (w indexed 1..N-1 as a dense vector of size n_).
  std::vector<double> apply(const std::vector<double>& w) const;
  // Solves M w = rhs; factors lazily. Throws SingularSystem with the pivot.
  std::vector<double> solve(const std::vector<double>& rhs) const;
  double min_pivot() const { return min_pivot_; }

  // Ratio of the correction rows to the model rows (NotSmallEnough proxy).
  double correction_ratio() const { return correction_ratio_; }

  // Detwisted L2 weight per interior dof.
  const std::vector<double>& wl() const { return wl_; }
  const std::vector<double>& diag() const { return d_; }
  const std::vector<double>& lower() const { return dl_; }
  const std::vector<double>& upper() const { return du_; }

 private:
  void factor() const;

  const OperatorCoefficients* oc_;
  int n_ = 0;
  std::vector<double> dl_, d_, du_;  // tridiagonal bands of M
  std::vector<double> wl_;
  double correction_ratio_ = 0.0;

  // partial-pivoting LU storage (one extra superdiagonal)
  mutable bool factored_ = false;
  mutable std::vector<double> fl_, fd_, fu_, fu2_;
  mutable std::vector<int> piv_;
  mutable double min_pivot_ = 0.0;
};

// Solves L_g w = F with zero-trace Dirichlet conditions; returns w in
// detwisted storage. Throws NotSmallEnough when the correction rows are not
// dominated by the model part.
GridFunction solve_elliptic(const GridFunction& F,
                            const OperatorCoefficients& oc,
                            double smallness_threshold = 0.5);

double elliptic_residual(const OperatorCoefficients& oc, const GridFunction& w,
                         const GridFunction& F);

// Lowest `count` eigenpairs of the self-adjoint part (flux + angular terms,
// corrections dropped), ascending, eigenfields quadrature-orthonormal.
std::vector<std::pair<double, GridFunction>> eigenmodes(
    const OperatorCoefficients& oc, int count);

// Scan of || w ||_{H^{m+2}_a} / || F ||_{H^m_1} over a family and widths.
// family members are given in the scaled variable xi = x/a per mode.
struct EllipticFamilyMember {
  std::string name;
  std::vector<int> modes;
  std::function<double(double, int)> f;  // f(xi, mode)
};

EstimateReport elliptic_ratio(int m, const std::vector<EllipticFamilyMember>& family,
                              const std::vector<double>& a_list,
                              const MetricSeries& metric, int n, double mu,
                              int n_cells = 320, double rel_stability = 0.05);

}  // namespace holowave

#endif
