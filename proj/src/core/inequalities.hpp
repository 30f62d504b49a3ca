#ifndef HOLOWAVE_INEQUALITIES_HPP
#define HOLOWAVE_INEQUALITIES_HPP

#include <functional>
#include <string>
#include <vector>

#include "field.hpp"
#include "report.hpp"

namespace holowave {

// A scan family member is given in the scaled variable xi = x/a so that the
// same shape is meaningful across patch widths.
struct ScanFamily {
  std::string name;
  std::function<double(double)> f;  // f(xi), xi in (0, 1]
  bool zero_trace = false;          // include in the L2/H1 Poincare row
};

std::vector<ScanFamily> default_hardy_family(double alpha);

// Ratio scans for the mapping inequalities of the operators A and A* (the
// four weighted bounds plus the Poincare-type row ||v|| <= c a ||D_x v||).
// Inequality row codes: 0 AL2, 1 ALinf, 2 A*L2, 3 A*Linf, 4 L2H1.
// pass = every ratio finite and, per inequality, the sup over the family
// varies by less than rel_stability as a halves.
EstimateReport hardy_report(const std::vector<ScanFamily>& family, double s,
                            double r, const std::vector<double>& a_list,
                            int n, double mu, int n_cells = 400,
                            double rel_stability = 0.05);

// Weighted product bound: || x^eta D^(k1) Dth^(j1) u1 . D^(k2) Dth^(j2) u2 ||
// over ||u1||_Hm ||u2||_Hm, evaluated on the cell grid x the polar
// quadrature of the zonal basis.
double moser_ratio(const Field& u1, const Field& u2, int m, int k1, int j1,
                   int k2, int j2, const TwistParams& p,
                   const AngularBasis& basis);

EstimateReport moser_report(const std::vector<Field>& samples, int m,
                            int k1, int j1, int k2, int j2,
                            const TwistParams& p, const AngularBasis& basis,
                            double bound);

double moser_eta(double alpha);

}  // namespace holowave

#endif
