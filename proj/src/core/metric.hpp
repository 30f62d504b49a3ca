#ifndef HOLOWAVE_METRIC_HPP
#define HOLOWAVE_METRIC_HPP

#include "grid.hpp"
#include "report.hpp"
#include "series.hpp"

namespace holowave {

// Metric on an asymptotically AdS patch, stored as the conformally rescaled
// components x^2 g_{..} (truncated power series in x). The theta block is
// isotropic: g_{theta theta} = x^{-2} * ThTh(x) * (unit-sphere metric).
struct MetricSeries {
  int n = 4;
  int order = 6;  // declared series order K
  bool time_dependent = false;  // stationary in v1
  Series tt, tx, xx, thth, tth, xth;

  bool has_angular_cross() const {
    return !tth.is_zero(1e-14) || !xth.is_zero(1e-14);
  }
};

// Exact AdS metric in the x coordinate:
//   g = [-(1+x^2)^2 dt^2 + dx^2 + (1-x^2)^2 g_{S^{n-2}}] / x^2.
MetricSeries ads_metric(int n, int order = 6);

// x(r) = (2 cosh(r/2) - 1)^{-1/2} and its inverse.
double coordinate_map_forward(double r);
double coordinate_map_inverse(double x);

// Checks the asymptotic template: pole normalization (+-x^{-2} with unit
// coefficient on tt/xx/thth), a free constant term on the diagonal
// components, and decay orders of the remainders:
//   tt remainder O(x^2), xx and thth remainders O(x), tx O(x), t-theta O(x),
//   x-theta O(x^2) (the off-diagonal components admit no pole or constant).
// Also samples the series on the grid and verifies Lorentzian signature.
// Report rows: (component, required_order, fitted_slope); ratio stored as
// required - fitted so pass means sup_ratio <= 0.1.
EstimateReport aads_decay_check(const MetricSeries& metric, const GridPtr& grid);

}  // namespace holowave

#endif
