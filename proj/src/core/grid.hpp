#ifndef HOLOWAVE_GRID_HPP
#define HOLOWAVE_GRID_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "errors.hpp"

namespace holowave {

// Global analytic parameters: dimension n, mass mu, derived exponent alpha,
// patch width a.
struct TwistParams {
  int n = 4;
  double mu = 0.0;
  double alpha = 1.5;
  double a = 1.0;

  static TwistParams make(int n, double mu, double a);
};

// alpha = sqrt(((n-1)/2)^2 + mu); throws BelowThreshold if the argument of
// the square root is not positive.
double alpha_from_mu(int n, double mu);

enum class GridKind { Uniform, Graded };

// Radial mesh on [0, a]. Nodes x[0] = 0 < x[1] < ... < x[N] = a carry the
// field degrees of freedom; cell midpoints m[c] = (x[c] + x[c+1])/2 carry
// first twisted derivatives. The measure is x dx throughout, for which the
// per-cell weight h*m is exact.
class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> make(int n_cells, double a,
                                                GridKind kind = GridKind::Graded,
                                                double x_min_factor = 1e-4,
                                                double grading_ratio = 1.05);

  int cells() const { return N_; }
  int nodes() const { return N_ + 1; }
  double width() const { return a_; }
  GridKind kind() const { return kind_; }
  std::uint64_t id() const { return id_; }

  double x(int i) const { return x_[i]; }          // node, 0..N
  double mid(int c) const { return m_[c]; }        // cell, 0..N-1
  double h(int c) const { return h_[c]; }          // cell width
  double cell_weight(int c) const { return wC_[c]; }  // exact int x dx
  double node_weight(int i) const { return wN_[i]; }  // dual-cell, x dx
  double dual_len(int i) const { return ell_[i]; }    // dual-cell length

  const std::vector<double>& nodes_x() const { return x_; }
  const std::vector<double>& mids() const { return m_; }

  double min_h() const { return min_h_; }

 private:
  RadialGrid() = default;

  int N_ = 0;
  double a_ = 0.0;
  GridKind kind_ = GridKind::Graded;
  std::uint64_t id_ = 0;
  std::vector<double> x_, m_, h_, wC_, wN_, ell_;
  double min_h_ = 0.0;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (!a || !b || a->id() != b->id())
    fail(ErrorCode::GridMismatch, "operands live on different radial grids");
}

}  // namespace holowave

#endif
