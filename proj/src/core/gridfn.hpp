#ifndef HOLOWAVE_GRIDFN_HPP
#define HOLOWAVE_GRIDFN_HPP

#include <functional>
#include <limits>
#include <vector>

#include "grid.hpp"

namespace holowave {

enum class Centering { Node, Cell };

// Storage representation of a node function u(x):
//   Plain      values[i] = u(x_i)
//   TwistA     values[i] = x_i^alpha * u(x_i)         (detwisted, zero-trace)
//   Twist1mA   values[i] = x_i^(1-alpha) * u(x_i)     (adjoint-side detwist)
// The twisted representations are the smooth objects near x = 0; the plain
// values of the singular branches x^{-alpha} and x^{alpha-1} do not exist at
// the axis node. Cell functions are always stored plain (midpoints stay away
// from the axis).
enum class Rep { Plain, TwistA, Twist1mA };

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridPtr grid, int mode, Centering c, Rep rep = Rep::Plain);

  static GridFunction node_zero(GridPtr g, double alpha, int mode = 0,
                                Rep rep = Rep::TwistA);
  static GridFunction cell_zero(GridPtr g, int mode = 0);
  // Samples f at the positive nodes (and takes the x->0 limit slot to be
  // f(0) if rep is Plain, 0 otherwise).
  static GridFunction sample_node(GridPtr g, double alpha, int mode,
                                  const std::function<double(double)>& f,
                                  Rep store = Rep::Plain);
  static GridFunction sample_cell(GridPtr g, int mode,
                                  const std::function<double(double)>& f);

  const GridPtr& grid() const { return grid_; }
  int mode() const { return mode_; }
  Centering centering() const { return centering_; }
  Rep rep() const { return rep_; }
  int size() const { return static_cast<int>(v_.size()); }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  // Plain sample at entry i. For singular branches at the axis node this is
  // the continuous limit when it exists and NaN otherwise; all quadrature
  // skips the axis node.
  double plain(int i, double alpha) const;
  GridFunction as_rep(Rep target, double alpha) const;

  bool zero_trace(double alpha, double tol = 1e-9) const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double s);

 private:
  GridPtr grid_;
  int mode_ = 0;
  Centering centering_ = Centering::Node;
  Rep rep_ = Rep::Plain;
  std::vector<double> v_;
};

double rep_exponent(Rep r, double alpha);

}  // namespace holowave

#endif
