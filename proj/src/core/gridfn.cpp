#include "gridfn.hpp"

#include <cmath>

namespace holowave {

double rep_exponent(Rep r, double alpha) {
  switch (r) {
    case Rep::Plain: return 0.0;
    case Rep::TwistA: return alpha;
    case Rep::Twist1mA: return 1.0 - alpha;
  }
  return 0.0;
}

GridFunction::GridFunction(GridPtr grid, int mode, Centering c, Rep rep)
    : grid_(std::move(grid)), mode_(mode), centering_(c), rep_(rep) {
  v_.assign(centering_ == Centering::Node ? grid_->nodes() : grid_->cells(),
            0.0);
}

GridFunction GridFunction::node_zero(GridPtr g, double, int mode, Rep rep) {
  return GridFunction(std::move(g), mode, Centering::Node, rep);
}

GridFunction GridFunction::cell_zero(GridPtr g, int mode) {
  return GridFunction(std::move(g), mode, Centering::Cell, Rep::Plain);
}

GridFunction GridFunction::sample_node(GridPtr g, double alpha, int mode,
                                       const std::function<double(double)>& f,
                                       Rep store) {
  GridFunction out(g, mode, Centering::Node, store);
  double e = rep_exponent(store, alpha);
  out.v_[0] = (store == Rep::Plain) ? f(0.0) : 0.0;
  for (int i = 1; i <= g->cells(); ++i)
    out.v_[i] = std::pow(g->x(i), e) * f(g->x(i));
  return out;
}

GridFunction GridFunction::sample_cell(GridPtr g, int mode,
                                       const std::function<double(double)>& f) {
  GridFunction out(g, mode, Centering::Cell, Rep::Plain);
  for (int c = 0; c < g->cells(); ++c) out.v_[c] = f(g->mid(c));
  return out;
}

double GridFunction::plain(int i, double alpha) const {
  if (centering_ == Centering::Cell) return v_[i];
  double e = rep_exponent(rep_, alpha);
  if (i == 0) {
    if (e == 0.0) return v_[0];
    if (v_[0] == 0.0) return 0.0;  // trace-free: limit exists and is 0
    return std::numeric_limits<double>::quiet_NaN();
  }
  return v_[i] * std::pow(grid_->x(i), -e);
}

GridFunction GridFunction::as_rep(Rep target, double alpha) const {
  if (centering_ == Centering::Cell || target == rep_) return *this;
  GridFunction out = *this;
  out.rep_ = target;
  double de = rep_exponent(target, alpha) - rep_exponent(rep_, alpha);
  // Axis node: positive power of x kills any finite value; the singular
  // direction is clamped to the trace-free limit (see header note).
  out.v_[0] = (de > 0.0) ? 0.0 : v_[0];
  if (de < 0.0 && v_[0] != 0.0) out.v_[0] = 0.0;
  for (int i = 1; i < size(); ++i) out.v_[i] = v_[i] * std::pow(grid_->x(i), de);
  return out;
}

bool GridFunction::zero_trace(double alpha, double tol) const {
  if (centering_ != Centering::Node) return false;
  GridFunction w = as_rep(Rep::TwistA, alpha);
  double scale = 0.0;
  for (double v : w.values()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return true;
  return std::abs(w[0]) <= tol * scale && std::abs(w[size() - 1]) <= tol * scale;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_grid(grid_, o.grid_);
  if (centering_ != o.centering_ || rep_ != o.rep_)
    fail(ErrorCode::GridMismatch, "incompatible gridfunction layouts in +=");
  for (int i = 0; i < size(); ++i) v_[i] += o.v_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_same_grid(grid_, o.grid_);
  if (centering_ != o.centering_ || rep_ != o.rep_)
    fail(ErrorCode::GridMismatch, "incompatible gridfunction layouts in -=");
  for (int i = 0; i < size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& v : v_) v *= s;
  return *this;
}

}  // namespace holowave
