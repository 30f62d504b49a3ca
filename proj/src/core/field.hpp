#ifndef HOLOWAVE_FIELD_HPP
#define HOLOWAVE_FIELD_HPP

#include <functional>
#include <vector>

#include "gridfn.hpp"
#include "twist.hpp"

namespace holowave {

// Orthonormal zonal (axisymmetric) basis on S^{n-2}: degree-l zonal
// harmonics with -Delta_theta eigenvalue l(l+n-3), tabulated on a polar
// quadrature rule. Fields stay mode-decomposed everywhere; the tabulated
// values are used only where genuine products of fields are required
// (Moser scans, the quadratic nonlinearity).
class AngularBasis {
 public:
  AngularBasis(int n, int lmax);

  int n() const { return n_; }
  int lmax() const { return lmax_; }
  double lambda(int l) const { return double(l) * (l + n_ - 3); }

  int qsize() const { return static_cast<int>(wq_.size()); }
  double value(int l, int q) const { return z_[l][q]; }
  // d Z_l / d theta at the quadrature angle (polar derivative)
  double dvalue(int l, int q) const { return dth_[l][q]; }
  double qweight(int q) const { return wq_[q]; }  // integrates over S^{n-2}

 private:
  int n_;
  int lmax_;
  std::vector<double> wq_;
  std::vector<std::vector<double>> z_;
  std::vector<std::vector<double>> dth_;
};

// Multi-mode field: one radial profile per tracked zonal mode.
struct Field {
  GridPtr grid;
  std::vector<int> modes;               // ascending mode indices l
  std::vector<GridFunction> profiles;   // node functions, matching order

  static Field zero(GridPtr g, const std::vector<int>& modes,
                    Rep rep = Rep::TwistA);
  int find_mode(int l) const;  // -1 if absent

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
};

enum class NormKind { L2, Hm, Hm_a };

double field_norm_l2(const Field& f, const TwistParams& p);
// Twisted Sobolev norm built by the recursive definition.
double field_norm_hm(const Field& f, int m, const TwistParams& p);
// a-scaled norm; pass a_param = 1 for the H^m_1 variant.
double field_norm_hm_a(const Field& f, int m, const TwistParams& p,
                       double a_param);
double weighted_norm(const Field& f, NormKind kind, int m,
                     const TwistParams& p);

double field_norm_linf(const Field& f, const TwistParams& p);

// Samples u(x, theta) -> sum_l coeff_l(x) Z_l on quadrature angles at node i.
std::vector<double> field_values_at_node(const Field& f, int i,
                                         const AngularBasis& basis,
                                         const TwistParams& p);

}  // namespace holowave

#endif
