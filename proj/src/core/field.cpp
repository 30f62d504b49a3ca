#include "field.hpp"

#include <cmath>

namespace holowave {

namespace {

// Gauss-Legendre rule on [-1, 1] by Newton iteration on the recurrence.
void gauss_legendre(int nq, std::vector<double>& c, std::vector<double>& w) {
  c.resize(nq);
  w.resize(nq);
  for (int k = 0; k < nq; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (nq + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= nq; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = nq * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    c[k] = x;
    w[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double sphere_area(int dim) {  // |S^dim|
  return 2.0 * std::pow(M_PI, 0.5 * (dim + 1)) / std::tgamma(0.5 * (dim + 1));
}

}  // namespace

AngularBasis::AngularBasis(int n, int lmax) : n_(n), lmax_(lmax) {
  if (n < 3) fail(ErrorCode::DomainError, "angular basis needs n >= 3");
  if (n == 3) {
    // S^1: even Fourier modes cos(l theta), theta in [0, pi] doubled.
    int nq = std::max(64, 8 * (lmax + 1));
    wq_.resize(nq);
    z_.assign(lmax + 1, std::vector<double>(nq));
    dth_.assign(lmax + 1, std::vector<double>(nq));
    for (int q = 0; q < nq; ++q) {
      double th = M_PI * (q + 0.5) / nq;
      wq_[q] = 2.0 * M_PI / nq;
      z_[0][q] = 1.0 / std::sqrt(2.0 * M_PI);
      for (int l = 1; l <= lmax; ++l) {
        z_[l][q] = std::cos(l * th) / std::sqrt(M_PI);
        dth_[l][q] = -l * std::sin(l * th) / std::sqrt(M_PI);
      }
    }
    return;
  }
  int nq = std::max(48, 4 * lmax + 16);
  std::vector<double> c, glw;
  gauss_legendre(nq, c, glw);
  double omega = sphere_area(n - 3);
  double expo = 0.5 * (n - 4);
  wq_.resize(nq);
  for (int q = 0; q < nq; ++q)
    wq_[q] = omega * glw[q] * std::pow(1.0 - c[q] * c[q], expo);
  // Gegenbauer-type zonal polynomials in cos(theta), orthonormalized against
  // the discrete rule (modified Gram-Schmidt keeps Parseval exact for the
  // product projections). The cos-derivative ladder rides along through the
  // same linear operations, then converts to the polar derivative.
  z_.assign(lmax + 1, std::vector<double>(nq));
  std::vector<std::vector<double>> dc(lmax + 1, std::vector<double>(nq, 0.0));
  double nu = 0.5 * (n - 3);
  // n == 4 degenerates the Gegenbauer recurrence seed (nu = 1/2 is fine);
  // use the generic three-term form with C_1 = 2 nu c replaced by c when
  // nu == 0 is impossible here (n >= 4).
  for (int q = 0; q < nq; ++q) {
    z_[0][q] = 1.0;
    if (lmax >= 1) {
      z_[1][q] = 2.0 * nu * c[q];
      dc[1][q] = 2.0 * nu;
    }
  }
  for (int l = 2; l <= lmax; ++l)
    for (int q = 0; q < nq; ++q) {
      double a1 = 2.0 * (l + nu - 1.0) / l;
      double a2 = (l + 2.0 * nu - 2.0) / l;
      z_[l][q] = a1 * c[q] * z_[l - 1][q] - a2 * z_[l - 2][q];
      dc[l][q] = a1 * (z_[l - 1][q] + c[q] * dc[l - 1][q]) - a2 * dc[l - 2][q];
    }
  for (int l = 0; l <= lmax; ++l) {
    for (int j = 0; j < l; ++j) {
      double d = 0.0;
      for (int q = 0; q < nq; ++q) d += wq_[q] * z_[l][q] * z_[j][q];
      for (int q = 0; q < nq; ++q) {
        z_[l][q] -= d * z_[j][q];
        dc[l][q] -= d * dc[j][q];
      }
    }
    double nrm = 0.0;
    for (int q = 0; q < nq; ++q) nrm += wq_[q] * z_[l][q] * z_[l][q];
    nrm = std::sqrt(nrm);
    for (int q = 0; q < nq; ++q) {
      z_[l][q] /= nrm;
      dc[l][q] /= nrm;
    }
  }
  dth_.assign(lmax + 1, std::vector<double>(nq));
  for (int l = 0; l <= lmax; ++l)
    for (int q = 0; q < nq; ++q)
      dth_[l][q] = -std::sqrt(std::max(0.0, 1.0 - c[q] * c[q])) * dc[l][q];
}

Field Field::zero(GridPtr g, const std::vector<int>& modes, Rep rep) {
  Field f;
  f.grid = g;
  f.modes = modes;
  for (int l : modes)
    f.profiles.push_back(GridFunction(g, l, Centering::Node, rep));
  return f;
}

int Field::find_mode(int l) const {
  for (size_t k = 0; k < modes.size(); ++k)
    if (modes[k] == l) return static_cast<int>(k);
  return -1;
}

Field& Field::operator+=(const Field& o) {
  require_same_grid(grid, o.grid);
  for (size_t k = 0; k < o.modes.size(); ++k) {
    int idx = find_mode(o.modes[k]);
    if (idx < 0) {
      modes.push_back(o.modes[k]);
      profiles.push_back(o.profiles[k]);
    } else {
      profiles[idx] += o.profiles[k];
    }
  }
  return *this;
}

Field& Field::operator-=(const Field& o) {
  Field neg = o;
  neg *= -1.0;
  return (*this += neg);
}

Field& Field::operator*=(double s) {
  for (auto& pr : profiles) pr *= s;
  return *this;
}

double field_norm_l2(const Field& f, const TwistParams& p) {
  double s = 0.0;
  for (const auto& pr : f.profiles) {
    double v = norm_l2(pr, p);
    s += v * v;
  }
  return std::sqrt(s);
}

double field_norm_hm(const Field& f, int m, const TwistParams& p) {
  double s = 0.0;
  for (const auto& pr : f.profiles) s += hm_norm_sq_mode(pr, m, p);
  return std::sqrt(s);
}

double field_norm_hm_a(const Field& f, int m, const TwistParams& p,
                       double a_param) {
  auto lam = [&](int l) { return double(l) * (l + p.n - 3); };
  auto l2_pow_theta = [&](int lpow) {
    double s = 0.0;
    for (size_t k = 0; k < f.profiles.size(); ++k) {
      double v = norm_l2(f.profiles[k], p);
      s += std::pow(lam(f.modes[k]), lpow) * v * v;
    }
    return std::sqrt(s);
  };
  if (m == 0) return l2_pow_theta(0);
  // || D_theta^lpow D_x^(j) w ||, radial ordered derivative of order j.
  auto mixed = [&](int lpow, int j) {
    double s = 0.0;
    for (size_t k = 0; k < f.profiles.size(); ++k) {
      GridFunction d = ordered_twist(j, f.profiles[k], p);
      double v = norm_l2(d, p);
      s += std::pow(lam(f.modes[k]), lpow) * v * v;
    }
    return std::sqrt(s);
  };
  if (m == 1)
    return l2_pow_theta(0) / a_param + mixed(0, 1) + l2_pow_theta(1);
  double total = l2_pow_theta(0) / a_param;
  for (int l = 1; l <= m; ++l)
    total += l2_pow_theta(l) + mixed(l - 1, 1);
  for (int l = 0; l <= m - 2; ++l)
    total += std::pow(a_param, m - l - 2) * mixed(l, m - l);
  return total;
}

double weighted_norm(const Field& f, NormKind kind, int m,
                     const TwistParams& p) {
  switch (kind) {
    case NormKind::L2: return field_norm_l2(f, p);
    case NormKind::Hm: return field_norm_hm(f, m, p);
    case NormKind::Hm_a: return field_norm_hm_a(f, m, p, p.a);
  }
  return 0.0;
}

double field_norm_linf(const Field& f, const TwistParams& p) {
  // Mode-sum bound evaluated pointwise in x over tracked modes; exact for a
  // single mode up to the basis sup.
  double s = 0.0;
  for (const auto& pr : f.profiles) s += norm_linf(pr, p);
  return s;
}

std::vector<double> field_values_at_node(const Field& f, int i,
                                         const AngularBasis& basis,
                                         const TwistParams& p) {
  std::vector<double> out(basis.qsize(), 0.0);
  for (size_t k = 0; k < f.profiles.size(); ++k) {
    double v = f.profiles[k].plain(i, p.alpha);
    int l = f.modes[k];
    for (int q = 0; q < basis.qsize(); ++q) out[q] += v * basis.value(l, q);
  }
  return out;
}

}  // namespace holowave
