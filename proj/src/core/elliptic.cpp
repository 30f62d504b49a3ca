#include "elliptic.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace holowave {

EllipticSystem::EllipticSystem(const OperatorCoefficients& oc) : oc_(&oc) {
  const auto& g = oc.grid;
  const TwistParams& p = oc.params;
  const double al = p.alpha;
  const int N = g->cells();
  n_ = N - 1;
  dl_.assign(n_, 0.0);
  d_.assign(n_, 0.0);
  du_.assign(n_, 0.0);
  wl_.assign(n_, 0.0);

  // kappa_c = b_c m_c^{1-2alpha} / h_c  (flux conductance per cell)
  std::vector<double> kappa(N);
  for (int c = 0; c < N; ++c)
    kappa[c] = oc.b_cell[c] * std::pow(g->mid(c), 1.0 - 2.0 * al) / g->h(c);

  double corr_max = 0.0, model_min = 1e300;
  for (int i = 1; i < N; ++i) {
    int k = i - 1;  // dense index
    double x = g->x(i);
    double xa = std::pow(x, al);
    double x2a1 = std::pow(x, 2.0 * al - 1.0);
    double ell = g->dual_len(i);
    wl_[k] = std::pow(x, 1.0 - 2.0 * al) * ell;

    // model flux part of M = -L_g
    double fl = x2a1 * kappa[i - 1] / ell;
    double fu = x2a1 * kappa[i] / ell;
    d_[k] += fl + fu;
    if (i > 1) dl_[k] -= fl;
    if (i < N - 1) du_[k] -= fu;

    // angular term + lambda * cth
    double ang = oc.lambda * oc.cth_node[i];
    d_[k] += ang;

    // corrections: -pdx * avg(D_x u) - p0 * u (rows of -L_g)
    double cm = std::pow(g->mid(i - 1), -al) / (2.0 * g->h(i - 1));
    double cp = std::pow(g->mid(i), -al) / (2.0 * g->h(i));
    double pdx = oc.pdx_node[i] * xa;
    // avg(Du)_i = cm (W_i - W_{i-1}) + cp (W_{i+1} - W_i)
    d_[k] -= pdx * (cm - cp) + oc.p0_node[i];
    if (i > 1) dl_[k] -= -pdx * cm;
    if (i < N - 1) du_[k] -= pdx * cp;

    double corr = std::abs(pdx) * (cm + cp) + std::abs(oc.p0_node[i]) +
                  oc.lambda * std::abs(oc.cth_node[i] - oc.cth_node[N]);
    corr_max = std::max(corr_max, corr / (fl + fu + std::abs(ang) + 1e-300));
    model_min = std::min(model_min, fl + fu);
  }
  (void)model_min;
  correction_ratio_ = corr_max;
}

std::vector<double> EllipticSystem::apply(const std::vector<double>& w) const {
  std::vector<double> y(n_, 0.0);
  for (int k = 0; k < n_; ++k) {
    y[k] = d_[k] * w[k];
    if (k > 0) y[k] += dl_[k] * w[k - 1];
    if (k + 1 < n_) y[k] += du_[k] * w[k + 1];
  }
  return y;
}

void EllipticSystem::factor() const {
  // LU with partial pivoting for tridiagonal systems (dgtsv layout: one
  // fill-in superdiagonal).
  fl_ = dl_;
  fd_ = d_;
  fu_ = du_;
  fu2_.assign(std::max(0, n_ - 2), 0.0);
  piv_.assign(n_, 0);
  min_pivot_ = 1e300;
  for (int k = 0; k + 1 < n_; ++k) {
    double sub = fl_[k + 1];
    if (std::abs(fd_[k]) >= std::abs(sub)) {
      piv_[k] = 0;
      if (fd_[k] == 0.0) fail(ErrorCode::SingularSystem, "zero pivot");
      double mlt = sub / fd_[k];
      fl_[k + 1] = mlt;
      fd_[k + 1] -= mlt * fu_[k];
      if (k + 2 < n_) {
        // fu2 stays zero in the no-swap branch
      }
    } else {
      piv_[k] = 1;
      double mlt = fd_[k] / sub;
      fd_[k] = sub;
      fl_[k + 1] = mlt;
      double tmp = fd_[k + 1];
      fd_[k + 1] = fu_[k] - mlt * tmp;
      fu_[k] = tmp;
      if (k + 2 < n_) {
        fu2_[k] = fu_[k + 1];
        fu_[k + 1] = -mlt * fu2_[k];
      }
    }
    min_pivot_ = std::min(min_pivot_, std::abs(fd_[k]));
  }
  min_pivot_ = std::min(min_pivot_, std::abs(fd_[n_ - 1]));
  double scale = 0.0;
  for (int k = 0; k < n_; ++k) scale = std::max(scale, std::abs(d_[k]));
  if (min_pivot_ <= 1e-14 * scale)
    fail(ErrorCode::SingularSystem,
         "near-singular system, smallest pivot " + fmt17(min_pivot_));
  factored_ = true;
}

std::vector<double> EllipticSystem::solve(const std::vector<double>& rhs) const {
  if (!factored_) factor();
  std::vector<double> x = rhs;
  for (int k = 0; k + 1 < n_; ++k) {
    if (piv_[k] == 0) {
      x[k + 1] -= fl_[k + 1] * x[k];
    } else {
      double tmp = x[k];
      x[k] = x[k + 1];
      x[k + 1] = tmp - fl_[k + 1] * x[k];
    }
  }
  x[n_ - 1] /= fd_[n_ - 1];
  if (n_ >= 2)
    x[n_ - 2] = (x[n_ - 2] - fu_[n_ - 2] * x[n_ - 1]) / fd_[n_ - 2];
  for (int k = n_ - 3; k >= 0; --k) {
    double s = x[k] - fu_[k] * x[k + 1];
    if (k < (int)fu2_.size() && fu2_[k] != 0.0) s -= fu2_[k] * x[k + 2];
    x[k] = s / fd_[k];
  }
  return x;
}

GridFunction solve_elliptic(const GridFunction& F,
                            const OperatorCoefficients& oc,
                            double smallness_threshold) {
  require_same_grid(F.grid(), oc.grid);
  EllipticSystem sys(oc);
  if (sys.correction_ratio() > smallness_threshold)
    fail(ErrorCode::NotSmallEnough,
         "correction terms are not dominated by the model part (ratio " +
             fmt17(sys.correction_ratio()) + "); reduce the patch width");
  const auto& g = oc.grid;
  const double al = oc.params.alpha;
  int N = g->cells();
  GridFunction Fw = F.as_rep(Rep::TwistA, al);
  std::vector<double> rhs(N - 1);
  for (int i = 1; i < N; ++i) rhs[i - 1] = -Fw[i];  // M = -L_g
  std::vector<double> w = sys.solve(rhs);
  GridFunction out(g, oc.mode, Centering::Node, Rep::TwistA);
  for (int i = 1; i < N; ++i) out[i] = w[i - 1];
  out[0] = 0.0;
  out[N] = 0.0;
  return out;
}

double elliptic_residual(const OperatorCoefficients& oc, const GridFunction& w,
                         const GridFunction& F) {
  EllipticSystem sys(oc);
  const auto& g = oc.grid;
  const double al = oc.params.alpha;
  int N = g->cells();
  GridFunction Ww = w.as_rep(Rep::TwistA, al);
  GridFunction Fw = F.as_rep(Rep::TwistA, al);
  std::vector<double> wi(N - 1);
  for (int i = 1; i < N; ++i) wi[i - 1] = Ww[i];
  std::vector<double> y = sys.apply(wi);
  double num = 0.0, den = 0.0;
  for (int i = 1; i < N; ++i) {
    double r = y[i - 1] + Fw[i];
    num += sys.wl()[i - 1] * r * r;
    den += sys.wl()[i - 1] * Fw[i] * Fw[i];
  }
  return std::sqrt(num / (den + 1e-300));
}

std::vector<std::pair<double, GridFunction>> eigenmodes(
    const OperatorCoefficients& oc, int count) {
  const auto& g = oc.grid;
  const TwistParams& p = oc.params;
  const double al = p.alpha;
  const int N = g->cells();
  if (count > N / 4)
    fail(ErrorCode::DomainError, "eigenmode count must be <= N/4");
  if (N > 2000)
    fail(ErrorCode::ConvergenceFailure,
         "dense eigensolve supports at most 2000 cells");

  std::vector<double> kappa(N);
  for (int c = 0; c < N; ++c)
    kappa[c] = oc.b_cell[c] * std::pow(g->mid(c), 1.0 - 2.0 * al) / g->h(c);
  std::vector<double> wl(N - 1);
  for (int i = 1; i < N; ++i)
    wl[i - 1] = std::pow(g->x(i), 1.0 - 2.0 * al) * g->dual_len(i);

  // Symmetrized flux + angular matrix: B = D^{ -1/2} T D^{-1/2} with
  // T_ij = wl_i M_ij symmetric.
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N - 1, N - 1);
  for (int i = 1; i < N; ++i) {
    int k = i - 1;
    double x2a1 = std::pow(g->x(i), 2.0 * al - 1.0);
    double ell = g->dual_len(i);
    double diag = x2a1 * (kappa[i - 1] + kappa[i]) / ell +
                  oc.lambda * oc.cth_node[i];
    B(k, k) = diag;
    if (i < N - 1) {
      double off = -std::pow(g->x(i + 1), 2.0 * al - 1.0) * kappa[i] /
                   g->dual_len(i + 1);
      // symmetrize: B_{k,k+1} = M_{k,k+1} sqrt(wl_k / wl_{k+1}) etc.
      double offsym = -x2a1 * kappa[i] / ell * std::sqrt(wl[k] / wl[k + 1]);
      (void)off;
      B(k, k + 1) = offsym;
      B(k + 1, k) = offsym;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::ConvergenceFailure, "dense eigensolve failed");

  std::vector<std::pair<double, GridFunction>> out;
  for (int k = 0; k < count; ++k) {
    GridFunction phi(g, oc.mode, Centering::Node, Rep::TwistA);
    for (int i = 1; i < N; ++i)
      phi[i] = es.eigenvectors()(i - 1, k) / std::sqrt(wl[i - 1]);
    phi[0] = 0.0;
    phi[N] = 0.0;
    out.emplace_back(es.eigenvalues()(k), std::move(phi));
  }
  return out;
}

EstimateReport elliptic_ratio(int m,
                              const std::vector<EllipticFamilyMember>& family,
                              const std::vector<double>& a_list,
                              const MetricSeries& metric, int n, double mu,
                              int n_cells, double rel_stability) {
  EstimateReport rep;
  rep.name = "elliptic";
  rep.param_names = {"a", "family", "ratio_index"};
  rep.a_values = a_list;

  std::vector<double> sup_per_a;
  for (double a : a_list) {
    TwistParams p = TwistParams::make(n, mu, a);
    auto g = RadialGrid::make(n_cells, a, GridKind::Graded);
    double sup = 0.0;
    for (size_t kf = 0; kf < family.size(); ++kf) {
      const auto& fam = family[kf];
      Field F;
      F.grid = g;
      Field w;
      w.grid = g;
      for (int l : fam.modes) {
        TwistParams pm = p;
        OperatorCoefficients oc = assemble_operator(metric, pm, l, g);
        GridFunction Fl = GridFunction::sample_node(
            g, p.alpha, l, [&](double x) { return fam.f(x / a, l); },
            Rep::Plain);
        GridFunction wl = solve_elliptic(Fl, oc);
        F.modes.push_back(l);
        F.profiles.push_back(Fl);
        w.modes.push_back(l);
        w.profiles.push_back(wl);
      }
      double num = field_norm_hm_a(w, m + 2, p, a);
      double den = field_norm_hm_a(F, m, p, 1.0);
      double ratio = num / (den + 1e-300);
      rep.add({a, double(kf), 0.0}, ratio);
      sup = std::max(sup, ratio);
    }
    sup_per_a.push_back(sup);
  }
  rep.finalize();
  bool stable = true;
  for (size_t j = 0; j + 1 < sup_per_a.size(); ++j)
    if (std::abs(sup_per_a[j + 1] - sup_per_a[j]) >
        rel_stability * sup_per_a[j])
      stable = false;
  rep.pass = rep.pass && stable;
  rep.note = stable ? "a-stable" : "ratio drifts with a";
  return rep;
}

}  // namespace holowave
