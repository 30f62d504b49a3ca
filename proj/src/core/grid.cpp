#include "grid.hpp"

#include <atomic>
#include <cmath>

namespace holowave {

double alpha_from_mu(int n, double mu) {
  if (n < 3) fail(ErrorCode::DomainError, "spacetime dimension must be >= 3");
  double half = 0.5 * (n - 1);
  double disc = half * half + mu;
  if (disc <= 0.0)
    fail(ErrorCode::BelowThreshold,
         "mu <= -((n-1)/2)^2: mass below the positivity threshold");
  return std::sqrt(disc);
}

TwistParams TwistParams::make(int n, double mu, double a) {
  if (a <= 0.0 || a > 1.0)
    fail(ErrorCode::DomainError, "patch width a must lie in (0, 1]");
  TwistParams p;
  p.n = n;
  p.mu = mu;
  p.alpha = alpha_from_mu(n, mu);
  p.a = a;
  return p;
}

namespace {
std::atomic<std::uint64_t> g_next_grid_id{1};
}

std::shared_ptr<const RadialGrid> RadialGrid::make(int n_cells, double a,
                                                   GridKind kind,
                                                   double x_min_factor,
                                                   double grading_ratio) {
  if (n_cells < 8) fail(ErrorCode::DomainError, "grid needs at least 8 cells");
  if (a <= 0.0) fail(ErrorCode::DomainError, "grid width must be positive");

  auto g = std::shared_ptr<RadialGrid>(new RadialGrid());
  g->N_ = n_cells;
  g->a_ = a;
  g->kind_ = kind;
  g->id_ = g_next_grid_id.fetch_add(1);

  const int N = n_cells;
  g->x_.assign(N + 1, 0.0);
  if (kind == GridKind::Uniform) {
    for (int i = 0; i <= N; ++i) g->x_[i] = a * static_cast<double>(i) / N;
  } else {
    // Cell widths grow geometrically from delta = a * x_min_factor at the
    // axis until the uniform step needed to land exactly on x = a with the
    // remaining cells becomes the smaller choice.
    const double delta = a * x_min_factor;
    const double rho = grading_ratio;
    // If even the full geometric schedule cannot cover [0, a], widen the
    // ratio so that exactly N geometric cells fit.
    double reach = delta * (std::pow(rho, N) - 1.0) / (rho - 1.0);
    if (reach < a) {
      double lo = rho, hi = 4.0;
      while (delta * (std::pow(hi, N) - 1.0) / (hi - 1.0) < a) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (delta * (std::pow(mid, N) - 1.0) / (mid - 1.0) < a ? lo : hi) = mid;
      }
      double r = 0.5 * (lo + hi);
      double xcur = 0.0, hcur = delta;
      for (int i = 1; i <= N; ++i) {
        xcur += hcur;
        g->x_[i] = xcur;
        hcur *= r;
      }
      for (int i = 1; i <= N; ++i) g->x_[i] *= a / g->x_[N];
    } else {
      double xcur = 0.0;
      for (int k = 0; k < N; ++k) {
        double h_geo = delta * std::pow(rho, k);
        double h_uni = (a - xcur) / (N - k);
        xcur += std::min(h_geo, h_uni);
        g->x_[k + 1] = xcur;
      }
      g->x_[N] = a;
    }
  }

  g->m_.resize(N);
  g->h_.resize(N);
  g->wC_.resize(N);
  g->min_h_ = a;
  for (int c = 0; c < N; ++c) {
    g->h_[c] = g->x_[c + 1] - g->x_[c];
    g->m_[c] = 0.5 * (g->x_[c] + g->x_[c + 1]);
    g->wC_[c] = g->h_[c] * g->m_[c];
    g->min_h_ = std::min(g->min_h_, g->h_[c]);
  }

  g->ell_.assign(N + 1, 0.0);
  g->wN_.assign(N + 1, 0.0);
  g->ell_[0] = g->m_[0];
  for (int i = 1; i < N; ++i) g->ell_[i] = g->m_[i] - g->m_[i - 1];
  g->ell_[N] = a - g->m_[N - 1];
  // Node 0 sits at x = 0 where the measure vanishes; its dual-cell mass is
  // recovered by the first-cell power fit in the norm routines.
  g->wN_[0] = 0.0;
  for (int i = 1; i <= N; ++i) g->wN_[i] = g->x_[i] * g->ell_[i];

  return g;
}

}  // namespace holowave
