#include "peel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace holowave {

void Cutoff::taylor3(double x, double out[3]) const {
  // chi = B(1-s) / (B(1-s) + B(s)), s = (x - a0/2)/(a0/2), B(u) = exp(-1/u).
  double s0 = (x - 0.5 * a0) / (0.5 * a0);
  if (s0 <= 0.0) {
    out[0] = 1.0;
    out[1] = out[2] = 0.0;
    return;
  }
  if (s0 >= 1.0) {
    out[0] = out[1] = out[2] = 0.0;
    return;
  }
  int len = 3;
  Series s(0.0, {s0, 2.0 / a0, 0.0});
  Series one = Series::constant(1.0, len);
  auto B = [&](const Series& u) {
    return (-1.0 * u.reciprocal()).exp();
  };
  Series bu = B(one - s), bs = B(s);
  Series chi = bu * (bu + bs).reciprocal();
  out[0] = chi.coeff(0);
  out[1] = chi.coeff(1);
  out[2] = 2.0 * chi.coeff(2);
}

double Cutoff::chi(double x) const {
  double t[3];
  taylor3(x, t);
  return t[0];
}
double Cutoff::dchi(double x) const {
  double t[3];
  taylor3(x, t);
  return t[1];
}
double Cutoff::d2chi(double x) const {
  double t[3];
  taylor3(x, t);
  return t[2];
}

double ExpansionLayer::eval_H(const TimeProfile& f, double t) const {
  double s = 0.0;
  for (const auto& [d, c] : combo) s += c * f.eval(t, d);
  return s;
}

namespace {

struct TermKey {
  int j, logp, d;
  bool operator<(const TermKey& o) const {
    if (j != o.j) return j < o.j;
    if (logp != o.logp) return logp < o.logp;
    return d < o.d;
  }
};

using TermMap = std::map<TermKey, double>;

void add_term(TermMap& m, int j, int logp, int d, double c, int jmax) {
  if (c == 0.0 || j > jmax) return;
  m[{j, logp, d}] += c;
}

// iterate a series with an integer leading exponent as (exponent, coeff)
template <typename F>
void for_series(const Series& s, F&& fn) {
  if (s.is_zero()) return;
  double lr = std::round(s.lead());
  if (std::abs(s.lead() - lr) > 1e-9)
    fail(ErrorCode::Internal, "operator series has a non-integer exponent");
  int base = static_cast<int>(lr);
  for (int k = 0; k < s.length(); ++k)
    if (s.coeff(k) != 0.0) fn(base + k, s.coeff(k));
}

struct PeelEngine {
  const TwistParams* p;
  const PeelResult* pr;
  double lambda;
  int jmax;

  // adds -P(term) into `out` (so `out` accumulates the residual source that
  // the remainder has to absorb)
  void apply_minus_P(const TermMap& terms, TermMap& out) const {
    const double al = p->alpha;
    for (const auto& [key, c] : terms) {
      double s = -al + key.j;
      int q = key.logp;
      // +d_t^2
      add_term(out, key.j, q, key.d + 2, c, jmax);
      // +cdd * D*D
      for_series(pr->cdd, [&](int m, double cm) {
        add_term(out, key.j - 2 + m, q, key.d, cm * c * (al * al - s * s),
                 jmax);
        if (q >= 1)
          add_term(out, key.j - 2 + m, q - 1, key.d, cm * c * (-2.0 * s * q),
                   jmax);
        if (q >= 2)
          add_term(out, key.j - 2 + m, q - 2, key.d,
                   cm * c * (-double(q) * (q - 1)), jmax);
      });
      // -cth * Delta_theta = +lambda cth
      for_series(pr->cth, [&](int m, double cm) {
        add_term(out, key.j + m, q, key.d, lambda * cm * c, jmax);
      });
      // -pdx * D_x
      for_series(pr->pdx, [&](int m, double cm) {
        add_term(out, key.j - 1 + m, q, key.d, -cm * c * (s + al), jmax);
        if (q >= 1)
          add_term(out, key.j - 1 + m, q - 1, key.d, -cm * c * q, jmax);
      });
      // -pt * d_t
      for_series(pr->pt, [&](int m, double cm) {
        add_term(out, key.j + m, q, key.d + 1, -cm * c, jmax);
      });
      // -ptdx * D_x d_t
      for_series(pr->ptdx, [&](int m, double cm) {
        add_term(out, key.j - 1 + m, q, key.d + 1, -cm * c * (s + al), jmax);
        if (q >= 1)
          add_term(out, key.j - 1 + m, q - 1, key.d + 1, -cm * c * q, jmax);
      });
      // -p0
      for_series(pr->p0, [&](int m, double cm) {
        add_term(out, key.j + m, q, key.d, -cm * c, jmax);
      });
    }
  }
};

void prune(TermMap& m, double tol) {
  double scale = 0.0;
  for (const auto& [k, c] : m) scale = std::max(scale, std::abs(c));
  for (auto it = m.begin(); it != m.end();)
    it = (std::abs(it->second) <= tol * scale) ? m.erase(it) : std::next(it);
}

}  // namespace

PeelResult peel(const BoundaryDatum& f, int k, const OperatorCoefficients& op,
                const TwistParams& p, const GridPtr& grid, double a0_factor) {
  if (k < 1) fail(ErrorCode::DomainError, "peeling depth k must be >= 1");
  if (f.budget() < 2 * k)
    fail(ErrorCode::DerivativeBudget,
         "datum cannot supply the 2k time derivatives the peel needs");
  if (std::abs(op.cdd.lead()) > 1e-9 || std::abs(op.cdd.coeff(0) - 1.0) > 1e-9)
    fail(ErrorCode::Internal, "normal form must have unit leading cdd");

  PeelResult out;
  out.params = p;
  out.grid = grid;
  out.k = k;
  out.cutoff.a0 = a0_factor * p.a;
  out.cdd = op.cdd;
  out.cth = op.cth;
  out.pdx = op.pdx;
  out.pt = op.pt;
  out.ptdx = op.ptdx;
  out.p0 = op.p0;

  const double al = p.alpha;
  const int jmax = 2 * k + 6;
  const int j_target = 2 * k - 2;  // residual must start at -alpha + 2k - 2

  for (const auto& [l, profile] : f.modes) {
    ModePeel mp;
    mp.mode = l;
    mp.lambda = double(l) * (l + p.n - 3);
    mp.profile = profile;

    PeelEngine eng{&p, &out, mp.lambda, jmax};

    std::map<std::pair<int, int>, std::map<int, double>> layer_combos;
    layer_combos[{0, 0}][0] = 1.0;  // H_0 = f

    TermMap residual;
    {
      TermMap l0;
      l0[{0, 0, 0}] = 1.0;
      eng.apply_minus_P(l0, residual);
    }

    // cancellation ladder: remove every order below the target
    for (int guard = 0; guard < 4 * jmax * (k + 2); ++guard) {
      prune(residual, 1e-14);
      // lowest exponent, highest log power first
      const TermKey* pick = nullptr;
      for (const auto& [key, c] : residual) {
        if (key.j >= j_target) continue;
        if (!pick || key.j < pick->j ||
            (key.j == pick->j && key.logp > pick->logp))
          pick = &key;
      }
      if (!pick) break;
      int jr = pick->j, qp = pick->logp;
      std::map<int, double> g;
      for (const auto& [key, c] : residual)
        if (key.j == jr && key.logp == qp) g[key.d] += c;

      int jn = jr + 2;
      double denom = double(jn) * (2.0 * al - jn);
      bool resonant = std::abs(denom) < 1e-9 * std::max(1.0, al * al);

      TermMap layer;
      if (!resonant) {
        // P(x^{-al+jn} L^qp H) has leading -denom x^{-al+jr} L^qp H
        for (const auto& [d, c] : g) {
          double hc = -c / denom;
          layer[{jn, qp, d}] = hc;
          layer_combos[{jn, qp}][d] += hc;
        }
      } else {
        // log layer per the resonance rule: leading term of
        // P(x^{-al+jn} L^{qp+1} H) at order x^{-al+jr} L^{qp} is
        // +2 al (qp+1) H
        double denom_log = 2.0 * al * (qp + 1);
        for (const auto& [d, c] : g) {
          double hc = c / denom_log;
          layer[{jn, qp + 1, d}] = hc;
          layer_combos[{jn, qp + 1}][d] += hc;
        }
      }
      eng.apply_minus_P(layer, residual);
      // the targeted order cancels exactly in exact arithmetic; sweep it
      for (auto it = residual.begin(); it != residual.end();) {
        bool kill = (it->first.j == jr && it->first.logp == qp);
        it = kill ? residual.erase(it) : std::next(it);
      }
    }
    prune(residual, 1e-14);

    for (const auto& [key, combo] : layer_combos) {
      ExpansionLayer lay;
      lay.mode = l;
      lay.j = key.first;
      lay.log_power = key.second;
      for (const auto& [d, c] : combo) lay.combo.emplace_back(d, c);
      mp.layers.push_back(std::move(lay));
    }
    for (const auto& [key, c] : residual)
      mp.residual.push_back({key.j, key.logp, key.d, c});
    out.modes.push_back(std::move(mp));
  }
  return out;
}

Field PeelResult::layer_sum(double t, int tderiv) const {
  std::vector<int> ml;
  for (const auto& mp : modes) ml.push_back(mp.mode);
  Field f = Field::zero(grid, ml);
  const int N = grid->cells();
  for (size_t km = 0; km < modes.size(); ++km) {
    const auto& mp = modes[km];
    auto& w = f.profiles[km];
    for (const auto& lay : mp.layers) {
      double H = 0.0;
      for (const auto& [d, c] : lay.combo)
        H += c * mp.profile.eval(t, d + tderiv);
      if (H == 0.0) continue;
      // detwisted: x^alpha * chi x^{-alpha+j} L^p H = chi x^j L^p H
      if (lay.j == 0 && lay.log_power == 0) w[0] += H;
      for (int i = 1; i <= N; ++i) {
        double x = grid->x(i);
        double cx = cutoff.chi(x);
        if (cx == 0.0) continue;
        double lp = lay.log_power ? std::pow(std::log(x), lay.log_power) : 1.0;
        w[i] += cx * std::pow(x, lay.j) * lp * H;
      }
    }
  }
  return f;
}

void PeelResult::residual_w(double t, int mode_index,
                            std::vector<double>& Fw) const {
  const auto& mp = modes[mode_index];
  const int N = grid->cells();
  const double al = params.alpha;
  if ((int)Fw.size() != N + 1) Fw.assign(N + 1, 0.0);

  // cache needed f derivatives
  int dmax = 0;
  for (const auto& tm : mp.residual) dmax = std::max(dmax, tm.d);
  for (const auto& lay : mp.layers)
    for (const auto& [d, c] : lay.combo) dmax = std::max(dmax, d + 1);
  std::vector<double> fd(dmax + 1);
  for (int d = 0; d <= dmax; ++d) fd[d] = mp.profile.eval(t, d);

  for (int i = 1; i < N; ++i) {
    double x = grid->x(i);
    if (x >= cutoff.a0) {
      Fw[i] = 0.0;
      continue;
    }
    double lg = std::log(x);
    // detwisted symbolic residual x^alpha * R
    double sym = 0.0;
    for (const auto& tm : mp.residual)
      sym += tm.c * std::pow(x, tm.j) *
             (tm.logp ? std::pow(lg, tm.logp) : 1.0) * fd[tm.d];
    double cx = cutoff.chi(x);
    if (cx == 1.0) {
      Fw[i] = sym;
      continue;
    }
    // transition zone: Ftilde = chi * R - [P, chi](layers)
    double c1 = cutoff.dchi(x), c2 = cutoff.d2chi(x);
    double cdd_x = cdd.eval(x), pdx_x = pdx.eval(x), ptdx_x = ptdx.eval(x);
    double comm = 0.0;
    for (const auto& lay : mp.layers) {
      double H = 0.0, Ht = 0.0;
      for (const auto& [d, c] : lay.combo) {
        H += c * fd[d];
        Ht += c * fd[d + 1];
      }
      double s = -al + lay.j;
      int q = lay.log_power;
      double lp = q ? std::pow(lg, q) : 1.0;
      double lpm = q >= 1 ? (q == 1 ? 1.0 : std::pow(lg, q - 1)) : 0.0;
      double v = std::pow(x, s) * lp;
      double vp = s * std::pow(x, s - 1.0) * lp +
                  (q >= 1 ? q * std::pow(x, s - 1.0) * lpm : 0.0);
      comm += cdd_x * (c2 * v * H + 2.0 * c1 * vp * H + c1 * v * H / x) +
              pdx_x * c1 * v * H + ptdx_x * c1 * v * Ht;
    }
    Fw[i] = std::pow(x, al) * (cx * sym * std::pow(x, -al) * 1.0 - comm);
    // note: sym is already detwisted (x^alpha R); undo and redo around comm
    Fw[i] = cx * sym - std::pow(x, al) * comm;
  }
  Fw[0] = 0.0;
  Fw[N] = 0.0;
}

SourceFn PeelResult::source() const {
  const PeelResult* self = this;
  return [self](double t, int mode_index, std::vector<double>& Fw) {
    self->residual_w(t, mode_index, Fw);
  };
}

GridFunction PeelResult::residual_field(double t, int mode_index) const {
  const int N = grid->cells();
  std::vector<double> Fw(N + 1, 0.0);
  residual_w(t, mode_index, Fw);
  GridFunction out(grid, modes[mode_index].mode, Centering::Node, Rep::TwistA);
  out.values() = Fw;
  return out;
}

int PeelResult::max_log_power_at_leading_order(int mode_index) const {
  const auto& mp = modes[mode_index];
  int jmin = 1 << 20;
  for (const auto& tm : mp.residual) jmin = std::min(jmin, tm.j);
  int q = 0;
  for (const auto& tm : mp.residual)
    if (tm.j == jmin) q = std::max(q, tm.logp);
  return q;
}

Field layer_eval(const PeelResult& pr, double t) { return pr.layer_sum(t); }

EstimateReport residual_slope(const PeelResult& pr, double t_probe,
                              double x_lo, double x_hi) {
  EstimateReport rep;
  rep.name = "residual_slope";
  rep.param_names = {"mode", "required", "slope"};
  rep.bound = 0.1;
  const double al = pr.params.alpha;
  double required = -al + 2.0 * pr.k - 2.0;
  bool any = false;
  for (size_t km = 0; km < pr.modes.size(); ++km) {
    GridFunction res = pr.residual_field(t_probe, (int)km);
    double sup = norm_linf(res, pr.params);
    if (sup < 1e-14) continue;
    any = true;
    int logp = pr.max_log_power_at_leading_order((int)km);
    double slope =
        decay_slope(res, x_lo, x_hi, pr.params, logp);
    rep.add({double(pr.modes[km].mode), required, slope}, required - slope);
  }
  if (!any)
    fail(ErrorCode::ZeroResidual,
         "residual vanishes at the probe time (vacuous pass)");
  rep.finalize();
  return rep;
}

}  // namespace holowave
