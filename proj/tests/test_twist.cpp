#include <cmath>
#include <random>

#include "core/field.hpp"
#include "core/twist.hpp"
#include "doctest.h"

using namespace holowave;

namespace {

TwistParams params_for(double alpha, double a = 0.5) {
  // n = 4: mu = alpha^2 - 9/4.
  return TwistParams::make(4, alpha * alpha - 2.25, a);
}

// Smooth zero-trace profile in detwisted storage.
GridFunction random_zero_trace(const GridPtr& g, double seed_phase) {
  GridFunction w(g, 0, Centering::Node, Rep::TwistA);
  double a = g->width();
  for (int i = 0; i <= g->cells(); ++i) {
    double x = g->x(i);
    w[i] = x * x * (a - x) * (1.0 + 0.3 * std::sin(7.0 * x / a + seed_phase));
  }
  return w;
}

}  // namespace

TEST_CASE("alpha_from_mu") {
  CHECK(alpha_from_mu(4, 0.0) == doctest::Approx(1.5));
  CHECK(alpha_from_mu(4, -2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(alpha_from_mu(4, -2.25), Error);
  CHECK_THROWS_AS(alpha_from_mu(4, -3.0), Error);
}

TEST_CASE("grid construction") {
  for (GridKind kind : {GridKind::Uniform, GridKind::Graded}) {
    auto g = RadialGrid::make(800, 0.5, kind);
    CHECK(g->x(0) == 0.0);
    CHECK(g->x(g->cells()) == doctest::Approx(0.5));
    double sum = 0.0;
    for (int c = 0; c < g->cells(); ++c) {
      CHECK(g->h(c) > 0.0);
      sum += g->cell_weight(c);
    }
    CHECK(sum == doctest::Approx(0.5 * 0.5 / 2.0).epsilon(1e-12));
  }
  auto g = RadialGrid::make(800, 0.5, GridKind::Graded);
  CHECK(g->x(1) == doctest::Approx(0.5e-4));
  // graded cells grow toward the outer boundary
  CHECK(g->h(1) < g->h(g->cells() - 1));
}

TEST_CASE("twist_d kernel and closed forms") {
  for (double alpha : {0.5, 1.0, 1.5, 2.5}) {
    TwistParams p = params_for(alpha);
    auto g = RadialGrid::make(400, p.a, GridKind::Graded);

    // x^{-alpha}: detwisted storage is constant, derivative exactly zero.
    GridFunction ker(g, 0, Centering::Node, Rep::TwistA);
    for (int i = 0; i <= g->cells(); ++i) ker[i] = 3.7;
    GridFunction d = twist_d(ker, p);
    for (int c = 0; c < g->cells(); ++c) CHECK(std::abs(d[c]) <= 1e-12);

    // x^s -> (s+alpha) x^{s-1} at cell midpoints, scheme order.
    double s = 1.7;
    GridFunction xs = GridFunction::sample_node(
        g, p.alpha, 0, [&](double x) { return std::pow(x, s); }, Rep::TwistA);
    GridFunction dxs = twist_d(xs, p);
    for (int c = g->cells() / 2; c < g->cells(); c += 37) {
      double m = g->mid(c);
      double exact = (s + p.alpha) * std::pow(m, s - 1.0);
      CHECK(dxs[c] == doctest::Approx(exact).epsilon(5e-4));
    }
  }
}

TEST_CASE("twist_d on sin(x) converges at second order") {
  TwistParams p = params_for(1.5);
  auto err_at = [&](int N) {
    auto g = RadialGrid::make(N, p.a, GridKind::Uniform);
    GridFunction u = GridFunction::sample_node(
        g, p.alpha, 0, [](double x) { return std::sin(x); }, Rep::TwistA);
    GridFunction d = twist_d(u, p);
    // skip the axis neighborhood: sin detwists to x^{alpha+1}, which is not
    // smooth in x at 0, so pointwise order there is capped by the power law
    double emax = 0.0;
    for (int c = 0; c < g->cells(); ++c) {
      double m = g->mid(c);
      if (m < 0.05 * p.a) continue;
      double exact = std::cos(m) + p.alpha * std::sin(m) / m;
      emax = std::max(emax, std::abs(d[c] - exact));
    }
    return emax;
  };
  double e1 = err_at(200), e2 = err_at(400);
  double order = std::log2(e1 / e2);
  CHECK(order >= 2.0 - 0.2);
}

TEST_CASE("twist_d_star kernels") {
  for (double alpha : {0.5, 1.0, 1.5, 2.5}) {
    TwistParams p = params_for(alpha);
    auto g = RadialGrid::make(400, p.a, GridKind::Graded);

    // node form: x^{alpha-1} stored in the adjoint detwist is constant
    GridFunction ker(g, 0, Centering::Node, Rep::Twist1mA);
    for (int i = 0; i <= g->cells(); ++i) ker[i] = -2.2;
    GridFunction d = twist_d_star(ker, p);
    for (int c = 0; c < g->cells(); ++c) CHECK(std::abs(d[c]) <= 1e-12);

    // dual (cell input) form annihilates the sampled kernel everywhere,
    // boundary rows included; measured in L2 against the action on a
    // same-magnitude non-kernel function (sampling roundoff is amplified by
    // 1/h at the innermost cells, so pointwise bounds are scale-blind).
    GridFunction kc = GridFunction::sample_cell(
        g, 0, [&](double x) { return std::pow(x, alpha - 1.0); });
    GridFunction dn = twist_d_star(kc, p);
    GridFunction ref = GridFunction::sample_cell(
        g, 0, [&](double x) { return std::pow(x, alpha - 1.0) * (1.0 + x); });
    double ref_norm = norm_l2(twist_d_star(ref, p), p);
    CHECK(norm_l2(dn, p) <= 1e-12 * ref_norm);

    // x^s -> (alpha-1-s) x^{s-1}
    double s = 2.3;
    GridFunction xs = GridFunction::sample_node(
        g, p.alpha, 0, [&](double x) { return std::pow(x, s); },
        Rep::Twist1mA);
    GridFunction dxs = twist_d_star(xs, p);
    for (int c = g->cells() / 2; c < g->cells(); c += 41) {
      double m = g->mid(c);
      double exact = (p.alpha - 1.0 - s) * std::pow(m, s - 1.0);
      CHECK(dxs[c] == doctest::Approx(exact).epsilon(5e-4));
    }
  }
}

TEST_CASE("op_A closed forms and exact right inverse") {
  for (double alpha : {0.5, 1.5, 2.5}) {
    TwistParams p = params_for(alpha);
    auto g = RadialGrid::make(600, p.a, GridKind::Graded);

    GridFunction one = GridFunction::sample_cell(g, 0, [](double) { return 1.0; });
    GridFunction A1 = op_A(one, p);
    for (int i = 100; i <= g->cells(); i += 97) {
      double x = g->x(i);
      CHECK(A1.plain(i, p.alpha) ==
            doctest::Approx(x / (p.alpha + 1.0)).epsilon(2e-4));
    }

    double s = 0.8;
    GridFunction xs = GridFunction::sample_cell(
        g, 0, [&](double x) { return std::pow(x, s); });
    GridFunction Axs = op_A(xs, p);
    for (int i = 100; i <= g->cells(); i += 89) {
      double x = g->x(i);
      CHECK(Axs.plain(i, p.alpha) ==
            doctest::Approx(std::pow(x, s + 1.0) / (p.alpha + s + 1.0))
                .epsilon(2e-4));
    }

    // round trip: twist_d(op_A(phi)) == phi to machine precision in L2
    GridFunction phi = GridFunction::sample_cell(
        g, 0, [&](double x) { return std::cos(5.0 * x) + 0.3 * x; });
    GridFunction rt = twist_d(op_A(phi, p), p);
    rt -= phi;
    CHECK(norm_l2(rt, p) <= 1e-12 * norm_l2(phi, p));
  }
}

TEST_CASE("op_A_star closed form, boundary value, exact right inverse") {
  for (double alpha : {0.5, 1.5, 2.5}) {
    TwistParams p = params_for(alpha);
    double a = p.a;
    auto g = RadialGrid::make(600, a, GridKind::Graded);

    GridFunction one = GridFunction::sample_cell(g, 0, [](double) { return 1.0; });
    GridFunction As1 = op_A_star(one, p);
    CHECK(As1[g->cells()] == 0.0);  // A* phi (a) = 0 exactly
    for (int i = 100; i < g->cells(); i += 83) {
      double x = g->x(i);
      double exact = std::pow(x, p.alpha - 1.0) *
                     (std::pow(a, 2.0 - p.alpha) - std::pow(x, 2.0 - p.alpha)) /
                     (2.0 - p.alpha);
      CHECK(As1.plain(i, p.alpha) == doctest::Approx(exact).epsilon(2e-4));
    }

    GridFunction phi = GridFunction::sample_cell(
        g, 0, [&](double x) { return std::sin(4.0 * x) - 0.2; });
    GridFunction rt = twist_d_star(op_A_star(phi, p), p);
    rt -= phi;
    CHECK(norm_l2(rt, p) <= 1e-12 * norm_l2(phi, p));
  }
}

TEST_CASE("discrete adjointness is exact on zero-trace data") {
  for (double alpha : {0.5, 1.0, 1.5, 2.5}) {
    TwistParams p = params_for(alpha);
    auto g = RadialGrid::make(500, p.a, GridKind::Graded);
    GridFunction u = random_zero_trace(g, 0.4);
    GridFunction v = GridFunction::sample_cell(
        g, 0, [&](double x) { return std::exp(-3.0 * x) * (1.0 + x); });
    double lhs = ip_weighted(twist_d(u, p), v, p);
    double rhs = ip_weighted(u, twist_d_star(v, p), p);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("reconstruction from the twisted derivative (trace split)") {
  TwistParams p = params_for(0.5);
  auto g = RadialGrid::make(500, p.a, GridKind::Graded);
  // u with nonzero trace: detwisted values with w(0) = G != 0.
  double G = 1.3;
  GridFunction w(g, 0, Centering::Node, Rep::TwistA);
  for (int i = 0; i <= g->cells(); ++i) {
    double x = g->x(i);
    w[i] = G + x * (p.a - 0.5 * x);
  }
  GridFunction rec = op_A(twist_d(w, p), p);
  // u - A(D u) = G x^{-alpha} exactly: detwisted difference is the constant G.
  for (int i = 0; i <= g->cells(); ++i)
    CHECK(w[i] - rec[i] == doctest::Approx(G).epsilon(1e-12));
}

TEST_CASE("ordered_twist identity and power law") {
  TwistParams p = params_for(1.5);
  auto g = RadialGrid::make(800, p.a, GridKind::Graded);
  GridFunction u = random_zero_trace(g, 1.1);
  GridFunction id = ordered_twist(0, u, p);
  for (int i = 0; i <= g->cells(); ++i) CHECK(id[i] == u[i]);
  CHECK_THROWS_AS(ordered_twist(-1, u, p), Error);

  // D*D x^s = (alpha^2 - s^2) x^{s-2}, scheme order on the grid interior.
  for (double s : {p.alpha, p.alpha + 1.0, p.alpha + 2.0}) {
    GridFunction xs = GridFunction::sample_node(
        g, p.alpha, 0, [&](double x) { return std::pow(x, s); }, Rep::TwistA);
    GridFunction dd = ordered_twist(2, xs, p);
    double cexp = p.alpha * p.alpha - s * s;
    for (int i = g->cells() / 4; i < (3 * g->cells()) / 4; i += 29) {
      double x = g->x(i);
      double exact = cexp * std::pow(x, s - 2.0);
      double scale = (p.alpha * p.alpha + s * s) * std::pow(x, s - 2.0);
      CHECK(std::abs(dd.plain(i, p.alpha) - exact) <= 2e-3 * scale);
    }
  }
}

TEST_CASE("weighted norms: closed form and recomputation") {
  TwistParams p = params_for(1.5);
  double a = p.a;
  auto g = RadialGrid::make(800, a, GridKind::Graded);

  GridFunction u = GridFunction::sample_node(
      g, p.alpha, 0,
      [&](double x) { return std::pow(x, p.alpha) * (a - x); }, Rep::TwistA);
  double al2 = 2.0 * p.alpha + 2.0;
  double exact_sq = std::pow(a, al2 + 2.0) *
                    (1.0 / al2 - 2.0 / (al2 + 1.0) + 1.0 / (al2 + 2.0));
  CHECK(norm_l2(u, p) == doctest::Approx(std::sqrt(exact_sq)).epsilon(1e-5));

  // H^1 from the recursion equals the explicit combination.
  Field f = Field::zero(g, {2});
  f.profiles[0] = random_zero_trace(g, 2.3);
  f.profiles[0] = GridFunction(g, 2, Centering::Node, Rep::TwistA);
  for (int i = 0; i <= g->cells(); ++i) {
    double x = g->x(i);
    f.profiles[0][i] = x * x * (a - x) * std::cos(3.0 * x);
  }
  double h1 = field_norm_hm(f, 1, p);
  double lam = 2.0 * (2.0 + p.n - 3.0);
  double l2 = norm_l2(f.profiles[0], p);
  double dx = norm_l2(twist_d(f.profiles[0], p), p);
  double expect = std::sqrt((1.0 + lam) * l2 * l2 + dx * dx);
  CHECK(h1 == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("decay_slope on powers and error paths") {
  TwistParams p = params_for(0.5);
  auto g = RadialGrid::make(600, p.a, GridKind::Graded);
  GridFunction u = GridFunction::sample_node(
      g, p.alpha, 0, [](double x) { return std::pow(x, 1.5); }, Rep::Plain);
  CHECK(decay_slope(u, 1e-4, p.a / 4, p) == doctest::Approx(1.5).epsilon(0.01));

  GridFunction v = GridFunction::sample_node(
      g, p.alpha, 0, [&](double x) { return std::pow(x, -p.alpha); },
      Rep::TwistA);
  CHECK(decay_slope(v, 1e-4, p.a / 4, p) ==
        doctest::Approx(-0.5).epsilon(0.01));

  CHECK_THROWS_AS(decay_slope(u, 1e-9, 2e-9, p), Error);  // empty window
  GridFunction w = GridFunction::sample_node(
      g, p.alpha, 0, [&](double x) { return x - 0.1; }, Rep::Plain);
  CHECK_THROWS_AS(decay_slope(w, 0.05, 0.2, p), Error);  // sign change
}
