#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "common/errors.h"
#include "common/quadrature.h"
#include "geometry/boundary_graph.h"
#include "geometry/bump.h"
#include "geometry/mollifier.h"
#include "geometry/pullback.h"
#include "support/oracles.h"

using namespace flatcal;

TEST_CASE("bump derivatives match central differences") {
  for (int n = 1; n <= 4; ++n)
    for (double u : {-0.9, -0.5, 0.0, 0.3, 0.8}) {
      double h = 1e-5;
      double fd = (bump_deriv(n - 1, u + h) - bump_deriv(n - 1, u - h)) / (2 * h);
      CHECK(bump_deriv(n, u) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  CHECK(bump_eval(1.0) == 0.0);
  CHECK(bump_eval(-1.5) == 0.0);
  CHECK(bump_deriv(3, 0.999999) == 0.0);  // zero by continuity at the edge
}

TEST_CASE("scaled bump has unit mass and exact chain-rule derivatives") {
  ScaledBump b = ScaledBump::make(0.33);
  double mass = oracle::integrate([&](double t) { return b.eval(t); }, -0.4, 0.4, 1e-13);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-11));
  double h = 1e-6;
  double fd = (b.eval(0.1 + h) - b.eval(0.1 - h)) / (2 * h);
  CHECK(b.deriv(1, 0.1) == doctest::Approx(fd).epsilon(1e-7));
  CHECK(b.eval(0.34) == 0.0);
}

TEST_CASE("mollifier support stays inside the unit ball") {
  for (int ld = 1; ld <= 3; ++ld) {
    MollifierSpec m = MollifierSpec::make(ld);
    double r2 = 0.5;  // eta halfwidth squared
    r2 += ld * m.lat_axis.halfwidth * m.lat_axis.halfwidth;
    CHECK(r2 <= 1.0 + 1e-12);
  }
  MollifierSpec m1 = MollifierSpec::make(1);
  CHECK(m1.lat_axis.halfwidth == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("boundary catalog validates inputs") {
  CHECK_THROWS_AS(make_boundary("spline", 0.1, 0.5, 1.0, 2), validation_error);
  CHECK_THROWS_AS(make_boundary("bump", 0.1, 0.5, -1.0, 2), validation_error);
  CHECK_THROWS_AS(make_boundary("cone_smoothed", 0.1, 1.5, 1.0, 2), validation_error);
  CHECK_THROWS_AS(make_boundary("bump", 0.1, 0.5, 1.0, 1), validation_error);
  // a downward profile is still a valid Lipschitz graph
  CHECK_NOTHROW(make_boundary("bump", -0.1, 0.5, 1.0, 2));
}

TEST_CASE("bump boundary profile and derivatives") {
  auto g = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  CHECK(g->smoothness() == 1);
  CHECK(g->holder() == 1.0);
  double xt = 0.4;
  CHECK(g->eval(&xt) == doctest::Approx(0.1 * std::pow(1 - 0.16, 2)).epsilon(1e-14));
  double h = 1e-6;
  double lo = xt - h, hi = xt + h;
  double fd = (g->eval(&hi) - g->eval(&lo)) / (2 * h);
  CHECK(g->deriv({1}, &xt) == doctest::Approx(fd).epsilon(1e-8));
  xt = 1.2;
  CHECK(g->eval(&xt) == 0.0);
}

TEST_CASE("cone boundary is C^1 with the stated Holder exponent") {
  auto g = make_boundary("cone_smoothed", 0.2, 0.5, 1.0, 2);
  CHECK(g->smoothness() == 1);
  CHECK(g->holder() == 0.5);
  double xt = 1e-8;
  CHECK(std::abs(g->deriv({1}, &xt)) < 1e-3);  // derivative ~ r^{1/2} near 0
}

TEST_CASE("seminorm estimates sit in the measured bands") {
  auto zb = make_boundary("zero", 0.0, 0.5, 1.0, 2);
  CHECK(boundary_seminorm(*zb, 0, 1.0, 10000) == 0.0);

  auto bb = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  double lip_b = boundary_seminorm(*bb, 0, 1.0, 100000);
  double full_b = boundary_seminorm(*bb, 1, 1.0, 100000);
  CHECK(lip_b == doctest::Approx(0.2540).epsilon(0.02));
  CHECK(full_b == doctest::Approx(0.9536).epsilon(0.02));

  auto cb = make_boundary("cone_smoothed", 0.1, 0.5, 1.0, 2);
  double lip_c = boundary_seminorm(*cb, 0, 1.0, 100000);
  double full_c = boundary_seminorm(*cb, 1, 0.5, 100000);
  CHECK(lip_c == doctest::Approx(0.2816).epsilon(0.02));
  CHECK(full_c == doctest::Approx(0.9394).epsilon(0.02));
  // seminorms scale linearly in the profile amplitude
  auto cb2 = make_boundary("cone_smoothed", 0.2, 0.5, 1.0, 2);
  CHECK(boundary_seminorm(*cb2, 0, 1.0, 100000) ==
        doctest::Approx(2.0 * lip_c).epsilon(1e-12));
}

TEST_CASE("scale covers the unit Lipschitz budget") {
  auto g = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  PullbackMap map(g);
  CHECK(map.scale() == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(map.lip_seminorm() <= 1.0);
}

TEST_CASE("smoothed height average matches the independent oracle") {
  for (const char* kind : {"bump", "cone_smoothed"}) {
    auto g = make_boundary(kind, 0.1, 0.5, 1.0, 2);
    PullbackMap map(g);
    double L = map.scale();
    for (double tau : {0.02, 0.5, 2.0})
      for (double xt : {-0.6, 0.0, 0.45, 1.1}) {
        double want = oracle::h2_value(*g, L, tau, xt);
        CHECK(map.h2(tau, &xt) == doctest::Approx(want).epsilon(1e-10).scale(0.1));
      }
  }
}

TEST_CASE("height-average derivatives agree with finite differences") {
  auto g = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  PullbackMap map(g);
  double xt = 0.3, tau = 0.7, h = 1e-5;
  double lo = xt - h, hi = xt + h;

  double fd_t = (map.h2(tau + h, &xt) - map.h2(tau - h, &xt)) / (2 * h);
  CHECK(map.h2_dtau(tau, &xt) == doctest::Approx(fd_t).epsilon(1e-8));
  CHECK(map.h2_deriv({1, 0}, tau, &xt) == doctest::Approx(fd_t).epsilon(1e-8));

  double fd_x = (map.h2(tau, &hi) - map.h2(tau, &lo)) / (2 * h);
  CHECK(map.h2_deriv({0, 1}, tau, &xt) == doctest::Approx(fd_x).epsilon(1e-8).scale(0.1));

  double fd_tt = (map.h2(tau + h, &xt) - 2 * map.h2(tau, &xt) + map.h2(tau - h, &xt)) / (h * h);
  CHECK(map.h2_deriv({2, 0}, tau, &xt) == doctest::Approx(fd_tt).epsilon(1e-4).scale(0.1));

  double fd_tx = (map.h2_dtau(tau, &hi) - map.h2_dtau(tau, &lo)) / (2 * h);
  CHECK(map.h2_deriv({1, 1}, tau, &xt) == doctest::Approx(fd_tx).epsilon(1e-6).scale(0.1));
}

TEST_CASE("regularized distance matches the bisection oracle") {
  auto bump = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  PullbackMap mb(bump);
  for (double x1 : {0.05, 0.4, 2.0})
    for (double xt : {-0.5, 0.2, 0.9}) {
      double x[2] = {x1 + bump->eval(&xt), xt};
      FixedPointStats st;
      double r = mb.rho(x, &st);
      CHECK(r == doctest::Approx(oracle::rho_value(*bump, mb.scale(), x[0], xt)).epsilon(1e-10));
      CHECK(st.contraction <= 0.6);
      CHECK(st.residual <= 1e-12);
    }

  auto cone = make_boundary("cone_smoothed", 0.2, 0.5, 1.0, 2);
  PullbackMap mc(cone);
  for (double x1 : {0.05, 0.6})
    for (double xt : {0.1, 0.7}) {
      double x[2] = {x1 + cone->eval(&xt), xt};
      double r = mc.rho(x, nullptr);
      CHECK(r == doctest::Approx(oracle::rho_value(*cone, mc.scale(), x[0], xt)).epsilon(1e-7));
    }
}

TEST_CASE("flattening map round-trips") {
  auto g = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  PullbackMap map(g);
  for (double above : {0.02, 0.3, 5.0})
    for (double xt : {-0.8, 0.0, 0.6}) {
      double x[2] = {g->eval(&xt) + above, xt}, y[2], back[2];
      map.psi(x, y);
      CHECK(y[1] == x[1]);
      map.psi_inverse(y, back);
      CHECK(back[0] == doctest::Approx(x[0]).epsilon(1e-11));
      CHECK(map.h1(x) == doctest::Approx(x[0] - map.rho(x)).epsilon(1e-13));
    }
}

TEST_CASE("distance gradient and Hessian agree with finite differences") {
  auto g = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  PullbackMap map(g);
  double x[2] = {0.35, 0.25}, grad[2], hess[4];
  map.rho_gradient(x, grad);
  map.rho_hessian(x, hess);
  double h = 1e-5;
  for (int j = 0; j < 2; ++j) {
    double xp[2] = {x[0], x[1]}, xm[2] = {x[0], x[1]};
    xp[j] += h;
    xm[j] -= h;
    CHECK(grad[j] == doctest::Approx((map.rho(xp) - map.rho(xm)) / (2 * h)).epsilon(1e-6).scale(1.0));
    double gp[2], gm[2];
    map.rho_gradient(xp, gp);
    map.rho_gradient(xm, gm);
    for (int i = 0; i < 2; ++i)
      CHECK(hess[i * 2 + j] ==
            doctest::Approx((gp[i] - gm[i]) / (2 * h)).epsilon(1e-5).scale(1.0));
  }
  CHECK(hess[1] == doctest::Approx(hess[2]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("flattened coefficients satisfy their defining identities") {
  for (const char* kind : {"bump", "cone_smoothed"}) {
    auto g = make_boundary(kind, 0.15, 0.5, 1.0, 2);
    PullbackMap map(g);
    for (double y1 : {0.05, 0.4, 1.5})
      for (double yt : {-0.4, 0.3}) {
        PerturbationCoefficients c = map.coefficients_at(y1, &yt);
        REQUIRE(c.c2.size() == 2);

        double x[2];
        double y[2] = {y1, yt};
        map.psi_inverse(y, x);
        double grad[2], hess[4];
        map.rho_gradient(x, grad);
        map.rho_hessian(x, hess);

        // c2_j = delta_1j - d_j rho, c1 = |c2|^2, c3 = -tr Hessian
        CHECK(c.c2[0] == doctest::Approx(1.0 - grad[0]).epsilon(1e-12).scale(1.0));
        CHECK(c.c2[1] == doctest::Approx(-grad[1]).epsilon(1e-12).scale(1.0));
        CHECK(c.c1 ==
              doctest::Approx(c.c2[0] * c.c2[0] + c.c2[1] * c.c2[1]).epsilon(1e-12).scale(1.0));
        CHECK(c.c3 == doctest::Approx(-(hess[0] + hess[3])).epsilon(1e-9).scale(1.0));
      }
  }
}

TEST_CASE("distance is equivalent to the true boundary distance") {
  auto g = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  PullbackMap map(g);
  auto rep = map.verify_distance_equivalence(400, 17);
  CHECK(rep.samples == 400);
  CHECK(rep.ratio_min >= 0.99);
  CHECK(rep.ratio_max <= 1.05);
  CHECK(rep.max_refine_shift <= 1e-10);
}

TEST_CASE("second-derivative blow-up follows the smoothness class") {
  std::vector<int> a20 = {2, 0};

  auto bump = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  PullbackMap mb(bump);
  auto rb = mb.verify_blowup_bounds(a20, 8, true);
  CHECK_FALSE(rb.flat);
  CHECK(rb.slope >= -0.05);  // C^{1,1}: bounded second derivatives

  auto cone = make_boundary("cone_smoothed", 0.2, 0.5, 1.0, 2);
  PullbackMap mc(cone);
  auto rc = mc.verify_blowup_bounds(a20, 8, true);
  CHECK_FALSE(rc.flat);
  CHECK(rc.slope >= -0.6);        // C^{1,1/2}: blow-up no worse than y^{lambda-1}
  CHECK(rc.slope <= -0.1);        // and the profile does blow up
  CHECK(rc.y1.size() == 8);
  CHECK(rc.value.front() > 0.0);

  auto zero = make_boundary("zero", 0.0, 0.5, 1.0, 2);
  PullbackMap mz(zero);
  auto rz = mz.verify_blowup_bounds(a20, 8, true);
  CHECK(rz.flat);
}

TEST_CASE("zero boundary flattens to the identity") {
  auto g = make_boundary("zero", 0.0, 0.5, 1.0, 2);
  PullbackMap map(g);
  double x[2] = {0.7, -0.3}, y[2];
  CHECK(map.rho(x) == doctest::Approx(0.7).epsilon(1e-14));
  map.psi(x, y);
  CHECK(y[0] == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(map.lip_seminorm() == 0.0);
  auto rep = map.verify_distance_equivalence(100, 3);
  CHECK(rep.ratio_min == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rep.ratio_max == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("three-dimensional pullback evaluates") {
  auto g = make_boundary("bump", 0.1, 0.5, 1.0, 3);
  PullbackMap map(g);
  double x[3] = {0.7, 0.2, -0.3};
  FixedPointStats st;
  double r = map.rho(x, &st);
  CHECK(r == doctest::Approx(0.624452).epsilon(1e-4));
  CHECK(st.residual <= 1e-12);
  double y[3], back[3];
  map.psi(x, y);
  map.psi_inverse(y, back);
  CHECK(back[0] == doctest::Approx(x[0]).epsilon(1e-11));
  double far[3] = {0.7, 8.0, -6.0};
  CHECK(map.rho(far) == doctest::Approx(0.7).epsilon(1e-12));
  PerturbationCoefficients c = map.coefficients_at(0.5, x + 1);
  CHECK(c.c2.size() == 3);
  CHECK(std::isfinite(c.c3));
}
