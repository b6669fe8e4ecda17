#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>

#include "common/errors.h"
#include "geometry/pullback.h"
#include "spaces/grid.h"
#include "spaces/norms.h"

using namespace flatcal;
using C = std::complex<double>;

namespace {
GridFunction decay(const HalfSpaceGrid& g) {
  return GridFunction::sample(g, [](double t, double) { return C(std::exp(-t)); });
}
}  // namespace

TEST_CASE("grid geometry: graded cells, midpoint nodes, refinement rule") {
  auto g = HalfSpaceGrid::make(1, 40.0, 64, 0.85);
  REQUIRE(g.n_normal == 64);
  REQUIRE(g.edges.size() == 65);
  CHECK(g.edges.front() == 0.0);
  CHECK(g.edges.back() == doctest::Approx(40.0).epsilon(1e-12));
  for (int i = 0; i < 64; ++i) {
    CHECK(g.wn[i] == doctest::Approx(g.edges[i + 1] - g.edges[i]).epsilon(1e-12));
    CHECK(g.xn[i] == doctest::Approx(0.5 * (g.edges[i] + g.edges[i + 1])).epsilon(1e-12));
  }
  // cells shrink toward the wall at the stated ratio
  CHECK(g.wn[0] / g.wn[1] == doctest::Approx(0.85).epsilon(1e-10));
  CHECK(g.wn[10] / g.wn[11] == doctest::Approx(0.85).epsilon(1e-10));

  auto r = g.refined();
  CHECK(r.n_normal == 2 * 64 + 16);
  CHECK(r.grading == doctest::Approx(std::sqrt(0.85)).epsilon(1e-14));
  CHECK(r.x_max == 40.0);

  auto g2 = HalfSpaceGrid::make(2, 40.0, 32, 0.9, 4.0, 16);
  CHECK(g2.size() == 32u * 16u);
  CHECK(g2.xl.size() == 16);
  CHECK(g2.wl == doctest::Approx(8.0 / 16).epsilon(1e-14));
  CHECK(g2.xl[0] == doctest::Approx(-4.0 + 0.5 * g2.wl).epsilon(1e-12));
  CHECK(g2.xl[15] == doctest::Approx(4.0 - 0.5 * g2.wl).epsilon(1e-12));
  auto r2 = g2.refined();
  CHECK(r2.n_lateral == 32);

  CHECK_THROWS_AS(HalfSpaceGrid::make(1, -1.0, 64, 0.85), validation_error);
  CHECK_THROWS_AS(HalfSpaceGrid::make(1, 40.0, 0, 0.85), validation_error);
  CHECK_THROWS_AS(HalfSpaceGrid::make(1, 40.0, 64, 1.5), validation_error);
  CHECK_THROWS_AS(HalfSpaceGrid::make(2, 40.0, 64, 0.85, 4.0, 8), validation_error);
  CHECK_THROWS_AS(HalfSpaceGrid::make(2, 40.0, 64, 0.85, 4.0, 17), validation_error);
  CHECK_THROWS_AS(HalfSpaceGrid::make(3, 40.0, 64, 0.85, 4.0, 16), validation_error);
}

TEST_CASE("weighted p-norms reproduce exponential moments") {
  auto g = HalfSpaceGrid::make(1, 40.0, 800, 0.99);
  auto u = decay(g);
  auto sq = [&](double gamma) { double v = lp_norm(u, 2.0, gamma); return v * v; };
  CHECK(sq(0.0) == doctest::Approx(0.5).epsilon(2e-5));      // int e^{-2t}
  CHECK(sq(2.0) == doctest::Approx(0.25).epsilon(2e-5));     // int t^2 e^{-2t}
  CHECK(sq(4.0) == doctest::Approx(0.75).epsilon(2e-5));     // int t^4 e^{-2t}
  double v3 = lp_norm(u, 3.0, 0.0);
  CHECK(v3 == doctest::Approx(std::cbrt(1.0 / 3.0)).epsilon(2e-5));  // int e^{-3t}

  CHECK_THROWS_AS(lp_norm(u, 2.0, -1.0), validation_error);
  CHECK_THROWS_AS(lp_norm(u, 1.0, 0.0), validation_error);
  // Hardy quotients need gamma <= -1; weighted_p_norm allows it
  double q = weighted_p_norm(u, 2.0, -1.5);
  CHECK(q > 0.0);
  CHECK(std::isfinite(q));
}

TEST_CASE("grid derivatives match analytic derivatives") {
  auto g = HalfSpaceGrid::make(1, 40.0, 800, 0.99);
  auto u = decay(g);
  auto d1 = grid_derivative(u, 1, 0);
  auto d2 = grid_derivative(u, 2, 0);
  double e1 = 0, e2 = 0;
  for (int i = 0; i < g.n_normal; ++i) {
    e1 = std::max(e1, std::abs(d1.v[i].real() + std::exp(-g.xn[i])));
    e2 = std::max(e2, std::abs(d2.v[i].real() - std::exp(-g.xn[i])));
  }
  CHECK(e1 <= 5e-5);
  CHECK(e2 <= 5e-4);

  auto g2 = HalfSpaceGrid::make(2, 40.0, 200, 0.97, M_PI, 32);
  auto u2 = GridFunction::sample(g2, [](double t, double y) { return C(std::exp(-t) * std::sin(y)); });
  auto dlat = grid_derivative(u2, 0, 1);
  double el = 0;
  for (int i = 0; i < g2.n_normal; ++i)
    for (int j = 0; j < g2.n_lateral; ++j)
      el = std::max(el, std::abs(dlat.v[g2.index(i, j)].real() -
                                 std::exp(-g2.xn[i]) * std::cos(g2.xl[j])));
  CHECK(el <= 1e-12);  // spectral differentiation of a trig mode is exact

  double nl = lp_norm(u2, 2.0, 0.0);
  CHECK(nl == doctest::Approx(std::sqrt(0.5 * M_PI)).epsilon(1e-4));

  CHECK_THROWS_AS(grid_derivative(u, 5, 0), validation_error);
  CHECK_THROWS_AS(grid_derivative(u, 0, 1), validation_error);  // no lateral axis in dim 1
}

TEST_CASE("Sobolev norm composes the derivative ladder") {
  auto g = HalfSpaceGrid::make(1, 40.0, 800, 0.99);
  auto u = decay(g);
  NormSpec s1{1, 2.0, 0.0};
  // |e^{-t}|^2 + |(e^{-t})'|^2 integrates to exactly 1
  CHECK(sobolev_norm(u, s1) == doctest::Approx(1.0).epsilon(1e-6));
  NormSpec s0{0, 2.0, 0.0};
  CHECK(sobolev_norm(u, s0) == doctest::Approx(std::sqrt(0.5)).epsilon(2e-5));
  NormSpec bad{-1, 2.0, 0.0};
  CHECK_THROWS_AS(bad.validate(), validation_error);
  NormSpec badp{0, 0.9, 0.0};
  CHECK_THROWS_AS(badp.validate(), validation_error);
}

TEST_CASE("wall traces extrapolate the boundary values") {
  auto g = HalfSpaceGrid::make(1, 40.0, 800, 0.99);
  auto u = decay(g);
  CHECK(std::abs(trace_value(u) - C(1.0)) <= 1e-10);
  CHECK(std::abs(trace_normal(u) - C(-1.0)) <= 1e-6);
  auto v = GridFunction::sample(g, [](double t, double) { return C(t * std::exp(-t)); });
  CHECK(std::abs(trace_value(v)) <= 1e-10);
  CHECK(std::abs(trace_normal(v) - C(1.0)) <= 1e-6);
}

TEST_CASE("Hardy inequality: vanishing-trace case hits the sharp constant") {
  auto g = HalfSpaceGrid::make(1, 40.0, 800, 0.99);
  auto v = GridFunction::sample(g, [](double t, double) { return C(t * std::exp(-t)); });
  HardyResult h = hardy_check(v, 2.0, 0.0);
  CHECK(h.case_id == 1);
  // u = t e^{-t}: ||u/t|| = sqrt(1/2), ||u'|| = 1/2, quotient ratio sqrt(2)
  CHECK(h.lhs == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
  CHECK(h.rhs == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(h.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
  // p/(p-1-gamma) = 2 is the sharp constant: the quotient stays below it
  CHECK(h.ratio <= 2.0);
  CHECK(h.lhs <= 2.0 * h.rhs);
}

TEST_CASE("Hardy inequality: supercritical weight needs no trace gate") {
  auto g = HalfSpaceGrid::make(1, 40.0, 800, 0.99);
  auto u = decay(g);
  HardyResult h = hardy_check(u, 2.0, 4.0);
  CHECK(h.case_id == 2);
  // lhs^2 = int t^2 e^{-2t} = 1/4, rhs = (p/|gamma-p+1|) ||u'||_{gamma}
  CHECK(h.lhs == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(h.ratio == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
  CHECK(h.lhs <= h.rhs);
}

TEST_CASE("Hardy case 1 rejects functions with nonzero trace") {
  auto g = HalfSpaceGrid::make(1, 40.0, 800, 0.99);
  auto u = decay(g);  // trace 1
  CHECK_THROWS_AS(hardy_check(u, 2.0, 0.0), validation_error);
  CHECK_THROWS_WITH(hardy_check(u, 2.0, 0.0), doctest::Contains("vanishing trace"));
}

TEST_CASE("embedding estimate trades weight power for derivatives") {
  auto g = HalfSpaceGrid::make(1, 40.0, 800, 0.99);
  auto v = GridFunction::sample(g, [](double t, double) { return C(t * std::exp(-t)); });
  NormSpec spec{1, 2.0, 2.0};
  auto r = embedding_check(v, spec, 1);
  // lhs = ||t e^{-t}||_{L^2(t^0)} = sqrt(1/4) after the weight shift
  CHECK(r.lhs == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r.rhs >= r.lhs);
  CHECK(r.ratio == doctest::Approx(r.lhs / r.rhs).epsilon(1e-12));
}

TEST_CASE("pushforward samples through the inverse flattening") {
  auto zb = make_boundary("zero", 0.0, 0.5, 1.0, 2);
  PullbackMap map(zb);
  auto g = HalfSpaceGrid::make(2, 20.0, 24, 0.9, 2.0, 16);
  auto fn = [](const double* x) { return C(std::exp(-x[0]) * std::cos(x[1])); };
  auto push = pushforward(fn, map, g);
  auto direct = GridFunction::sample(g, [](double t, double y) { return C(std::exp(-t) * std::cos(y)); });
  double diff = (push.v - direct.v).cwiseAbs().maxCoeff();
  CHECK(diff <= 1e-12);  // zero boundary: flattening is the identity

  auto bb = make_boundary("bump", 0.1, 0.5, 1.0, 2);
  PullbackMap mb(bb);
  auto pb = pushforward(fn, mb, g);
  // flattened coordinates (y1, yt) sample the domain point psi_inverse(y)
  int i = 4, j = 3;
  double y[2] = {g.xn[i], g.xl[j]}, x[2];
  mb.psi_inverse(y, x);
  CHECK(std::abs(pb.v[g.index(i, j)] - fn(x)) <= 1e-12);
}

TEST_CASE("grid functions round-trip through CSV") {
  namespace fs = std::filesystem;
  auto g = HalfSpaceGrid::make(2, 20.0, 24, 0.9, 2.0, 16);
  auto u = GridFunction::sample(g, [](double t, double y) { return C(std::exp(-t), 0.1 * y); });
  fs::path dir = fs::temp_directory_path() / "flatcal_spaces_test";
  fs::create_directories(dir);
  std::string p = (dir / "u.csv").string();
  export_grid_function(u, p);
  auto back = import_grid_function(g, p);
  double diff = (back.v - u.v).cwiseAbs().maxCoeff();
  CHECK(diff <= 1e-10);
  export_grid_layout(g, (dir / "layout.csv").string());
  CHECK(fs::exists(dir / "layout.csv"));
  fs::remove_all(dir);
}
