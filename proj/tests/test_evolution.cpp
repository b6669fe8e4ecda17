#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "common/errors.h"
#include "evolution/heat.h"
#include "operators/assemble.h"
#include "support/oracles.h"

using namespace flatcal;
using C = std::complex<double>;

namespace {
std::function<Eigen::VectorXcd(double)> pulsed_forcing(const HalfSpaceGrid& g) {
  return [&g](double t) {
    auto f = GridFunction::sample(g, [t](double x, double) {
      return C((1.0 + 0.5 * std::cos(2.0 * M_PI * t)) * x * std::exp(-x));
    });
    return f.v;
  };
}
}  // namespace

TEST_CASE("time grid validates its parameters") {
  TimeGrid tg;
  CHECK_NOTHROW(tg.validate());
  CHECK(tg.tau() == doctest::Approx(1.0 / 64).epsilon(1e-15));
  CHECK(tg.time(32) == doctest::Approx(0.5).epsilon(1e-15));
  TimeGrid bad{-1.0, 64};
  CHECK_THROWS_AS(bad.validate(), validation_error);
  TimeGrid bad2{1.0, 0};
  CHECK_THROWS_AS(bad2.validate(), validation_error);
}

TEST_CASE("implicit Euler matches the dense-solver replica") {
  auto g = HalfSpaceGrid::make(1, 40.0, 128, 0.9);
  auto A = assemble_laplacian(g, BcKind::dirichlet, 1.0);
  TimeGrid tg{1.0, 64};
  auto forcing = pulsed_forcing(g);
  auto sol = heat_solve(A, tg, forcing);
  auto ref = oracle::dense_heat(A, tg, forcing);
  REQUIRE(sol.u.size() == 65);
  double worst = 0.0;
  for (size_t k = 0; k < sol.u.size(); ++k)
    worst = std::max(worst, (sol.u[k] - ref.u[k]).norm());
  CHECK(worst <= 1e-10);
  CHECK(sol.u[0].norm() == 0.0);
}

TEST_CASE("solution satisfies the backward-difference recurrence exactly") {
  auto g = HalfSpaceGrid::make(1, 40.0, 96, 0.9);
  auto A = assemble_laplacian(g, BcKind::neumann, 1.0);
  TimeGrid tg{0.5, 16};
  auto sol = heat_solve(A, tg, pulsed_forcing(g));
  // du/dt + S u = f at every step, by construction of the scheme
  for (int k = 0; k < tg.steps; ++k) {
    Eigen::VectorXcd r = sol.dudt[k] + sol.su[k] - sol.f[k];
    CHECK(r.norm() <= 1e-9 * sol.f[k].norm());
    Eigen::VectorXcd bd = (sol.u[k + 1] - sol.u[k]) / tg.tau();
    CHECK((sol.dudt[k] - bd).norm() <= 1e-12 * (1.0 + bd.norm()));
  }
}

TEST_CASE("single eigenmode decays at the implicit-Euler rate") {
  // scalar operator: u_{k+1} = (u_k + tau f) / (1 + tau s)
  auto g = HalfSpaceGrid::make(1, 40.0, 16, 0.9);
  auto A = assemble_laplacian(g, BcKind::dirichlet, 1.0);
  auto eig = oracle::dense_eig(A);
  int m = 3;
  double s = eig.lambda[m];
  // eigenvector of S in node coordinates
  Eigen::VectorXcd v = (eig.q.col(m).cwiseQuotient(eig.wsqrt)).cast<C>();
  TimeGrid tg{1.0, 8};
  auto sol = heat_solve(A, tg, [&](double) { return v; });
  double amp = 0.0;
  for (int k = 1; k <= tg.steps; ++k) {
    amp = (amp + tg.tau()) / (1.0 + tg.tau() * s);
    double got = std::abs(sol.u[k][0] / v[0]);
    CHECK(got == doctest::Approx(amp).epsilon(1e-9));
  }
}

TEST_CASE("regularity ratio replicates its weighted-sum definition") {
  auto g = HalfSpaceGrid::make(1, 40.0, 96, 0.9);
  auto A = assemble_laplacian(g, BcKind::dirichlet, 1.0);
  TimeGrid tg{1.0, 16};
  auto sol = heat_solve(A, tg, pulsed_forcing(g));
  NormSpec spec{0, 2.0, 0.0};
  double q = 2.0, a = 0.5;

  std::vector<double> w(tg.steps);
  w[0] = std::pow(tg.time(1), a + 1.0) / (a + 1.0);
  for (int k = 1; k < tg.steps; ++k)
    w[k] = tg.tau() * std::pow(0.5 * (tg.time(k) + tg.time(k + 1)), a);
  auto stack = [&](const std::vector<Eigen::VectorXcd>& vals) {
    double acc = 0.0;
    for (int k = 0; k < tg.steps; ++k) {
      GridFunction f{&g, vals[k]};
      double nk = lp_norm(f, 2.0, 0.0);
      acc += w[k] * nk * nk;
    }
    return std::sqrt(acc);
  };
  double want = (stack(sol.dudt) + stack(sol.su)) / stack(sol.f);
  CHECK(max_reg_ratio(sol, q, a, spec) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("regularity ratio stays order one for smooth forcing") {
  auto g = HalfSpaceGrid::make(1, 40.0, 128, 0.9);
  auto A = assemble_laplacian(g, BcKind::dirichlet, 1.0);
  TimeGrid tg{1.0, 64};
  auto sol = heat_solve(A, tg, pulsed_forcing(g));
  NormSpec spec{0, 2.0, 0.0};
  CHECK(max_reg_ratio(sol, 2.0, 0.0, spec) == doctest::Approx(1.121899).epsilon(1e-3));
  CHECK(max_reg_ratio(sol, 2.0, 0.5, spec) == doctest::Approx(1.082150).epsilon(1e-3));
  CHECK_THROWS_AS(max_reg_ratio(sol, 2.0, 1.5, spec), validation_error);
  CHECK_THROWS_AS(max_reg_ratio(sol, 0.5, 0.0, spec), validation_error);
}

TEST_CASE("heat solver validates forcing") {
  auto g = HalfSpaceGrid::make(1, 40.0, 64, 0.9);
  auto A = assemble_laplacian(g, BcKind::dirichlet, 1.0);
  TimeGrid tg{1.0, 4};
  CHECK_THROWS_AS(heat_solve(A, tg, [](double) { return Eigen::VectorXcd::Zero(3).eval(); }),
                  validation_error);
  auto zero = heat_solve(A, tg, [&](double) { return Eigen::VectorXcd::Zero(g.size()).eval(); });
  NormSpec spec{0, 2.0, 0.0};
  CHECK_THROWS_AS(max_reg_ratio(zero, 2.0, 0.0, spec), validation_error);
}

TEST_CASE("backward Euler converges at first order in the step") {
  auto g = HalfSpaceGrid::make(1, 40.0, 96, 0.9);
  auto A = assemble_laplacian(g, BcKind::dirichlet, 1.0);
  auto eig = oracle::dense_eig(A);
  int m = 2;
  double s = eig.lambda[m];
  Eigen::VectorXcd v = (eig.q.col(m).cwiseQuotient(eig.wsqrt)).cast<C>();
  // constant forcing along an eigenmode: u(t) = (1 - e^{-st})/s * v
  double exact = (1.0 - std::exp(-s)) / s;
  double prev = 0.0;
  for (int steps : {16, 32, 64}) {
    TimeGrid tg{1.0, steps};
    auto sol = heat_solve(A, tg, [&](double) { return v; });
    double err = std::abs(sol.u[steps][0] / v[0] - exact);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.1));
    prev = err;
  }
}
