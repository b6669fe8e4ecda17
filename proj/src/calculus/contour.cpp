#include "calculus/contour.h"

#include <Eigen/SparseLU>

#include "common/errors.h"
#include "common/parallel.h"

namespace flatcal {

void ContourSpec::validate() const {
  if (!(nu > 0.0 && nu < M_PI)) throw validation_error("contour: angle must lie in (0, pi)");
  if (!(r_min > 0.0 && r_max > r_min)) throw validation_error("contour: need 0 < r_min < r_max");
  if (nodes_per_decade < 2) throw validation_error("contour: nodes_per_decade must be at least 2");
}

std::vector<double> ContourSpec::log_nodes() const {
  validate();
  double s0 = std::log(r_min), s1 = std::log(r_max);
  double target = std::log(10.0) / nodes_per_decade;
  int k = std::max(1, (int)std::lround((s1 - s0) / target));
  std::vector<double> s(k + 1);
  for (int i = 0; i <= k; ++i) s[i] = s0 + (s1 - s0) * i / k;
  return s;
}

std::vector<double> ContourSpec::weights() const {
  std::vector<double> s = log_nodes();
  double ds = s.size() > 1 ? s[1] - s[0] : 0.0;
  std::vector<double> w(s.size(), ds);
  w.front() = 0.5 * ds;
  w.back() = 0.5 * ds;
  return w;
}

SpMat positive_real(const DiscreteOperator& A) {
  SpMat S = -A.M;
  for (int i = 0; i < S.rows(); ++i) S.coeffRef(i, i) += A.mu;
  S.makeCompressed();
  return S;
}

std::vector<std::vector<Eigen::VectorXcd>> contour_apply_many(
    const SpMat& S, const ContourSpec& spec, const std::vector<SectorFunction>& fs,
    const std::vector<Eigen::VectorXcd>& probes, int threads) {
  using C = std::complex<double>;
  spec.validate();
  if (fs.empty() || probes.empty()) throw validation_error("contour: empty function or probe set");
  const Eigen::Index n = S.rows();
  for (const auto& v : probes)
    if (v.size() != n) throw validation_error("contour: probe length does not match the operator");

  std::vector<double> snodes = spec.log_nodes();
  std::vector<double> w = spec.weights();
  const size_t nf = fs.size(), np = probes.size(), nk = snodes.size();
  const size_t nblocks = 16;

  std::vector<std::vector<std::vector<Eigen::VectorXcd>>> acc(nblocks);
  for (auto& b : acc) {
    b.assign(nf, {});
    for (auto& row : b) row.assign(np, Eigen::VectorXcd::Zero(n));
  }

  SpMatC sc = S.cast<C>();
  SpMatC ident(n, n);
  ident.setIdentity();

  parallel_for(nblocks, threads, [&](size_t b) {
    size_t k0 = b * nk / nblocks, k1 = (b + 1) * nk / nblocks;
    for (size_t k = k0; k < k1; ++k) {
      C zp = std::polar(std::exp(snodes[k]), spec.nu);
      C zm = std::conj(zp);
      SpMatC Ck = (zp * ident - sc).eval();
      Eigen::SparseLU<SpMatC> lu;
      lu.compute(Ck);
      if (lu.info() != Eigen::Success)
        throw numeric_error("contour: factorization failed on the contour");
      for (size_t j = 0; j < np; ++j) {
        Eigen::VectorXcd up = lu.solve(probes[j]);
        Eigen::VectorXcd um = lu.solve(probes[j].conjugate()).conjugate();
        for (size_t i = 0; i < nf; ++i)
          acc[b][i][j] += w[k] * (fs[i](zm) * zm * um - fs[i](zp) * zp * up);
      }
    }
  });

  std::vector<std::vector<Eigen::VectorXcd>> out(nf);
  C scale = 1.0 / (C(0.0, 2.0 * M_PI));
  for (size_t i = 0; i < nf; ++i) {
    out[i].assign(np, Eigen::VectorXcd::Zero(n));
    for (size_t j = 0; j < np; ++j) {
      for (size_t b = 0; b < nblocks; ++b) out[i][j] += acc[b][i][j];
      out[i][j] *= scale;
    }
  }
  return out;
}

GridFunction apply_function(const DiscreteOperator& A, const SectorFunction& f,
                            const GridFunction& v, const ContourSpec& spec, int threads) {
  if (v.grid != A.grid) throw validation_error("apply_function: grid mismatch");
  SpMat S = positive_real(A);
  auto res = contour_apply_many(S, spec, {f}, {v.v}, threads);
  GridFunction out = GridFunction::zero(*A.grid);
  out.v = res[0][0];
  return out;
}

}  // namespace flatcal
