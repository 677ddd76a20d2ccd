#pragma once

// Reference implementations used to check the production paths. Nothing here
// calls into coupling.hpp or dynamics.hpp; keep it that way.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "spp/dispersion.hpp"

namespace spp::oracles {

struct QuadratureSpec {
  double abs_tol = 1e-30;
  double rel_tol = 1e-12;
  std::size_t max_subdivisions = 200000;

  void validate() const {
    if (!(abs_tol > 0 && rel_tol > 0)) throw DomainError("quadrature tolerances must be > 0");
    if (max_subdivisions < 16) throw DomainError("max_subdivisions >= 16 required");
  }
};

struct QuadratureResult {
  cplx value;
  double tail_bound;        // bound on |integral| dropped by truncation
  std::size_t subdivisions;
};

namespace detail {

template <class F>
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(F f, double tol, std::size_t budget) : f_(f), tol_(tol), budget_(budget) {}

  cplx integrate(double a, double b) {
    const double m = 0.5 * (a + b);
    const cplx fa = f_(a), fm = f_(m), fb = f_(b);
    return refine(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol_, 0);
  }
  std::size_t used() const { return used_; }

 private:
  static cplx simpson(double a, double b, cplx fa, cplx fm, cplx fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

  cplx refine(double a, double b, cplx fa, cplx fm, cplx fb, cplx whole, double tol, int depth) {
    if (++used_ > budget_) throw OracleFailure("adaptive Simpson exceeded its subdivision budget");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cplx flm = f_(lm), frm = f_(rm);
    const cplx left = simpson(a, m, fa, flm, fm);
    const cplx right = simpson(m, b, fm, frm, fb);
    const cplx delta = left + right - whole;
    if (depth >= 60) throw OracleFailure("adaptive Simpson recursion too deep");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  F f_;
  double tol_;
  std::size_t budget_;
  std::size_t used_ = 0;
};

}  // namespace detail

/// Adaptive Simpson evaluation of int exp(-ka|z - d/2|) exp(-kb|z + d/2|) dz,
/// truncated 40 decay lengths beyond the outer sheets. Breakpoints at the kinks.
inline QuadratureResult overlap_quadrature(cplx ka, cplx kb, double d, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(ka.real() > 0 && kb.real() > 0)) throw DomainError("quadrature requires Re(k) > 0");
  if (!(d >= 0)) throw DomainError("quadrature requires d >= 0");
  auto f = [=](double z) { return std::exp(-ka * std::abs(z - 0.5 * d)) * std::exp(-kb * std::abs(z + 0.5 * d)); };
  const double kmin = std::min(ka.real(), kb.real());
  const double reach = 40.0 / kmin;

  // Rough magnitude sets the absolute target for the relative tolerance.
  const double scale = std::exp(-kmin * d) / (ka.real() + kb.real()) + d * std::exp(-0.5 * (ka.real() + kb.real()) * d);
  const double tol = std::max(spec.abs_tol, spec.rel_tol * scale);

  std::vector<double> breaks{-0.5 * d - reach, -0.5 * d, 0.5 * d, 0.5 * d + reach};
  QuadratureResult r{0.0, 0.0, 0};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] <= breaks[i]) continue;
    detail::AdaptiveSimpson<decltype(f)> simpson(f, tol / 3.0, spec.max_subdivisions - r.subdivisions);
    r.value += simpson.integrate(breaks[i], breaks[i + 1]);
    r.subdivisions += simpson.used();
  }
  // |tail| <= e^{-Re(k) reach} / Re(k+k') on each side
  r.tail_bound = 2.0 * std::exp(-40.0) / (ka.real() + kb.real());
  return r;
}

/// |eps1/k1 + eps2/k2 + i sigma/(eps0 omega)| / |sigma/(eps0 omega)|, decay constants
/// recomputed from q on the evanescent branch.
inline double dispersion_residual(const SppMode& mode, cplx sigma) {
  const double omega = mode.excitation.angular_frequency();
  const double c2 = K::c * K::c;
  auto k_of = [&](double eps) {
    cplx k = std::sqrt(mode.q * mode.q - omega * omega * eps / c2);
    return k.real() < 0 ? -k : k;
  };
  const double e1 = mode.media.first.permittivity, e2 = mode.media.second.permittivity;
  const cplx drive = sigma / (K::eps0 * omega);
  const cplx lhs = e1 / k_of(e1) + e2 / k_of(e2) + cplx{0, 1} * drive;
  return std::abs(lhs) / std::abs(drive);
}

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Dense H - i diag(loss) for a nearest-neighbour chain.
inline CMatrix chain_matrix(const std::vector<double>& couplings, const std::vector<double>& loss) {
  const auto n = static_cast<Eigen::Index>(loss.size());
  if (n < 2 || couplings.size() + 1 != loss.size()) throw DomainError("chain needs n >= 2 and n-1 couplings");
  CMatrix a = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a(j, j) = cplx{0, -loss[static_cast<std::size_t>(j)]};
  for (Eigen::Index j = 0; j + 1 < n; ++j) a(j, j + 1) = a(j + 1, j) = couplings[static_cast<std::size_t>(j)];
  return a;
}

/// exp(-i A span) via eigen-decomposition of A = H - i diag(loss).
inline CMatrix evolution_operator(const CMatrix& a, double span) {
  if (a.rows() > 8) throw DomainError("expm_reference supports n <= 8");
  Eigen::ComplexEigenSolver<CMatrix> es(a);
  if (es.info() != Eigen::Success) throw OracleFailure("eigen-decomposition failed");
  const CMatrix& v = es.eigenvectors();
  Eigen::FullPivLU<CMatrix> lu(v);
  if (lu.rcond() < 1e-10) throw OracleFailure("chain matrix is numerically defective");
  CVector phases(a.rows());
  for (Eigen::Index j = 0; j < a.rows(); ++j) phases(j) = std::exp(cplx{0, -1} * es.eigenvalues()(j) * span);
  const CMatrix u = v * phases.asDiagonal() * lu.inverse();
  const double recon = (a * v - v * es.eigenvalues().asDiagonal()).norm();
  if (recon > 1e-12 * std::max(1.0, a.norm()) * a.rows()) throw OracleFailure("eigen-decomposition residual too large");
  return u;
}

inline CVector expm_reference(const std::vector<double>& couplings, const std::vector<double>& loss,
                              const CVector& a0, double span) {
  return evolution_operator(chain_matrix(couplings, loss), span) * a0;
}

/// Piecewise-constant (midpoint) product of exact propagators over a sampled chain.
/// links[j][i] is coupling j at x_grid[i].
inline CVector staircase_reference(const std::vector<double>& x_grid, const std::vector<std::vector<double>>& links,
                                   const std::vector<double>& loss, const CVector& a0) {
  CVector a = a0;
  std::vector<double> mid(links.size());
  for (std::size_t i = 0; i + 1 < x_grid.size(); ++i) {
    for (std::size_t j = 0; j < links.size(); ++j) mid[j] = 0.5 * (links[j][i] + links[j][i + 1]);
    a = expm_reference(mid, loss, a, x_grid[i + 1] - x_grid[i]);
  }
  return a;
}

}  // namespace spp::oracles
