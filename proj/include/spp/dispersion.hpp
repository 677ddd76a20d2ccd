#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>

#include "spp/materials.hpp"

namespace spp {

struct Excitation {
  double vacuum_wavelength = units::from_um(10.0);  // m

  static Excitation from_wavelength(double lambda0) {
    if (!(lambda0 > 0)) throw DomainError("vacuum_wavelength > 0 required");
    return Excitation{lambda0};
  }
  static Excitation from_angular_frequency(double omega) {
    if (!(omega > 0)) throw DomainError("angular frequency > 0 required");
    return Excitation{2.0 * std::numbers::pi * K::c / omega};
  }

  double angular_frequency() const { return 2.0 * std::numbers::pi * K::c / vacuum_wavelength; }
  double vacuum_wavenumber() const { return 2.0 * std::numbers::pi / vacuum_wavelength; }
};

/// Solved single-sheet TM plasmon. Medium 1 occupies the half space above the sheet,
/// medium 2 the half space below.
struct SppMode {
  cplx q;          // propagation constant, 1/m
  cplx k1, k2;     // transverse decay constants, 1/m
  cplx eps_g;      // thin-film graphene permittivity
  cplx k0;         // sqrt(q^2 - omega^2 eps_g / c^2), 1/m
  double normalization = 1.0;  // N, with N^2 = int |u|^2 dz
  cplx sigma_g;
  Excitation excitation;
  std::pair<Medium, Medium> media;

  double omega() const { return excitation.angular_frequency(); }
};

/// Where the sheet sits; u(z) decays away from it.
struct ModeProfile {
  SppMode mode;
  double sheet_elevation = 0.0;  // m
};

namespace detail {

// Principal root, flipped onto the evanescent branch Re(k) > 0.
inline cplx decay_constant(cplx q, double omega, double eps) {
  const double kv2 = omega * omega * eps / (K::c * K::c);
  cplx k = std::sqrt(q * q - kv2);
  if (k.real() < 0) k = -k;
  return k;
}

inline cplx dispersion_lhs(cplx q, double omega, double eps1, double eps2, cplx sigma) {
  const cplx k1 = decay_constant(q, omega, eps1);
  const cplx k2 = decay_constant(q, omega, eps2);
  return eps1 / k1 + eps2 / k2 + cplx{0, 1} * sigma / (K::eps0 * omega);
}

inline double mode_normalization(cplx k1, cplx k2) {
  return std::sqrt(0.5 / k1.real() + 0.5 / k2.real());
}

inline SppMode finish_mode(cplx q, cplx k1, cplx k2, const Excitation& ex, const Medium& m1,
                           const Medium& m2, cplx sigma, double thickness) {
  const double omega = ex.angular_frequency();
  SppMode mode;
  mode.q = q;
  mode.k1 = k1;
  mode.k2 = k2;
  mode.sigma_g = sigma;
  mode.eps_g = effective_graphene_permittivity(omega, sigma, thickness);
  mode.k0 = std::sqrt(q * q - omega * omega * mode.eps_g / (K::c * K::c));
  mode.normalization = mode_normalization(k1, k2);
  mode.excitation = ex;
  mode.media = {m1, m2};
  return mode;
}

inline void check_inputs(const Medium& m1, const Medium& m2, cplx sigma) {
  m1.validate();
  m2.validate();
  if (!(sigma.imag() > 0))
    throw NoBoundModeError("Im(sigma_g) <= 0: no TM surface plasmon is bound");
}

}  // namespace detail

inline constexpr double kDefaultThickness = 0.33e-9;

/// Closed-form root for equal media: k = 2 i eps eps0 omega / sigma.
inline SppMode solve_dispersion_symmetric(const Excitation& ex, const Medium& medium, cplx sigma,
                                          double thickness = kDefaultThickness) {
  detail::check_inputs(medium, medium, sigma);
  const double omega = ex.angular_frequency();
  const double eps = medium.permittivity;
  const cplx k = cplx{0, 2.0 * eps * K::eps0 * omega} / sigma;
  if (!(k.real() > 0)) throw NoBoundModeError("closed-form decay constant is not evanescent");
  const cplx q = std::sqrt(k * k + omega * omega * eps / (K::c * K::c));
  return detail::finish_mode(q, k, k, ex, medium, medium, sigma, thickness);
}

/// Damped Newton iteration on q. `seed` is usually the symmetric root at the
/// mean permittivity.
inline SppMode solve_dispersion_newton(const Excitation& ex, const Medium& m1, const Medium& m2,
                                       cplx sigma, cplx seed, double thickness = kDefaultThickness) {
  detail::check_inputs(m1, m2, sigma);
  const double omega = ex.angular_frequency();
  const double e1 = m1.permittivity, e2 = m2.permittivity;
  const double scale = std::abs(sigma / (K::eps0 * omega));

  cplx q = seed;
  cplx f = detail::dispersion_lhs(q, omega, e1, e2, sigma);
  bool converged = false;
  for (int iter = 0; iter < 100 && !converged; ++iter) {
    const cplx k1 = detail::decay_constant(q, omega, e1);
    const cplx k2 = detail::decay_constant(q, omega, e2);
    // d(eps/k)/dq = -eps q / k^3
    const cplx df = -e1 * q / (k1 * k1 * k1) - e2 * q / (k2 * k2 * k2);
    cplx step = f / df;
    cplx trial = q - step;
    cplx f_trial = detail::dispersion_lhs(trial, omega, e1, e2, sigma);
    for (int halving = 0; halving < 8 && std::abs(f_trial) >= std::abs(f); ++halving) {
      step *= 0.5;
      trial = q - step;
      f_trial = detail::dispersion_lhs(trial, omega, e1, e2, sigma);
    }
    q = trial;
    f = f_trial;
    converged = std::abs(step) < 1e-12 * std::abs(q) || std::abs(f) == 0.0;
  }
  const double residual = std::abs(f) / scale;
  if (!converged || !(residual < 1e-10))
    throw ConvergenceError("dispersion Newton iteration did not converge", residual);
  if (q.real() < 0) q = -q;
  const cplx k1 = detail::decay_constant(q, omega, e1);
  const cplx k2 = detail::decay_constant(q, omega, e2);
  if (!(k1.real() > 0 && k2.real() > 0))
    throw ConvergenceError("root is not on the bound branch", residual);
  return detail::finish_mode(q, k1, k2, ex, m1, m2, sigma, thickness);
}

/// Solve eps1/k1 + eps2/k2 + i sigma/(eps0 omega) = 0 for the bound TM plasmon.
inline SppMode solve_dispersion(const Excitation& ex, const Medium& m1, const Medium& m2, cplx sigma,
                                double thickness = kDefaultThickness) {
  if (m1.permittivity == m2.permittivity) return solve_dispersion_symmetric(ex, m1, sigma, thickness);
  const Medium mean{0.5 * (m1.permittivity + m2.permittivity)};
  const SppMode seed = solve_dispersion_symmetric(ex, mean, sigma, thickness);
  return solve_dispersion_newton(ex, m1, m2, sigma, seed.q, thickness);
}

/// Convenience: Drude conductivity plus symmetric-media solve.
inline SppMode solve_sheet_mode(const Excitation& ex, const GrapheneSheet& sheet, const Medium& medium,
                                RelaxationConvention convention = RelaxationConvention::NoTwoPi) {
  const double omega = ex.angular_frequency();
  const cplx sigma = drude_conductivity(omega, sheet, relaxation_rate(sheet, convention));
  return solve_dispersion(ex, medium, medium, sigma, sheet.thickness);
}

/// Relative residual of the dispersion relation at the mode's own q.
inline double relative_residual(const SppMode& mode) {
  const double omega = mode.omega();
  const cplx lhs = detail::dispersion_lhs(mode.q, omega, mode.media.first.permittivity,
                                          mode.media.second.permittivity, mode.sigma_g);
  return std::abs(lhs) / std::abs(mode.sigma_g / (K::eps0 * omega));
}

/// L_x = 1 / (2 Im q); +infinity for a lossless mode.
inline double propagation_length(const SppMode& mode) {
  const double im = mode.q.imag();
  if (im < 0) throw DomainError("Im(q) < 0: mode has gain");
  if (im == 0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * im);
}

/// 1/e amplitude decay distance on side 1 (above) or 2 (below).
inline double confinement_length(const SppMode& mode, int side) {
  if (side != 1 && side != 2) throw DomainError("side must be 1 or 2");
  const double re = (side == 1 ? mode.k1 : mode.k2).real();
  if (!(re > 0)) throw DomainError("Re(k) > 0 required");
  return 1.0 / re;
}

/// Normalized profile u(z)/N with u(z) = exp(-k_m |z - z_sheet|).
inline cplx evaluate_profile(const ModeProfile& profile, double z) {
  const double s = z - profile.sheet_elevation;
  const cplx k = s >= 0 ? profile.mode.k1 : profile.mode.k2;
  return std::exp(-k * std::abs(s)) / profile.mode.normalization;
}

}  // namespace spp
