#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "spp/errors.hpp"
#include "spp/units.hpp"

namespace spp {

using cplx = std::complex<double>;

/// SI physical constants (CODATA 2018).
struct PhysicalConstants {
  static constexpr double e = units::kElectronVolt;     // C
  static constexpr double h = 6.62607015e-34;           // J s
  static constexpr double hbar = h / (2.0 * std::numbers::pi);
  static constexpr double c = 299792458.0;              // m/s
  static constexpr double eps0 = 8.8541878128e-12;      // F/m
  static constexpr double mu0 = 1.25663706212e-6;       // H/m
  static constexpr double eta0 = 376.730313668;         // Ohm, sqrt(mu0/eps0)
  static constexpr double sigma0 = std::numbers::pi * e * e / (2.0 * h);  // S
};

using K = PhysicalConstants;

enum class RelaxationConvention {
  NoTwoPi,       // gamma = e vF^2 / (mu EF); gives 1.11e12 1/s at EF = 0.15 eV
  LiteralTwoPi,  // 2*pi times the above
};

/// Graphene sheet material record. All fields SI.
struct GrapheneSheet {
  double fermi_level = units::ev_to_joule(0.15);               // J
  double mobility = units::mobility_from_cm2(6e4);             // m^2/(V s)
  double fermi_velocity = 1e6;                                 // m/s
  double thickness = units::from_nm(0.33);                     // m
  std::optional<double> relaxation_rate;                       // 1/s

  static GrapheneSheet from_user_units(double fermi_ev, double mobility_cm2 = 6e4,
                                       double fermi_velocity = 1e6, double thickness_nm = 0.33,
                                       std::optional<double> gamma = std::nullopt) {
    GrapheneSheet s{units::ev_to_joule(fermi_ev), units::mobility_from_cm2(mobility_cm2),
                    fermi_velocity, units::from_nm(thickness_nm), gamma};
    s.validate();
    return s;
  }

  void validate() const {
    if (!(fermi_level > 0)) throw DomainError("fermi_level > 0 required");
    if (!(mobility > 0)) throw DomainError("mobility > 0 required");
    if (!(fermi_velocity > 0)) throw DomainError("fermi_velocity > 0 required");
    if (!(thickness > 0)) throw DomainError("thickness > 0 required");
    if (relaxation_rate && !(*relaxation_rate >= 0))
      throw DomainError("relaxation_rate >= 0 required");
  }
};

struct Medium {
  double permittivity = 3.9;  // relative, real

  void validate() const {
    if (!(permittivity >= 1.0)) throw DomainError("medium permittivity >= 1 required");
  }
};

inline constexpr Medium kSilica{3.9};

inline double default_relaxation_rate(const GrapheneSheet& sheet,
                                      RelaxationConvention convention = RelaxationConvention::NoTwoPi) {
  sheet.validate();
  const double v2 = sheet.fermi_velocity * sheet.fermi_velocity;
  const double gamma = K::e * v2 / (sheet.mobility * sheet.fermi_level);
  return convention == RelaxationConvention::LiteralTwoPi ? 2.0 * std::numbers::pi * gamma : gamma;
}

/// Explicit gamma if the sheet carries one, otherwise the mobility-derived default.
inline double relaxation_rate(const GrapheneSheet& sheet,
                              RelaxationConvention convention = RelaxationConvention::NoTwoPi) {
  if (sheet.relaxation_rate) return *sheet.relaxation_rate;
  return default_relaxation_rate(sheet, convention);
}

/// Intraband (Drude) surface conductivity
///   sigma = sigma0 * (4 EF / pi) / (hbar*gamma - i*hbar*omega).
inline cplx drude_conductivity(double omega, const GrapheneSheet& sheet, double gamma) {
  if (omega < 0 || gamma < 0) throw DomainError("omega and gamma must be non-negative");
  if (omega == 0 && gamma == 0) throw SingularityError("Drude conductivity singular at omega = gamma = 0");
  const cplx denom{K::hbar * gamma, -K::hbar * omega};
  return K::sigma0 * (4.0 * sheet.fermi_level / std::numbers::pi) / denom;
}

/// Thin-film equivalent permittivity of a sheet of thickness `thickness`:
///   eps_g = 1 + i sigma eta0 c / (omega thickness).
inline cplx effective_graphene_permittivity(double omega, cplx sigma_g, double thickness) {
  if (!(thickness > 0)) throw DomainError("graphene thickness > 0 required");
  if (!(omega > 0)) throw DomainError("omega > 0 required");
  return 1.0 + cplx{0, 1} * sigma_g * (K::eta0 * K::c / (omega * thickness));
}

}  // namespace spp
