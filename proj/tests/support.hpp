#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "golden/golden_values.hpp"
#include "spp/spp.hpp"

namespace testing_support {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
inline double rel(spp::cplx a, spp::cplx b) { return std::abs(a - b) / std::abs(b); }

inline spp::GrapheneSheet default_sheet(double ef_ev = 0.15, double gamma = 2e12) {
  return spp::GrapheneSheet::from_user_units(ef_ev, 6e4, 1e6, 0.33, gamma);
}

inline spp::SppMode default_mode(double lambda_um = 10.0, double ef_ev = 0.15, double gamma = 2e12) {
  return spp::solve_sheet_mode(spp::Excitation::from_wavelength(lambda_um * 1e-6), default_sheet(ef_ev, gamma),
                               spp::kSilica);
}

}  // namespace testing_support
