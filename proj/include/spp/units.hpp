#pragma once

// Conversions between the user-facing units (eV, nm, um, cm^2/V.s) and SI.
// Everything past the API boundary is SI.

namespace spp::units {

inline constexpr double kElectronVolt = 1.602176634e-19;  // J

constexpr double ev_to_joule(double ev) { return ev * kElectronVolt; }
constexpr double joule_to_ev(double j) { return j / kElectronVolt; }

constexpr double from_nm(double nm) { return nm * 1e-9; }
constexpr double to_nm(double m) { return m * 1e9; }
constexpr double from_um(double um) { return um * 1e-6; }
constexpr double to_um(double m) { return m * 1e6; }

// 1/m <-> 1/um
constexpr double per_um_to_per_m(double v) { return v * 1e6; }
constexpr double per_m_to_per_um(double v) { return v * 1e-6; }

constexpr double mobility_from_cm2(double cm2_per_vs) { return cm2_per_vs * 1e-4; }
constexpr double mobility_to_cm2(double m2_per_vs) { return m2_per_vs * 1e4; }

}  // namespace spp::units
