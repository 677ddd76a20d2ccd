// Minimal library usage: solve the sheet mode, build the curved-device
// schedule and print the final intensities.

#include <cstdio>

#include "spp/spp.hpp"

int main() {
  using namespace spp;
  const auto sheet = GrapheneSheet::from_user_units(0.15, 6e4, 1e6, 0.33, 2e12);
  const auto mode = solve_sheet_mode(Excitation::from_wavelength(10e-6), sheet, kSilica);
  const DeviceGeometry geom;  // R = 800 nm, delta = 200 nm, d_min = 20 nm, L = 1 um

  std::printf("q = %.4g + %.4gi 1/um, |C(20 nm)| = %.4g 1/um\n", mode.q.real() * 1e-6, mode.q.imag() * 1e-6,
              std::abs(coupling_coefficient(mode, 20e-9).c12) * 1e-6);

  const auto schedule = build_schedule(geom, mode);
  for (double alpha : {0.0, mode.q.imag()}) {
    const auto traj = propagate(schedule, AmplitudeState::excite(3), uniform_loss(3, alpha));
    const auto& a = traj.final_state().amplitudes;
    std::printf("alpha = %.3g 1/um: I_input %.4f  I_middle %.4g  I_output %.4g\n", alpha * 1e-6, std::norm(a[0]),
                std::norm(a[1]), std::norm(a[2]));
  }
}
