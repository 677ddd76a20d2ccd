#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spp/geometry.hpp"

namespace spp {

struct AmplitudeState {
  std::vector<cplx> amplitudes;
  double position = 0.0;  // m

  std::size_t dimension() const { return amplitudes.size(); }
  double norm2() const {
    double s = 0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
  }
  static AmplitudeState excite(std::size_t n, std::size_t sheet = 0) {
    if (n < 2 || sheet >= n) throw DomainError("invalid chain dimension or excited sheet");
    AmplitudeState s;
    s.amplitudes.assign(n, cplx{0, 0});
    s.amplitudes[sheet] = 1.0;
    return s;
  }
};

/// Tridiagonal nearest-neighbour chain: H_{j,j+1} = H_{j+1,j} = couplings[j],
/// diagonal -i*loss[j].
struct ChainHamiltonian {
  std::vector<double> couplings;  // n-1 entries, 1/m
  std::vector<double> loss;       // n entries, >= 0, 1/m

  std::size_t dimension() const { return loss.size(); }

  void validate() const {
    if (loss.size() < 2 || couplings.size() + 1 != loss.size())
      throw DomainError("chain needs n >= 2 sheets and n-1 couplings");
    for (double a : loss)
      if (!(a >= 0)) throw DomainError("loss rates must be >= 0");
  }

  std::vector<std::vector<cplx>> dense() const {
    const std::size_t n = dimension();
    std::vector<std::vector<cplx>> m(n, std::vector<cplx>(n, cplx{0, 0}));
    for (std::size_t j = 0; j < n; ++j) m[j][j] = cplx{0, -loss[j]};
    for (std::size_t j = 0; j + 1 < n; ++j) m[j][j + 1] = m[j + 1][j] = couplings[j];
    return m;
  }
};

/// Position-dependent chain couplings; links[j][i] couples sheets j and j+1 at x_grid[i].
struct ChainSchedule {
  std::vector<double> x_grid;
  std::vector<std::vector<double>> links;

  std::size_t dimension() const { return links.size() + 1; }

  void validate() const {
    if (x_grid.size() < 2) throw DomainError("schedule needs at least two samples");
    if (links.empty()) throw DomainError("schedule needs at least one link");
    for (std::size_t i = 1; i < x_grid.size(); ++i)
      if (!(x_grid[i] > x_grid[i - 1])) throw DomainError("schedule x_grid must be strictly increasing");
    for (const auto& l : links)
      if (l.size() != x_grid.size()) throw DomainError("schedule link length mismatch");
  }

  static ChainSchedule from(const CouplingSchedule& s) { return {s.x_grid, {s.omega1, s.omega2}}; }

  /// Constant couplings over [x0, x0 + span].
  static ChainSchedule constant(std::span<const double> couplings, double x0, double span, std::size_t n) {
    ChainSchedule s;
    s.x_grid.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.x_grid[i] = x0 + span * static_cast<double>(i) / static_cast<double>(n - 1);
    for (double c : couplings) s.links.emplace_back(n, c);
    return s;
  }
};

struct Trajectory {
  std::vector<double> x_grid;
  std::vector<AmplitudeState> states;

  std::size_t dimension() const { return states.empty() ? 0 : states.front().dimension(); }
  double intensity(std::size_t sheet, std::size_t i) const { return std::norm(states[i].amplitudes[sheet]); }
  std::vector<double> intensities(std::size_t sheet) const {
    std::vector<double> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) out[i] = intensity(sheet, i);
    return out;
  }
  const AmplitudeState& final_state() const { return states.back(); }
};

namespace detail {

inline void chain_rhs(std::span<const double> omega, std::span<const double> loss, std::span<const cplx> a,
                      std::span<cplx> da) {
  // i da/dx = (H - i diag(loss)) a
  const std::size_t n = a.size();
  const cplx mi{0, -1};
  for (std::size_t j = 0; j < n; ++j) {
    cplx h = 0;
    if (j > 0) h += omega[j - 1] * a[j - 1];
    if (j + 1 < n) h += omega[j] * a[j + 1];
    da[j] = mi * h - loss[j] * a[j];
  }
}

}  // namespace detail

/// Classic fixed-step RK4 for i da/dx = (H(x) - i diag(loss)) a over the schedule grid,
/// couplings linearly interpolated between samples. `step` <= grid spacing; each grid
/// interval is split into equal sub-steps no longer than `step`; without a step the
/// grid spacing itself is used.
inline Trajectory propagate(const ChainSchedule& schedule, const AmplitudeState& initial,
                            std::span<const double> loss, std::optional<double> step = std::nullopt) {
  schedule.validate();
  const std::size_t n = schedule.dimension();
  const std::size_t m = schedule.x_grid.size();
  if (initial.dimension() != n) throw DomainError("initial state dimension does not match schedule");
  if (loss.size() != n) throw DomainError("loss vector dimension does not match schedule");
  for (double a : loss)
    if (!(a >= 0)) throw DomainError("loss rates must be >= 0");
  if (step && !(*step > 0)) throw DomainError("step must be > 0");

  Trajectory traj;
  traj.x_grid = schedule.x_grid;
  traj.states.reserve(m);
  AmplitudeState cur = initial;
  cur.position = schedule.x_grid.front();
  traj.states.push_back(cur);

  std::vector<cplx> a = cur.amplitudes, tmp(n), k1(n), k2(n), k3(n), k4(n);
  std::vector<double> w0(n - 1), wm(n - 1), w1(n - 1);

  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double x0 = schedule.x_grid[i];
    const double span = schedule.x_grid[i + 1] - x0;
    const double h_req = step ? *step : span;
    if (h_req > span * (1.0 + 1e-9)) throw DomainError("step exceeds the schedule grid spacing");
    const auto nsub = static_cast<std::size_t>(std::ceil(span / h_req - 1e-9));
    const double h = span / static_cast<double>(nsub);

    for (std::size_t s = 0; s < nsub; ++s) {
      const double t0 = static_cast<double>(s) / static_cast<double>(nsub);
      const double tm = (static_cast<double>(s) + 0.5) / static_cast<double>(nsub);
      const double t1 = static_cast<double>(s + 1) / static_cast<double>(nsub);
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const double lo = schedule.links[j][i], hi = schedule.links[j][i + 1];
        w0[j] = lo + (hi - lo) * t0;
        wm[j] = lo + (hi - lo) * tm;
        w1[j] = lo + (hi - lo) * t1;
      }
      detail::chain_rhs(w0, loss, a, k1);
      for (std::size_t j = 0; j < n; ++j) tmp[j] = a[j] + 0.5 * h * k1[j];
      detail::chain_rhs(wm, loss, tmp, k2);
      for (std::size_t j = 0; j < n; ++j) tmp[j] = a[j] + 0.5 * h * k2[j];
      detail::chain_rhs(wm, loss, tmp, k3);
      for (std::size_t j = 0; j < n; ++j) tmp[j] = a[j] + h * k3[j];
      detail::chain_rhs(w1, loss, tmp, k4);
      for (std::size_t j = 0; j < n; ++j) a[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    for (const auto& v : a)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericalBlowupError("non-finite amplitude during propagation", schedule.x_grid[i + 1]);
    traj.states.push_back(AmplitudeState{a, schedule.x_grid[i + 1]});
  }
  return traj;
}

inline Trajectory propagate(const CouplingSchedule& schedule, const AmplitudeState& initial,
                            std::span<const double> loss, std::optional<double> step = std::nullopt) {
  return propagate(ChainSchedule::from(schedule), initial, loss, step);
}

/// Same loss rate on every sheet.
inline std::vector<double> uniform_loss(std::size_t n, double alpha) { return std::vector<double>(n, alpha); }

/// Rabi solution of the symmetric two-sheet coupler: (cos^2(C s), sin^2(C s)).
inline std::pair<double, double> two_level_analytic(double coupling, double span) {
  const double c = std::cos(coupling * span), s = std::sin(coupling * span);
  return {c * c, s * s};
}

/// Zero-eigenvalue eigenvector of the lossless three-sheet Hamiltonian.
inline std::array<cplx, 3> dark_state(double omega1, double omega2) {
  const double norm = std::hypot(omega1, omega2);
  if (!(norm > 0)) throw DomainError("dark state undefined when both couplings vanish");
  return {cplx{omega2 / norm, 0}, cplx{0, 0}, cplx{-omega1 / norm, 0}};
}

struct FieldMap {
  std::vector<double> x_grid;
  std::vector<double> z_grid;
  std::vector<std::vector<double>> intensity;  // [x][z]
};

/// |Psi(x, z)|^2 with Psi = sum_i a_i(x) u(z - z_i(x)) / N. Input sheet at z = +d1(x),
/// middle at 0, output at z = -d2(x). The common exp(-iqx) phase drops out.
inline FieldMap field_map(const Trajectory& traj, const DeviceGeometry& geom, const SppMode& mode,
                          std::span<const double> z_grid) {
  if (traj.dimension() != 3) throw DomainError("field map needs a three-sheet trajectory");
  if (z_grid.size() < 2) throw DomainError("z grid needs at least two points");
  for (std::size_t i = 1; i < z_grid.size(); ++i)
    if (!(z_grid[i] > z_grid[i - 1])) throw DomainError("z grid must be strictly increasing");

  std::vector<std::array<double, 3>> elev(traj.x_grid.size());
  for (std::size_t i = 0; i < traj.x_grid.size(); ++i) {
    const auto [d1, d2] = sheet_separations(geom, traj.x_grid[i]);
    elev[i] = {d1, 0.0, -d2};
    if (z_grid.front() > -d2 || z_grid.back() < d1)
      throw DomainError("z grid does not cover all sheet elevations");
  }

  FieldMap map;
  map.x_grid = traj.x_grid;
  map.z_grid.assign(z_grid.begin(), z_grid.end());
  map.intensity.assign(traj.x_grid.size(), std::vector<double>(z_grid.size(), 0.0));
  for (std::size_t i = 0; i < traj.x_grid.size(); ++i) {
    const auto& a = traj.states[i].amplitudes;
    for (std::size_t k = 0; k < z_grid.size(); ++k) {
      cplx psi = 0;
      for (std::size_t j = 0; j < 3; ++j) psi += a[j] * evaluate_profile(ModeProfile{mode, elev[i][j]}, z_grid[k]);
      map.intensity[i][k] = std::norm(psi);
    }
  }
  return map;
}

}  // namespace spp
