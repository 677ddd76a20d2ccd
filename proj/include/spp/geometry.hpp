#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "spp/coupling.hpp"

namespace spp {

/// Curved three-sheet coupler. The middle sheet lies on z = 0; the input sheet
/// bends above it with its closest approach at x = +offset/2, the output sheet
/// below with its closest approach at x = -offset/2.
struct DeviceGeometry {
  double radius = 800e-9;   // R
  double offset = 200e-9;   // delta
  double min_gap = 20e-9;   // d_min
  double length = 1e-6;     // L

  void validate() const {
    if (!(radius > 0)) throw DomainError("radius > 0 required");
    if (!(offset >= 0)) throw DomainError("offset >= 0 required");
    if (!(min_gap > 0)) throw DomainError("min_gap > 0 required");
    if (!(length > 0)) throw DomainError("length > 0 required");
    if (!(0.5 * length + 0.5 * offset <= radius))
      throw DomainError("geometry invalid: L/2 + delta/2 <= R required");
  }

  bool is_valid() const {
    return radius > 0 && offset >= 0 && min_gap > 0 && length > 0 && 0.5 * length + 0.5 * offset <= radius;
  }

  /// Uniform stretch of (L, R, delta); the minimum gap is kept.
  DeviceGeometry stretched(double s) const { return {radius * s, offset * s, min_gap, length * s}; }
};

struct CouplingSchedule {
  std::vector<double> x_grid;  // m, uniform, increasing
  std::vector<double> omega1;  // input <-> middle, 1/m
  std::vector<double> omega2;  // middle <-> output, 1/m

  std::size_t size() const { return x_grid.size(); }
};

struct AdiabaticityReport {
  std::vector<double> x_grid;
  std::vector<double> mixing_angle;  // atan2(omega1, omega2)
  std::vector<double> margin;        // |dtheta/dx| / sqrt(omega1^2 + omega2^2)
  std::vector<bool> reliable;        // false where both couplings vanish

  double max_margin() const {
    double m = 0;
    for (std::size_t i = 0; i < margin.size(); ++i)
      if (reliable[i]) m = std::max(m, margin[i]);
    return m;
  }
};

namespace detail {

inline double arc_gap(const DeviceGeometry& g, double x, double centre) {
  const double u = x - centre;
  double r2 = g.radius * g.radius - u * u;
  if (r2 < 0) {
    // |u| == R up to rounding of the boundary case L/2 + delta/2 == R
    if (r2 < -1e-12 * g.radius * g.radius) throw DomainError("x outside the arc domain |x -/+ delta/2| <= R");
    r2 = 0;
  }
  return (g.min_gap + g.radius) - std::sqrt(r2);
}

}  // namespace detail

/// Gaps (d1, d2) between the middle sheet and the input / output sheets at x.
inline std::pair<double, double> sheet_separations(const DeviceGeometry& g, double x) {
  return {detail::arc_gap(g, x, 0.5 * g.offset), detail::arc_gap(g, x, -0.5 * g.offset)};
}

/// Symmetric uniform grid on [-L/2, L/2]; x[i] == -x[n-1-i] exactly.
inline std::vector<double> symmetric_grid(double length, std::size_t n) {
  if (n < 2) throw DomainError("grid needs at least two points");
  std::vector<double> x(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (2.0 * static_cast<double>(i) - denom) / denom;
    x[i] = 0.5 * length * t;
  }
  return x;
}

inline constexpr std::size_t kDefaultSamples = 4096;

inline CouplingSchedule build_schedule(const DeviceGeometry& g, const SppMode& mode,
                                       std::size_t n_samples = kDefaultSamples) {
  g.validate();
  if (n_samples < 64) throw DomainError("n_samples >= 64 required");
  CouplingSchedule s;
  s.x_grid = symmetric_grid(g.length, n_samples);
  s.omega1.resize(n_samples);
  s.omega2.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto [d1, d2] = sheet_separations(g, s.x_grid[i]);
    s.omega1[i] = coupling_strength(mode, d1);
    s.omega2[i] = coupling_strength(mode, d2);
  }
  return s;
}

inline AdiabaticityReport adiabaticity_report(const CouplingSchedule& s) {
  const std::size_t n = s.size();
  if (n < 2 || s.omega1.size() != n || s.omega2.size() != n) throw DomainError("malformed schedule");
  AdiabaticityReport r;
  r.x_grid = s.x_grid;
  r.mixing_angle.resize(n);
  r.margin.assign(n, 0.0);
  r.reliable.assign(n, true);
  for (std::size_t i = 0; i < n; ++i) r.mixing_angle[i] = std::atan2(s.omega1[i], s.omega2[i]);
  // atan2(0, 0) = 0 breaks continuity; carry the neighbour's angle instead.
  for (std::size_t i = 0; i < n; ++i) {
    if (s.omega1[i] == 0 && s.omega2[i] == 0) {
      r.reliable[i] = false;
      if (i > 0) r.mixing_angle[i] = r.mixing_angle[i - 1];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    const double dtheta = (r.mixing_angle[hi] - r.mixing_angle[lo]) / (s.x_grid[hi] - s.x_grid[lo]);
    const double rabi = std::hypot(s.omega1[i], s.omega2[i]);
    if (rabi > 0) r.margin[i] = std::abs(dtheta) / rabi;
    else r.reliable[i] = false;
  }
  return r;
}

}  // namespace spp
