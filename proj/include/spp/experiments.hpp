#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spp/dynamics.hpp"
#include "spp/hash.hpp"

namespace spp {

inline constexpr const char* kVersion = "1.0.0";

/// Everything needed to build and run one device.
struct DevicePoint {
  Excitation excitation;                  // ignored when `wavevector` is set
  std::optional<double> wavevector;       // target Re(q), 1/m
  GrapheneSheet sheet{units::ev_to_joule(0.15), units::mobility_from_cm2(6e4), 1e6, 0.33e-9, 2e12};
  Medium medium = kSilica;
  DeviceGeometry geometry;
  RelaxationConvention convention = RelaxationConvention::NoTwoPi;
};

enum class DeviceKind { ThreeLayerCurved, TwoLayerParallel };
enum class Observable { OutputIntensity, MiddleIntensity, TransferEfficiency };
enum class Parameter { Wavevector, Wavelength, Length, Radius, Offset, MinGap, FermiLevel };

inline const char* to_string(Parameter p) {
  switch (p) {
    case Parameter::Wavevector: return "wavevector_per_um";
    case Parameter::Wavelength: return "lambda0_um";
    case Parameter::Length: return "L_um";
    case Parameter::Radius: return "R_nm";
    case Parameter::Offset: return "delta_nm";
    case Parameter::MinGap: return "d_min_nm";
    case Parameter::FermiLevel: return "E_F_eV";
  }
  return "?";
}

inline const char* to_string(Observable o) {
  switch (o) {
    case Observable::OutputIntensity: return "I_output";
    case Observable::MiddleIntensity: return "I_middle";
    case Observable::TransferEfficiency: return "transfer_efficiency";
  }
  return "?";
}

/// SI value for a parameter; the user-facing unit is given by to_string().
inline void set_parameter(DevicePoint& p, Parameter which, double value) {
  switch (which) {
    case Parameter::Wavevector: p.wavevector = value; break;
    case Parameter::Wavelength: p.wavevector.reset(); p.excitation = Excitation::from_wavelength(value); break;
    case Parameter::Length: p.geometry.length = value; break;
    case Parameter::Radius: p.geometry.radius = value; break;
    case Parameter::Offset: p.geometry.offset = value; break;
    case Parameter::MinGap: p.geometry.min_gap = value; break;
    case Parameter::FermiLevel: p.sheet.fermi_level = value; break;
  }
}

/// SI value -> the unit named by to_string(Parameter).
inline double to_user_units(Parameter which, double value) {
  switch (which) {
    case Parameter::Wavevector: return units::per_m_to_per_um(value);
    case Parameter::Wavelength:
    case Parameter::Length: return units::to_um(value);
    case Parameter::Radius:
    case Parameter::Offset:
    case Parameter::MinGap: return units::to_nm(value);
    case Parameter::FermiLevel: return units::joule_to_ev(value);
  }
  return value;
}

struct WavevectorInversion {
  Excitation excitation;
  SppMode mode;
  int iterations = 0;
};

/// Bisection on omega so that Re q(omega) hits `target` (1/m). The bracket spans
/// vacuum wavelengths [lambda_min, lambda_max].
inline WavevectorInversion invert_wavevector(double target, const GrapheneSheet& sheet, const Medium& medium,
                                             RelaxationConvention convention = RelaxationConvention::NoTwoPi,
                                             double lambda_min = 0.5e-6, double lambda_max = 1e-3) {
  if (!(target > 0)) throw DomainError("target wavevector > 0 required");
  auto re_q = [&](double omega) {
    return solve_sheet_mode(Excitation::from_angular_frequency(omega), sheet, medium, convention).q.real();
  };
  double lo = Excitation::from_wavelength(lambda_max).angular_frequency();
  double hi = Excitation::from_wavelength(lambda_min).angular_frequency();
  const double q_lo = re_q(lo), q_hi = re_q(hi);
  if (!(target >= q_lo && target <= q_hi))
    throw DomainError("wavevector " + format_double(units::per_m_to_per_um(target)) +
                      " 1/um not bracketed; attainable range [" + format_double(units::per_m_to_per_um(q_lo)) +
                      ", " + format_double(units::per_m_to_per_um(q_hi)) + "] 1/um");
  int it = 0;
  while (hi - lo > 1e-14 * hi && it < 200) {
    const double mid = 0.5 * (lo + hi);
    if (re_q(mid) < target) lo = mid;
    else hi = mid;
    ++it;
  }
  const Excitation ex = Excitation::from_angular_frequency(0.5 * (lo + hi));
  return {ex, solve_sheet_mode(ex, sheet, medium, convention), it};
}

/// Mode for a device point, inverting the dispersion when a wavevector is requested.
inline SppMode resolve_mode(const DevicePoint& p) {
  if (p.wavevector) return invert_wavevector(*p.wavevector, p.sheet, p.medium, p.convention).mode;
  return solve_sheet_mode(p.excitation, p.sheet, p.medium, p.convention);
}

struct DeviceOutcome {
  double input = 0, middle = 0, output = 0;
  double residual = 0;  // dispersion residual of the mode used
};

/// Parallel two-sheet coupler: constant coupling |Re C(d)| over length L.
inline DeviceOutcome run_parallel_device(const SppMode& mode, double length, double gap, bool loss,
                                         std::size_t n_samples = kDefaultSamples) {
  if (!(length > 0 && gap > 0)) throw DomainError("length and gap must be > 0");
  const double c = coupling_strength(mode, gap);
  const std::vector<double> links{c};
  const auto schedule = ChainSchedule::constant(links, -0.5 * length, length, n_samples);
  const auto alpha = uniform_loss(2, loss ? mode.q.imag() : 0.0);
  const auto traj = propagate(schedule, AmplitudeState::excite(2), alpha);
  const auto& a = traj.final_state().amplitudes;
  return {std::norm(a[0]), 0.0, std::norm(a[1]), relative_residual(mode)};
}

inline DeviceOutcome run_curved_device(const SppMode& mode, const DeviceGeometry& geom, bool loss,
                                       std::size_t n_samples = kDefaultSamples) {
  const auto schedule = build_schedule(geom, mode, n_samples);
  const auto alpha = uniform_loss(3, loss ? mode.q.imag() : 0.0);
  const auto traj = propagate(schedule, AmplitudeState::excite(3), alpha);
  const auto& a = traj.final_state().amplitudes;
  return {std::norm(a[0]), std::norm(a[1]), std::norm(a[2]), relative_residual(mode)};
}

/// Output-sheet intensity of the two-sheet parallel comparator.
inline double parallel_comparator(double wavevector, double length, double gap, const GrapheneSheet& sheet,
                                  const Medium& medium = kSilica, bool loss = false,
                                  std::size_t n_samples = kDefaultSamples) {
  if (!(wavevector > 0)) throw DomainError("wavevector > 0 required");
  const SppMode mode = invert_wavevector(wavevector, sheet, medium).mode;
  return run_parallel_device(mode, length, gap, loss, n_samples).output;
}

struct SweepAxis {
  Parameter parameter = Parameter::Length;
  std::vector<double> values;  // SI
};

struct SweepSpec {
  SweepAxis axis1;  // rows
  SweepAxis axis2;  // columns
  DevicePoint fixed;
  DeviceKind device = DeviceKind::ThreeLayerCurved;
  Observable observable = Observable::OutputIntensity;
  bool loss = false;
  std::size_t n_samples = kDefaultSamples;

  void validate() const {
    for (const auto* ax : {&axis1, &axis2}) {
      if (ax->values.empty()) throw DomainError(std::string("sweep axis ") + to_string(ax->parameter) + " is empty");
      const bool up = ax->values.size() < 2 || ax->values[1] > ax->values[0];
      for (std::size_t i = 1; i < ax->values.size(); ++i)
        if (up ? !(ax->values[i] > ax->values[i - 1]) : !(ax->values[i] < ax->values[i - 1]))
          throw DomainError(std::string("sweep axis ") + to_string(ax->parameter) + " is not strictly monotone");
    }
    if (device == DeviceKind::TwoLayerParallel && observable == Observable::MiddleIntensity)
      throw DomainError("the parallel comparator has no middle sheet");
    if (n_samples < 64) throw DomainError("n_samples >= 64 required");
  }

  std::string canonical() const {
    std::string s = "device=" + std::to_string(static_cast<int>(device)) +
                    ";observable=" + std::to_string(static_cast<int>(observable)) + ";loss=" + (loss ? "1" : "0") +
                    ";n=" + std::to_string(n_samples);
    for (const auto* ax : {&axis1, &axis2}) {
      s += ";axis=" + std::string(to_string(ax->parameter));
      for (double v : ax->values) s += "," + format_double(v);
    }
    const auto& f = fixed;
    s += ";lambda0=" + format_double(f.excitation.vacuum_wavelength);
    s += ";wavevector=" + (f.wavevector ? format_double(*f.wavevector) : std::string("none"));
    s += ";EF=" + format_double(f.sheet.fermi_level) + ";mu=" + format_double(f.sheet.mobility) +
         ";vF=" + format_double(f.sheet.fermi_velocity) + ";thick=" + format_double(f.sheet.thickness) +
         ";gamma=" + (f.sheet.relaxation_rate ? format_double(*f.sheet.relaxation_rate) : std::string("default"));
    s += ";eps=" + format_double(f.medium.permittivity) + ";R=" + format_double(f.geometry.radius) +
         ";delta=" + format_double(f.geometry.offset) + ";dmin=" + format_double(f.geometry.min_gap) +
         ";L=" + format_double(f.geometry.length) + ";conv=" + std::to_string(static_cast<int>(f.convention));
    return s;
  }
};

struct SweepMetadata {
  std::string version = kVersion;
  std::string spec_hash;
  double max_residual = 0.0;
  std::size_t invalid_cells = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<std::vector<double>> grid;  // [axis1][axis2]; NaN where invalid
  std::vector<std::vector<bool>> valid;
  SweepMetadata metadata;

  std::size_t rows() const { return grid.size(); }
  std::size_t cols() const { return grid.empty() ? 0 : grid.front().size(); }
};

namespace detail {

inline double observe(const DeviceOutcome& o, Observable what) {
  switch (what) {
    case Observable::OutputIntensity: return o.output;
    case Observable::MiddleIntensity: return o.middle;
    case Observable::TransferEfficiency: {
      const double total = o.input + o.middle + o.output;
      return total > 0 ? o.output / total : 0.0;
    }
  }
  return 0.0;
}

}  // namespace detail

/// One cell; nullopt when the geometry is invalid for the requested device.
inline std::optional<DeviceOutcome> evaluate_point(const DevicePoint& p, DeviceKind device, bool loss,
                                                   std::size_t n_samples) {
  if (device == DeviceKind::ThreeLayerCurved && !p.geometry.is_valid()) return std::nullopt;
  if (device == DeviceKind::TwoLayerParallel && !(p.geometry.length > 0 && p.geometry.min_gap > 0)) return std::nullopt;
  const SppMode mode = resolve_mode(p);
  if (device == DeviceKind::TwoLayerParallel) return run_parallel_device(mode, p.geometry.length, p.geometry.min_gap, loss, n_samples);
  return run_curved_device(mode, p.geometry, loss, n_samples);
}

/// Evaluates every cell, concurrently when `workers` > 1. Results are written by
/// position, so the output does not depend on the worker count.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 0) {
  spec.validate();
  const std::size_t rows = spec.axis1.values.size(), cols = spec.axis2.values.size();
  SweepResult res;
  res.spec = spec;
  res.grid.assign(rows, std::vector<double>(cols, std::numeric_limits<double>::quiet_NaN()));
  res.valid.assign(rows, std::vector<bool>(cols, false));
  std::vector<double> residual(rows * cols, 0.0);
  std::vector<char> ok(rows * cols, 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t idx = next++; idx < rows * cols; idx = next++) {
      try {
        DevicePoint p = spec.fixed;
        set_parameter(p, spec.axis1.parameter, spec.axis1.values[idx / cols]);
        set_parameter(p, spec.axis2.parameter, spec.axis2.values[idx % cols]);
        if (auto o = evaluate_point(p, spec.device, spec.loss, spec.n_samples)) {
          res.grid[idx / cols][idx % cols] = detail::observe(*o, spec.observable);
          residual[idx] = o->residual;
          ok[idx] = 1;
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, rows * cols));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t idx = 0; idx < rows * cols; ++idx) {
    res.valid[idx / cols][idx % cols] = ok[idx] != 0;
    if (ok[idx]) res.metadata.max_residual = std::max(res.metadata.max_residual, residual[idx]);
    else ++res.metadata.invalid_cells;
  }
  if (res.metadata.invalid_cells == rows * cols) throw DomainError("every cell of the sweep has invalid geometry");
  res.metadata.spec_hash = hex64(fnv1a(spec.canonical()));
  return res;
}

struct Band {
  std::size_t row_begin = 0, row_end = 0;  // half-open
  std::size_t col_begin = 0, col_end = 0;

  static Band whole(const SweepResult& r) { return {0, r.rows(), 0, r.cols()}; }
};

struct RobustnessStats {
  double min = 0, mean = 0, stddev = 0;
  std::size_t cells = 0;
};

/// Population statistics over the valid cells of a band.
inline RobustnessStats robustness_metric(const SweepResult& r, const Band& band) {
  if (band.row_end > r.rows() || band.col_end > r.cols() || band.row_begin >= band.row_end ||
      band.col_begin >= band.col_end)
    throw DomainError("band outside the sweep grid");
  RobustnessStats s;
  s.min = std::numeric_limits<double>::infinity();
  double sum = 0;
  for (std::size_t i = band.row_begin; i < band.row_end; ++i)
    for (std::size_t j = band.col_begin; j < band.col_end; ++j)
      if (r.valid[i][j]) {
        ++s.cells;
        sum += r.grid[i][j];
        s.min = std::min(s.min, r.grid[i][j]);
      }
  if (s.cells == 0) throw DomainError("band contains no valid cells");
  s.mean = sum / static_cast<double>(s.cells);
  double var = 0;
  for (std::size_t i = band.row_begin; i < band.row_end; ++i)
    for (std::size_t j = band.col_begin; j < band.col_end; ++j)
      if (r.valid[i][j]) var += (r.grid[i][j] - s.mean) * (r.grid[i][j] - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(s.cells));
  return s;
}

/// n evenly spaced values on [lo, hi].
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace spp
