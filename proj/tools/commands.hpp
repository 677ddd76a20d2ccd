#pragma once

// Subcommand implementations for the `spp` tool. Each writes its artifacts
// into `out` and returns the paths it wrote.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spp/spp.hpp"
#include "spp/validation.hpp"

namespace spp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
  RunConfig config;
  fs::path out;
  std::optional<bool> loss;  // --loss on|off; unset means the per-command default
  unsigned workers = 0;
};

inline std::string hash_of(const Context& ctx) { return config_hash(ctx.config); }

inline json ledger_notes(const RunConfig& cfg) {
  json notes = json::array();
  for (const auto& e : validation::reference_ledger(cfg))
    notes.push_back({{"quantity", e.quantity}, {"reference", e.reference},
                     {"computed", std::isnan(e.computed) ? json() : json(e.computed)}, {"unit", e.unit},
                     {"matches_within_15pct", e.matches}});
  return notes;
}

inline json base_metadata(const Context& ctx, const std::string& command) {
  return {{"tool", "spp"}, {"version", kVersion}, {"command", command}, {"config_hash", hash_of(ctx)},
          {"config", canonical_config(ctx.config)}};
}

inline std::vector<fs::path> run_dispersion(const Context& ctx, const std::vector<double>& lambdas_um,
                                            const std::vector<double>& fermi_ev) {
  io::Table t{{"lambda0_um", "E_F_eV", "gamma_per_s", "Re_q_per_um", "Im_q_per_um", "Re_k_per_um", "L_x_um",
               "confinement_nm"},
              {},
              hash_of(ctx)};
  double worst = 0;
  for (double lam : lambdas_um) {
    for (double ef : fermi_ev) {
      RunConfig c = ctx.config;
      c.lambda0_um = lam;
      c.E_F_eV = ef;
      const GrapheneSheet sheet = c.sheet();
      const SppMode mode = solve_sheet_mode(c.excitation(), sheet, c.medium());
      worst = std::max(worst, relative_residual(mode));
      t.rows.push_back({lam, ef, relaxation_rate(sheet), units::per_m_to_per_um(mode.q.real()),
                        units::per_m_to_per_um(mode.q.imag()), units::per_m_to_per_um(mode.k1.real()),
                        units::to_um(propagation_length(mode)), units::to_nm(confinement_length(mode, 1))});
    }
  }
  std::vector<fs::path> written{ctx.out / "dispersion.csv"};
  io::emit_csv(t, written.back());
  json meta = base_metadata(ctx, "dispersion");
  meta["max_residual"] = worst;
  meta["discrepancy_notes"] = ledger_notes(ctx.config);
  written.push_back(ctx.out / "dispersion.json");
  io::emit_json(meta, written.back());
  return written;
}

inline std::vector<fs::path> run_coupling_sweep(const Context& ctx, const std::vector<double>& d_nm,
                                                const std::vector<double>& fermi_ev) {
  io::Table t{{"d_nm", "E_F_eV", "abs_C_per_um", "Re_C_per_um", "Im_C_per_um"}, {}, hash_of(ctx)};
  std::vector<io::Series> series;
  std::vector<double> d_si;
  for (double d : d_nm) d_si.push_back(units::from_nm(d));
  for (double ef : fermi_ev) {
    RunConfig c = ctx.config;
    c.E_F_eV = ef;
    const SppMode mode = solve_sheet_mode(c.excitation(), c.sheet(), c.medium());
    const auto rows = coupling_vs_distance(mode, d_si);
    io::Series s{"E_F = " + validation::detail::fmt(ef) + " eV", {}, {}};
    for (const auto& r : rows) {
      const double abs_c = units::per_m_to_per_um(std::abs(r.c12));
      t.rows.push_back({units::to_nm(r.separation), ef, abs_c, units::per_m_to_per_um(r.c12.real()),
                        units::per_m_to_per_um(r.c12.imag())});
      s.x.push_back(units::to_nm(r.separation));
      s.y.push_back(abs_c);
    }
    series.push_back(std::move(s));
  }
  std::vector<fs::path> written{ctx.out / "coupling_sweep.csv"};
  io::emit_csv(t, written.back());
  if (ctx.config.wants("svg")) {
    written.push_back(ctx.out / "coupling_sweep.svg");
    io::emit_svg_lines(series, "d (nm)", "|C| (1/um)", "coupling between parallel sheets", written.back(), hash_of(ctx));
  }
  json meta = base_metadata(ctx, "coupling-sweep");
  meta["discrepancy_notes"] = ledger_notes(ctx.config);
  written.push_back(ctx.out / "coupling_sweep.json");
  io::emit_json(meta, written.back());
  return written;
}

inline std::vector<fs::path> run_schedule(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const SppMode mode = solve_sheet_mode(c.excitation(), c.sheet(), c.medium());
  const DeviceGeometry g = c.geometry();
  const auto s = build_schedule(g, mode, c.n_samples);
  const auto rep = adiabaticity_report(s);
  io::Table t{{"x_nm", "d1_nm", "d2_nm", "omega1_per_um", "omega2_per_um", "theta_rad", "margin"}, {}, hash_of(ctx)};
  io::Series o1{"Omega1", {}, {}}, o2{"Omega2", {}, {}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto [d1, d2] = sheet_separations(g, s.x_grid[i]);
    const double x_nm = units::to_nm(s.x_grid[i]);
    t.rows.push_back({x_nm, units::to_nm(d1), units::to_nm(d2), units::per_m_to_per_um(s.omega1[i]),
                      units::per_m_to_per_um(s.omega2[i]), rep.mixing_angle[i],
                      rep.reliable[i] ? rep.margin[i] : std::nan("")});
    o1.x.push_back(x_nm);
    o1.y.push_back(units::per_m_to_per_um(s.omega1[i]));
    o2.x.push_back(x_nm);
    o2.y.push_back(units::per_m_to_per_um(s.omega2[i]));
  }
  std::vector<fs::path> written{ctx.out / "schedule.csv"};
  io::emit_csv(t, written.back());
  if (c.wants("svg")) {
    written.push_back(ctx.out / "schedule.svg");
    io::emit_svg_lines({o1, o2}, "x (nm)", "coupling (1/um)", "coupling schedule", written.back(), hash_of(ctx));
  }
  json meta = base_metadata(ctx, "schedule");
  meta["max_margin"] = rep.max_margin();
  meta["peak_omega_per_um"] = units::per_m_to_per_um(*std::max_element(s.omega1.begin(), s.omega1.end()));
  written.push_back(ctx.out / "schedule.json");
  io::emit_json(meta, written.back());
  return written;
}

inline std::vector<fs::path> run_device(const Context& ctx, bool field) {
  const RunConfig& c = ctx.config;
  const SppMode mode = solve_sheet_mode(c.excitation(), c.sheet(), c.medium());
  const DeviceGeometry g = c.geometry();
  const auto s = build_schedule(g, mode, c.n_samples);
  const double step = (s.x_grid[1] - s.x_grid[0]) / static_cast<double>(c.step_divisor);
  std::vector<fs::path> written;
  json meta = base_metadata(ctx, "device-run");

  std::vector<std::pair<std::string, double>> runs{{"lossless", 0.0}};
  if (ctx.loss.value_or(true)) runs.emplace_back("lossy", mode.q.imag());
  std::vector<io::Series> series;
  std::optional<Trajectory> lossless;
  for (const auto& [name, alpha] : runs) {
    const auto traj = propagate(s, AmplitudeState::excite(3), uniform_loss(3, alpha), step);
    io::Table t{{"x_nm", "I_input", "I_middle", "I_output"}, {}, hash_of(ctx)};
    for (std::size_t i = 0; i < traj.x_grid.size(); ++i)
      t.rows.push_back({units::to_nm(traj.x_grid[i]), traj.intensity(0, i), traj.intensity(1, i), traj.intensity(2, i)});
    written.push_back(ctx.out / ("device_run_" + name + ".csv"));
    io::emit_csv(t, written.back());
    const char* labels[] = {"I_input", "I_middle", "I_output"};
    for (std::size_t j = 0; j < 3; ++j) {
      io::Series ser{std::string(labels[j]) + " (" + name + ")", {}, traj.intensities(j), alpha > 0};
      for (double x : traj.x_grid) ser.x.push_back(units::to_nm(x));
      series.push_back(std::move(ser));
    }
    const auto& fin = traj.final_state().amplitudes;
    meta["runs"][name] = {{"alpha_per_um", units::per_m_to_per_um(alpha)}, {"I_input", std::norm(fin[0])},
                          {"I_middle", std::norm(fin[1])}, {"I_output", std::norm(fin[2])}};
    if (alpha == 0.0) lossless = traj;
  }
  if (c.wants("svg")) {
    written.push_back(ctx.out / "device_run.svg");
    io::emit_svg_lines(series, "x (nm)", "intensity", "intensity evolution", written.back(), hash_of(ctx));
  }
  if (field && lossless) {
    // Subsample x to keep the map a manageable size.
    Trajectory sub;
    const std::size_t stride = std::max<std::size_t>(1, lossless->x_grid.size() / 256);
    for (std::size_t i = 0; i < lossless->x_grid.size(); i += stride) {
      sub.x_grid.push_back(lossless->x_grid[i]);
      sub.states.push_back(lossless->states[i]);
    }
    double zmax = 0;
    for (double x : sub.x_grid) {
      const auto [d1, d2] = sheet_separations(g, x);
      zmax = std::max({zmax, d1, d2});
    }
    zmax += 5.0 * confinement_length(mode, 1);
    const auto z = linspace(-zmax, zmax, 241);
    const auto map = field_map(sub, g, mode, z);
    io::Table t{{"x_nm"}, {}, hash_of(ctx)};
    for (double zz : z) t.header.push_back("z" + format_double(units::to_nm(zz)) + "_nm");
    for (std::size_t i = 0; i < map.x_grid.size(); ++i) {
      std::vector<double> row{units::to_nm(map.x_grid[i])};
      row.insert(row.end(), map.intensity[i].begin(), map.intensity[i].end());
      t.rows.push_back(std::move(row));
    }
    written.push_back(ctx.out / "field_map.csv");
    io::emit_csv(t, written.back());
    if (c.wants("svg")) {
      // rows = z, cols = x for the usual orientation
      std::vector<std::vector<double>> zx(z.size(), std::vector<double>(map.x_grid.size()));
      double vmax = 0;
      for (std::size_t i = 0; i < map.x_grid.size(); ++i)
        for (std::size_t k = 0; k < z.size(); ++k) {
          zx[k][i] = map.intensity[i][k];
          vmax = std::max(vmax, zx[k][i]);
        }
      io::HeatmapAxes ax{"z (nm)", {}, "x (nm)", {}, "|Psi(x,z)|^2 (lossless)", 0.0, vmax};
      for (double zz : z) ax.row_values.push_back(units::to_nm(zz));
      for (double x : map.x_grid) ax.col_values.push_back(units::to_nm(x));
      written.push_back(ctx.out / "field_map.svg");
      io::emit_svg_heatmap(zx, ax, written.back(), hash_of(ctx));
    }
  }
  written.push_back(ctx.out / "device_run.json");
  io::emit_json(meta, written.back());
  return written;
}

/// Grid in "NxM" form.
inline std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw DomainError("grid must look like NxM");
  const auto n = std::stoul(text.substr(0, x)), m = std::stoul(text.substr(x + 1));
  if (n == 0 || m == 0) throw DomainError("grid dimensions must be >= 1");
  return {n, m};
}

inline io::Table sweep_table(const SweepResult& r, const std::string& hash) {
  io::Table t{{to_string(r.spec.axis1.parameter), to_string(r.spec.axis2.parameter), to_string(r.spec.observable),
               "valid"},
              {},
              hash};
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      t.rows.push_back({to_user_units(r.spec.axis1.parameter, r.spec.axis1.values[i]),
                        to_user_units(r.spec.axis2.parameter, r.spec.axis2.values[j]), r.grid[i][j],
                        r.valid[i][j] ? 1.0 : 0.0});
  return t;
}

inline std::vector<fs::path> emit_sweep(const Context& ctx, const SweepResult& r, const std::string& stem,
                                        const std::string& title) {
  std::vector<fs::path> written{ctx.out / (stem + ".csv")};
  io::emit_csv(sweep_table(r, hash_of(ctx)), written.back());
  if (ctx.config.wants("svg")) {
    io::HeatmapAxes ax{to_string(r.spec.axis1.parameter), {}, to_string(r.spec.axis2.parameter), {}, title, 0.0, 1.0};
    for (double v : r.spec.axis1.values) ax.row_values.push_back(to_user_units(r.spec.axis1.parameter, v));
    for (double v : r.spec.axis2.values) ax.col_values.push_back(to_user_units(r.spec.axis2.parameter, v));
    written.push_back(ctx.out / (stem + ".svg"));
    io::emit_svg_heatmap(r.grid, ax, written.back(), hash_of(ctx));
  }
  return written;
}

inline json sweep_metadata(const SweepResult& r) {
  return {{"spec_hash", r.metadata.spec_hash}, {"solver_version", r.metadata.version},
          {"max_dispersion_residual", r.metadata.max_residual}, {"invalid_cells", r.metadata.invalid_cells},
          {"loss", r.spec.loss}, {"observable", to_string(r.spec.observable)},
          {"rows", to_string(r.spec.axis1.parameter)}, {"cols", to_string(r.spec.axis2.parameter)}};
}

/// Wavevector x length sweep for either device at the configured working point.
inline SweepSpec wavevector_length_spec(const RunConfig& c, DeviceKind device, std::size_t n, std::size_t m, bool loss) {
  SweepSpec spec;
  spec.fixed = c.device_point();
  spec.device = device;
  spec.loss = loss;
  spec.n_samples = c.n_samples;
  spec.axis1 = {Parameter::Wavevector, linspace(units::per_um_to_per_m(25.0), units::per_um_to_per_m(50.0), n)};
  spec.axis2 = {Parameter::Length, linspace(0.8 * units::from_um(c.L_um), 1.2 * units::from_um(c.L_um), m)};
  return spec;
}

inline std::vector<fs::path> run_robustness(const Context& ctx, const std::string& figure, const std::string& grid) {
  const RunConfig& c = ctx.config;
  const auto [n, m] = parse_grid(grid);
  json meta = base_metadata(ctx, "robustness-sweep");
  meta["figure"] = figure;
  meta["grid"] = grid;
  meta["colormap"] = "linear interpolation through viridis anchors #440154 #3b528b #21918c #5ec962 #fde725; "
                     "NaN sentinel cells hatched grey";
  meta["discrepancy_notes"] = ledger_notes(c);
  std::vector<fs::path> written;
  auto append = [&](std::vector<fs::path> more) { written.insert(written.end(), more.begin(), more.end()); };

  if (figure == "1b") {
    std::vector<double> d;
    for (std::size_t i = 0; i < std::max<std::size_t>(n, 2); ++i)
      d.push_back(5.0 + 95.0 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 2) - 1));
    append(run_coupling_sweep(ctx, d, {0.05, 0.1, 0.15, 0.2}));
  } else if (figure == "3") {
    append(run_schedule(ctx));
    append(run_device(ctx, true));
  } else if (figure == "4a" || figure == "4b") {
    const bool loss = ctx.loss.value_or(false);
    const DeviceKind kind = figure == "4a" ? DeviceKind::TwoLayerParallel : DeviceKind::ThreeLayerCurved;
    const auto r = run_sweep(wavevector_length_spec(c, kind, n, m, loss), ctx.workers);
    append(emit_sweep(ctx, r, "fig" + figure, figure == "4a" ? "parallel two-sheet coupler, I_output"
                                                             : "curved three-sheet coupler, I_output"));
    meta["sweeps"]["fig" + figure] = sweep_metadata(r);
    const auto st = robustness_metric(r, Band::whole(r));
    meta["sweeps"]["fig" + figure]["stats"] = {{"min", st.min}, {"mean", st.mean}, {"stddev", st.stddev}};
  } else if (figure == "4c") {
    const bool loss = ctx.loss.value_or(true);
    SweepSpec base;
    base.fixed = c.device_point();
    base.fixed.wavevector = units::per_um_to_per_m(35.0);
    base.loss = loss;
    base.n_samples = c.n_samples;
    base.axis2 = {Parameter::Length, linspace(0.8 * units::from_um(c.L_um), 1.2 * units::from_um(c.L_um), m)};

    SweepSpec by_radius = base;
    by_radius.axis1 = {Parameter::Radius, linspace(0.75 * units::from_nm(c.R_nm), 1.5 * units::from_nm(c.R_nm), n)};
    const auto rr = run_sweep(by_radius, ctx.workers);
    append(emit_sweep(ctx, rr, "fig4c_radius", "curved coupler at 35 1/um, I_output vs R and L"));
    meta["sweeps"]["fig4c_radius"] = sweep_metadata(rr);

    SweepSpec by_offset = base;
    by_offset.axis1 = {Parameter::Offset, linspace(0.5 * units::from_nm(c.delta_nm), 2.0 * units::from_nm(c.delta_nm), n)};
    const auto ro = run_sweep(by_offset, ctx.workers);
    append(emit_sweep(ctx, ro, "fig4c_offset", "curved coupler at 35 1/um, I_output vs delta and L"));
    meta["sweeps"]["fig4c_offset"] = sweep_metadata(ro);

    io::Table t{{"L_um", "I_output_parallel"}, {}, hash_of(ctx)};
    const SppMode mode = resolve_mode(base.fixed);
    for (double len : base.axis2.values)
      t.rows.push_back({units::to_um(len), run_parallel_device(mode, len, base.fixed.geometry.min_gap, loss, c.n_samples).output});
    written.push_back(ctx.out / "fig4c_parallel.csv");
    io::emit_csv(t, written.back());
    meta["wavevector_35_lambda0_um"] = units::to_um(mode.excitation.vacuum_wavelength);
  } else {
    throw DomainError("unknown figure '" + figure + "' (expected 1b, 3, 4a, 4b or 4c)");
  }
  written.push_back(ctx.out / ("robustness_" + figure + ".json"));
  io::emit_json(meta, written.back());
  return written;
}

inline std::vector<fs::path> run_verify(const Context& ctx, std::uint64_t seed) {
  const auto report = validation::run_verification(ctx.config, seed);
  std::vector<fs::path> written{ctx.out / "validation_report.json", ctx.out / "validation_report.txt"};
  io::emit_json(validation::to_json(report), written[0]);
  io::write_file(written[1], validation::to_text(report));
  return written;
}

}  // namespace spp::cli
