#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace spp;
  CLI::App app{"Graphene surface-plasmon coupler simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, loss_flag;
  unsigned workers = 0;
  bool seed_free = false;
  app.add_option("--config", config_path, "flat key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides out_dir)");
  app.add_option("--loss", loss_flag, "include propagation loss")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--workers", workers, "sweep worker threads (0 = hardware concurrency)");
  app.add_flag("--seed-free", seed_free, "accepted for scripting; every computation is deterministic");

  auto* dispersion = app.add_subcommand("dispersion", "solve the single-sheet dispersion relation");
  std::vector<double> lambdas, fermis;
  dispersion->add_option("--lambda-um", lambdas, "vacuum wavelengths (um); default from config");
  dispersion->add_option("--ef-ev", fermis, "Fermi levels (eV); default from config");

  auto* coupling = app.add_subcommand("coupling-sweep", "coupling strength vs sheet separation");
  std::vector<double> d_nm;
  std::vector<double> coupling_ef{0.05, 0.1, 0.15, 0.2};
  coupling->add_option("--d-nm", d_nm, "separations (nm); default 5..100 step 5");
  coupling->add_option("--ef-ev", coupling_ef, "Fermi levels (eV)");

  auto* schedule = app.add_subcommand("schedule", "coupling schedule of the curved device");

  auto* device = app.add_subcommand("device-run", "propagate the three-sheet device");
  bool field = false;
  device->add_flag("--field-map", field, "also emit |Psi(x,z)|^2");

  auto* sweep = app.add_subcommand("robustness-sweep", "parameter sweeps and comparator maps");
  std::string figure = "4b", grid = "50x50";
  sweep->add_option("--figure", figure, "which figure to reproduce")->check(CLI::IsMember({"1b", "3", "4a", "4b", "4c"}));
  sweep->add_option("--grid", grid, "grid size NxM");

  auto* verify = app.add_subcommand("verify", "run the oracle suite and write the validation report");
  std::uint64_t seed = 20240601;
  verify->add_option("--seed", seed, "seed for randomized oracle sampling");

  CLI11_PARSE(app, argc, argv);

  try {
    cli::Context ctx;
    if (!config_path.empty()) ctx.config = load_config(config_path);
    if (!out_dir.empty()) ctx.config.out_dir = out_dir;
    ctx.out = ctx.config.out_dir;
    if (!loss_flag.empty()) ctx.loss = loss_flag == "on";
    ctx.workers = workers;

    std::vector<std::filesystem::path> written;
    if (*dispersion) {
      if (lambdas.empty()) lambdas.push_back(ctx.config.lambda0_um);
      if (fermis.empty()) fermis.push_back(ctx.config.E_F_eV);
      written = cli::run_dispersion(ctx, lambdas, fermis);
    } else if (*coupling) {
      if (d_nm.empty())
        for (int i = 1; i <= 20; ++i) d_nm.push_back(5.0 * i);
      written = cli::run_coupling_sweep(ctx, d_nm, coupling_ef);
    } else if (*schedule) {
      written = cli::run_schedule(ctx);
    } else if (*device) {
      written = cli::run_device(ctx, field);
    } else if (*sweep) {
      written = cli::run_robustness(ctx, figure, grid);
    } else if (*verify) {
      written = cli::run_verify(ctx, seed);
    }
    for (const auto& p : written) std::cout << p.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "spp: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
