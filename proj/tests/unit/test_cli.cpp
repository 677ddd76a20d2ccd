#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "commands.hpp"
#include "support.hpp"

using namespace spp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spp_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

cli::Context small_context(const fs::path& out) {
  cli::Context ctx;
  ctx.config.n_samples = 256;
  ctx.out = out;
  ctx.workers = 2;
  return ctx;
}

}  // namespace

TEST(Commands, DeviceRunTableShape) {
  const auto dir = scratch("device");
  const auto ctx = small_context(dir);
  cli::run_device(ctx, true);
  const auto t = io::parse_csv(slurp(dir / "device_run_lossless.csv"));
  ASSERT_EQ(t.header.size(), 4u);
  EXPECT_EQ(t.header[0], "x_nm");
  EXPECT_EQ(t.config_hash, config_hash(ctx.config));
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_GT(t.rows[i][0], t.rows[i - 1][0]);
  EXPECT_TRUE(fs::exists(dir / "device_run_lossy.csv"));
  EXPECT_TRUE(fs::exists(dir / "field_map.csv"));
  EXPECT_NE(slurp(dir / "field_map.svg").find(config_hash(ctx.config)), std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(dir / "device_run.json"));
  EXPECT_EQ(meta["config_hash"], config_hash(ctx.config));
}

TEST(Commands, EveryArtifactCarriesTheHash) {
  const auto dir = scratch("hash");
  const auto ctx = small_context(dir);
  std::vector<fs::path> all;
  for (auto& v : {cli::run_dispersion(ctx, {8, 10}, {0.1, 0.15}), cli::run_coupling_sweep(ctx, {10, 20, 30}, {0.15}),
                  cli::run_schedule(ctx), cli::run_robustness(ctx, "4b", "3x3")})
    all.insert(all.end(), v.begin(), v.end());
  const std::string h = config_hash(ctx.config);
  for (const auto& p : all) EXPECT_NE(slurp(p).find(h), std::string::npos) << p;
}

TEST(Commands, RobustnessSweepIsByteDeterministic) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  auto ca = small_context(a), cb = small_context(b);
  cb.workers = 5;
  cli::run_robustness(ca, "4a", "4x3");
  cli::run_robustness(cb, "4a", "4x3");
  EXPECT_EQ(slurp(a / "fig4a.csv"), slurp(b / "fig4a.csv"));
}

TEST(Commands, UnknownFigureAndBadGrid) {
  const auto ctx = small_context(scratch("bad"));
  EXPECT_THROW(cli::run_robustness(ctx, "9z", "2x2"), DomainError);
  EXPECT_THROW(cli::parse_grid("10"), DomainError);
  EXPECT_THROW(cli::parse_grid("0x4"), DomainError);
  EXPECT_EQ(cli::parse_grid("50x40"), (std::pair<std::size_t, std::size_t>{50, 40}));
}

TEST(Binary, ExitCodes) {
  const auto dir = scratch("bin");
  std::ofstream(dir / "bad.cfg") << "R_nm = -5\n";
  const std::string cli = SPP_CLI_PATH;
  const std::string quiet = " > " + (dir / "log.txt").string() + " 2>&1";
  EXPECT_EQ(std::system((cli + " --out " + (dir / "o").string() + " schedule" + quiet).c_str()), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "schedule.csv"));
  EXPECT_NE(std::system((cli + " --config " + (dir / "bad.cfg").string() + " schedule" + quiet).c_str()), 0);
  EXPECT_NE(slurp(dir / "log.txt").find("radius > 0"), std::string::npos);
  EXPECT_NE(std::system((cli + " no-such-command" + quiet).c_str()), 0);
}
