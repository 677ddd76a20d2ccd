#include <gtest/gtest.h>

#include <numeric>

#include "support.hpp"

using namespace spp;
using testing_support::default_mode;

namespace {

double total(const AmplitudeState& s) { return s.norm2(); }

// Two Gaussian pulses with counterintuitive ordering, strong enough to transfer.
ChainSchedule gaussian_pulses(std::size_t n, double peak = 100e6, double length = 1e-6) {
  ChainSchedule s;
  s.x_grid = symmetric_grid(length, n);
  s.links.assign(2, std::vector<double>(n));
  const double w = 0.15 * length, c = 0.12 * length;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.x_grid[i];
    s.links[0][i] = peak * std::exp(-std::pow((x - c) / w, 2));
    s.links[1][i] = peak * std::exp(-std::pow((x + c) / w, 2));
  }
  return s;
}

}  // namespace

TEST(TwoLevel, AnalyticExamples) {
  auto [a, b] = two_level_analytic(1.0, std::numbers::pi / 2);
  EXPECT_NEAR(a, 0.0, 1e-15);
  EXPECT_NEAR(b, 1.0, 1e-15);
  std::tie(a, b) = two_level_analytic(24e6, 0.0);
  EXPECT_EQ(a, 1.0);
  EXPECT_EQ(b, 0.0);
  std::tie(a, b) = two_level_analytic(24e6, std::numbers::pi / 4 / 24e6);
  EXPECT_NEAR(a, 0.5, 1e-15);
  EXPECT_NEAR(b, 0.5, 1e-15);
}

TEST(Propagate, TwoLevelMatchesRabiUpToTwentyPi) {
  const double c = 10e6;
  const double span = 20 * std::numbers::pi / c;
  const std::vector<double> links{c};
  const auto sched = ChainSchedule::constant(links, -span / 2, span, kDefaultSamples);
  const auto traj = propagate(sched, AmplitudeState::excite(2), uniform_loss(2, 0.0));
  double worst = 0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto [i1, i2] = two_level_analytic(c, traj.x_grid[i] + span / 2);
    worst = std::max({worst, std::abs(traj.intensity(0, i) - i1), std::abs(traj.intensity(1, i) - i2)});
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Propagate, ZeroCouplingIsFreeEvolution) {
  for (std::size_t n : {2u, 3u, 6u}) {
    const std::vector<double> links(n - 1, 0.0);
    const auto sched = ChainSchedule::constant(links, 0, 1e-6, 101);
    AmplitudeState a0;
    for (std::size_t j = 0; j < n; ++j) a0.amplitudes.push_back(cplx(0.1 * j, -0.2 * j + 0.3));
    const auto traj = propagate(sched, a0, uniform_loss(n, 0.0));
    for (const auto& st : traj.states) EXPECT_EQ(st.amplitudes, a0.amplitudes);
  }
}

TEST(Propagate, DefaultDeviceConservesNorm) {
  const auto sched = build_schedule(DeviceGeometry{}, default_mode());
  const auto traj = propagate(sched, AmplitudeState::excite(3), uniform_loss(3, 0.0));
  for (const auto& st : traj.states) EXPECT_NEAR(total(st), 1.0, 1e-9);
}

TEST(Propagate, DefaultDeviceGoldenIndependentIntegrator) {
  const auto sched = build_schedule(DeviceGeometry{}, default_mode());
  const auto traj = propagate(sched, AmplitudeState::excite(3), uniform_loss(3, 0.0));
  EXPECT_NEAR(traj.intensity(0, traj.states.size() - 1), golden::kDefaultFinalInput, 1e-6);
  EXPECT_NEAR(traj.intensity(1, traj.states.size() - 1), golden::kDefaultFinalMiddle, 1e-6);
}

TEST(Propagate, FourthOrderNormConvergence) {
  const auto sched = gaussian_pulses(65);
  const double h = sched.x_grid[1] - sched.x_grid[0];
  const auto coarse = propagate(sched, AmplitudeState::excite(3), uniform_loss(3, 0.0), h);
  const auto fine = propagate(sched, AmplitudeState::excite(3), uniform_loss(3, 0.0), h / 2);
  const double e1 = std::abs(coarse.final_state().norm2() - 1.0);
  const double e2 = std::abs(fine.final_state().norm2() - 1.0);
  EXPECT_GT(e1, 1e-10);
  EXPECT_GE(e1 / e2, 8.0);
}

TEST(Propagate, StrongPulsesTransferAdiabatically) {
  const auto traj = propagate(gaussian_pulses(4096), AmplitudeState::excite(3), uniform_loss(3, 0.0));
  const auto last = traj.states.size() - 1;
  EXPECT_GT(traj.intensity(2, last), 0.95);
  EXPECT_LT(traj.intensity(1, last), 0.05);
}

TEST(Propagate, MirrorProperty) {
  for (const auto& sched : {ChainSchedule::from(build_schedule(DeviceGeometry{}, default_mode())), gaussian_pulses(2049)}) {
    ChainSchedule mirrored = sched;
    for (auto& l : mirrored.links) std::reverse(l.begin(), l.end());
    const auto a = propagate(sched, AmplitudeState::excite(3, 0), uniform_loss(3, 0.0));
    const auto b = propagate(mirrored, AmplitudeState::excite(3, 2), uniform_loss(3, 0.0));
    const auto last = a.states.size() - 1;
    EXPECT_NEAR(b.intensity(0, last), a.intensity(2, last), 1e-8);
  }
}

TEST(Propagate, MonotoneDissipation) {
  const SppMode m = default_mode();
  for (double alpha : {m.q.imag(), 1e5, 1e7}) {
    for (const auto& sched : {ChainSchedule::from(build_schedule(DeviceGeometry{}, m)), gaussian_pulses(1024)}) {
      const auto traj = propagate(sched, AmplitudeState::excite(3), uniform_loss(3, alpha));
      for (std::size_t i = 1; i < traj.states.size(); ++i)
        EXPECT_LE(total(traj.states[i]), total(traj.states[i - 1]));
    }
  }
}

TEST(Propagate, UniformLossFactorizes) {
  const SppMode m = default_mode();
  const double alpha = m.q.imag();
  for (const auto& sched : {ChainSchedule::from(build_schedule(DeviceGeometry{}, m)), gaussian_pulses(2048)}) {
    const auto lossless = propagate(sched, AmplitudeState::excite(3), uniform_loss(3, 0.0));
    const auto lossy = propagate(sched, AmplitudeState::excite(3), uniform_loss(3, alpha));
    double worst = 0;
    for (std::size_t i = 0; i < lossy.states.size(); ++i) {
      const double damp = std::exp(-alpha * (sched.x_grid[i] - sched.x_grid.front()));
      for (std::size_t j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(lossy.states[i].amplitudes[j] - damp * lossless.states[i].amplitudes[j]));
    }
    EXPECT_LT(worst, 1e-8);
  }
}

TEST(Propagate, InputErrors) {
  const auto sched = gaussian_pulses(64);
  const auto a0 = AmplitudeState::excite(3);
  const auto l3 = uniform_loss(3, 0.0);
  EXPECT_THROW(propagate(sched, a0, l3, 0.0), DomainError);
  EXPECT_THROW(propagate(sched, a0, l3, -1e-9), DomainError);
  EXPECT_THROW(propagate(sched, a0, l3, 1e-6), DomainError);
  EXPECT_THROW(propagate(sched, AmplitudeState::excite(2), uniform_loss(2, 0.0)), DomainError);
  EXPECT_THROW(propagate(sched, a0, uniform_loss(3, -1.0)), DomainError);
  EXPECT_THROW(AmplitudeState::excite(1), DomainError);
  const std::vector<double> huge{1e200};
  const auto blow = ChainSchedule::constant(huge, 0, 1.0, 4);
  EXPECT_THROW(propagate(blow, AmplitudeState::excite(2), uniform_loss(2, 0.0)), NumericalBlowupError);
}

TEST(Hamiltonian, LosslessIsHermitianAndTridiagonal) {
  const ChainHamiltonian h{{1.5, -2.0, 3.25}, {0, 0, 0, 0}};
  EXPECT_NO_THROW(h.validate());
  const auto m = h.dense();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_EQ(m[i][j], std::conj(m[j][i]));
      if (i > j + 1 || j > i + 1) {
        EXPECT_EQ(m[i][j], cplx(0, 0));
      }
    }
  EXPECT_THROW((ChainHamiltonian{{1.0}, {0, 0, 0}}.validate()), DomainError);
  EXPECT_THROW((ChainHamiltonian{{1.0}, {0, -1}}.validate()), DomainError);
}

TEST(DarkState, EndpointsAndNullVector) {
  auto d = dark_state(0, 1);
  EXPECT_EQ(d[0], cplx(1, 0));
  EXPECT_EQ(d[2], cplx(0, 0));
  d = dark_state(1, 0);
  EXPECT_EQ(d[0], cplx(0, 0));
  EXPECT_EQ(d[2], cplx(-1, 0));
  EXPECT_THROW(dark_state(0, 0), DomainError);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0, 5e7);
  for (int i = 0; i < 1000; ++i) {
    const double o1 = u(rng), o2 = u(rng);
    const auto v = dark_state(o1, o2);
    const cplx r0 = o1 * v[1], r1 = o1 * v[0] + o2 * v[2], r2 = o2 * v[1];
    const double res = std::sqrt(std::norm(r0) + std::norm(r1) + std::norm(r2));
    EXPECT_LT(res, 1e-12 * std::hypot(o1, o2) * std::sqrt(2.0));
  }
}

TEST(FieldMap, ZeroAmplitudesGiveZeroMap) {
  const SppMode m = default_mode();
  const DeviceGeometry g;
  Trajectory t{symmetric_grid(g.length, 8), {}};
  for (double x : t.x_grid) t.states.push_back(AmplitudeState{{0, 0, 0}, x});
  const auto z = symmetric_grid(800e-9, 401);
  const auto map = field_map(t, g, m, z);
  for (const auto& col : map.intensity)
    for (double v : col) EXPECT_EQ(v, 0.0);
}

TEST(FieldMap, InputLocalizedAtEntrance) {
  const SppMode m = default_mode();
  const DeviceGeometry g;
  const auto traj = propagate(build_schedule(g, m, 256), AmplitudeState::excite(3), uniform_loss(3, 0.0));
  const auto z = symmetric_grid(600e-9, 1201);
  const auto map = field_map(traj, g, m, z);
  const auto d1 = sheet_separations(g, traj.x_grid.front()).first;
  const auto& col = map.intensity.front();
  const auto peak = std::max_element(col.begin(), col.end()) - col.begin();
  EXPECT_NEAR(z[static_cast<std::size_t>(peak)], d1, z[1] - z[0]);
}

TEST(FieldMap, PureOutputStateWeightWithinOneConfinementLength) {
  // |u|^2 decays at 2 Re(k), so one confinement length holds 1 - e^-2 of the column.
  const SppMode m = default_mode();
  const DeviceGeometry g;
  Trajectory t{{g.length / 2}, {AmplitudeState{{0, 0, 1}, g.length / 2}}};
  const auto d2 = sheet_separations(g, g.length / 2).second;
  const auto z = symmetric_grid(2 * (d2 + 400e-9), 400001);
  const auto map = field_map(t, g, m, z);
  const double lc = confinement_length(m, 1);
  double all = 0, near = 0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    all += map.intensity[0][k];
    if (std::abs(z[k] + d2) <= lc) near += map.intensity[0][k];
  }
  EXPECT_NEAR(near / all, 1 - std::exp(-2.0), 1e-3);
}

TEST(FieldMap, RejectsShortZGrid) {
  const SppMode m = default_mode();
  const DeviceGeometry g;
  Trajectory t{{0.0}, {AmplitudeState{{1, 0, 0}, 0.0}}};
  const auto z = symmetric_grid(20e-9, 11);
  EXPECT_THROW(field_map(t, g, m, z), DomainError);
}
