#include <gtest/gtest.h>

#include "spp/oracles.hpp"
#include "support.hpp"

using namespace spp;
using testing_support::default_mode;
using testing_support::rel;

TEST(OverlapQuadrature, ClosedFormCases) {
  for (double k : {10e6, 60e6})
    for (double d : {10e-9, 50e-9}) {
      const auto r = oracles::overlap_quadrature(k, k, d);
      EXPECT_LT(rel(r.value, cplx{std::exp(-k * d) * (d + 1 / k), 0}), 1e-10);
      EXPECT_LT(r.tail_bound, 1e-16 * std::abs(r.value));
    }
  EXPECT_LT(rel(oracles::overlap_quadrature(40e6, 40e6, 0.0).value, cplx{1 / 40e6, 0}), 1e-10);
}

TEST(OverlapQuadrature, BudgetAndInputErrors) {
  EXPECT_THROW(oracles::overlap_quadrature(40e6, 40e6, -1e-9), DomainError);
  EXPECT_THROW(oracles::overlap_quadrature({-1, 0}, 40e6, 1e-9), DomainError);
  oracles::QuadratureSpec tight{1e-300, 1e-15, 16};
  EXPECT_THROW(oracles::overlap_quadrature({40e6, 9e6}, {70e6, -8e6}, 60e-9, tight), OracleFailure);
}

TEST(DispersionResidual, SolverPerturbedAndClosedForm) {
  const Excitation ex = Excitation::from_wavelength(10e-6);
  const cplx sigma = drude_conductivity(ex.angular_frequency(), testing_support::default_sheet(), 2e12);
  const SppMode m = solve_dispersion_symmetric(ex, kSilica, sigma);
  EXPECT_LT(oracles::dispersion_residual(m, sigma), 1e-12);
  SppMode bent = m;
  bent.q *= 1.01;
  EXPECT_GT(oracles::dispersion_residual(bent, sigma), 1e-3);
  const SppMode asym = solve_dispersion(ex, Medium{2.0}, Medium{6.0}, sigma);
  EXPECT_LT(oracles::dispersion_residual(asym, sigma), 1e-10);
}

TEST(Expm, TwoLevelAndIdentity) {
  oracles::CVector a0(2);
  a0 << 1, 0;
  for (double cl : {0.3, 1.0, 7.0, 20 * std::numbers::pi}) {
    const auto a = oracles::expm_reference({1e7}, {0, 0}, a0, cl / 1e7);
    const auto [i1, i2] = two_level_analytic(1e7, cl / 1e7);
    EXPECT_NEAR(std::norm(a(0)), i1, 1e-10);
    EXPECT_NEAR(std::norm(a(1)), i2, 1e-10);
  }
  oracles::CVector b0(3);
  b0 << cplx(0.2, 0.1), cplx(-0.5, 0), cplx(0, 0.7);
  const auto b = oracles::expm_reference({0, 0}, {0, 0, 0}, b0, 3e-6);
  EXPECT_LT((b - b0).norm(), 1e-15);
}

TEST(Expm, ConstantChainMatchesPropagate) {
  const std::vector<double> c{12e6, 7e6, 3e6};
  const std::vector<double> loss{1e5, 1e5, 1e5, 1e5};
  const auto traj = propagate(ChainSchedule::constant(c, 0, 0.8e-6, 2048), AmplitudeState::excite(4), loss);
  oracles::CVector a0 = oracles::CVector::Zero(4);
  a0(0) = 1;
  const auto ref = oracles::expm_reference(c, loss, a0, 0.8e-6);
  for (int j = 0; j < 4; ++j) EXPECT_LT(std::abs(ref(j) - traj.final_state().amplitudes[static_cast<std::size_t>(j)]), 1e-10);
}

TEST(Staircase, DefaultScheduleMatchesPropagate) {
  const auto s = build_schedule(DeviceGeometry{}, default_mode(), 1025);
  const auto traj = propagate(s, AmplitudeState::excite(3), uniform_loss(3, 0.0));
  oracles::CVector a0 = oracles::CVector::Zero(3);
  a0(0) = 1;
  const auto ref = oracles::staircase_reference(s.x_grid, {s.omega1, s.omega2}, {0, 0, 0}, a0);
  for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(ref(j) - traj.final_state().amplitudes[static_cast<std::size_t>(j)]), 1e-5);
}
