#include <gtest/gtest.h>

#include "support.hpp"

using namespace spp;
using testing_support::rel;

TEST(Constants, Sigma0AndImpedance) {
  EXPECT_LT(rel(K::sigma0, std::numbers::pi * K::e * K::e / (2 * K::h)), 1e-12);
  EXPECT_LT(rel(std::sqrt(K::mu0 / K::eps0), K::eta0), 1e-3);
}

TEST(RelaxationRate, NoTwoPiReproducesReferenceValue) {
  const auto sheet = GrapheneSheet::from_user_units(0.15);
  EXPECT_LT(rel(default_relaxation_rate(sheet), 1.11e12), 0.01);
}

TEST(RelaxationRate, LiteralConventionIsTwoPiLarger) {
  const auto sheet = GrapheneSheet::from_user_units(0.15);
  const double lit = default_relaxation_rate(sheet, RelaxationConvention::LiteralTwoPi);
  EXPECT_NEAR(lit / default_relaxation_rate(sheet), 2 * std::numbers::pi, 1e-12);
  EXPECT_LT(rel(lit, 6.98e12), 0.01);
}

TEST(RelaxationRate, HomogeneousOfDegreeMinusOneInFermiLevel) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ef(0.02, 0.5);
  for (int i = 0; i < 200; ++i) {
    const double e = ef(rng);
    const double g1 = default_relaxation_rate(GrapheneSheet::from_user_units(e));
    const double g2 = default_relaxation_rate(GrapheneSheet::from_user_units(2 * e));
    EXPECT_LT(rel(g2, g1 / 2), 1e-15);
  }
  EXPECT_LT(rel(default_relaxation_rate(GrapheneSheet::from_user_units(0.30)), 0.555e12), 0.01);
}

TEST(RelaxationRate, ExplicitValueWins) {
  EXPECT_EQ(relaxation_rate(testing_support::default_sheet()), 2e12);
  EXPECT_EQ(relaxation_rate(GrapheneSheet::from_user_units(0.15)),
            default_relaxation_rate(GrapheneSheet::from_user_units(0.15)));
}

TEST(GrapheneSheet, RejectsNonPhysicalFields) {
  EXPECT_THROW(GrapheneSheet::from_user_units(0.0), DomainError);
  EXPECT_THROW(GrapheneSheet::from_user_units(0.15, -1.0), DomainError);
  EXPECT_THROW(GrapheneSheet::from_user_units(0.15, 6e4, 1e6, 0.0), DomainError);
  EXPECT_THROW(GrapheneSheet::from_user_units(0.15, 6e4, 1e6, 0.33, -1.0), DomainError);
  EXPECT_THROW(Medium{0.5}.validate(), DomainError);
}

TEST(Drude, GoldenValueAtTenMicrons) {
  const double w = Excitation::from_wavelength(10e-6).angular_frequency();
  const cplx s = drude_conductivity(w, testing_support::default_sheet(), 2e12);
  EXPECT_LT(rel(s, cplx{golden::kSigmaReal, golden::kSigmaImag}), 1e-12);
  EXPECT_GT(s.imag(), 50 * s.real());
  EXPECT_NEAR(std::abs(s) / K::sigma0, 1.54, 0.01);
  EXPECT_LT(rel(std::abs(s), 9.4e-5), 0.01);
}

TEST(Drude, LosslessLimitIsPurelyImaginary) {
  const auto sheet = testing_support::default_sheet();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logw(12.0, 16.0);
  for (int i = 0; i < 200; ++i) {
    const double w = std::pow(10.0, logw(rng));
    const cplx s = drude_conductivity(w, sheet, 0.0);
    EXPECT_EQ(s.real(), 0.0);
    EXPECT_LT(rel(s.imag(), K::sigma0 * 4 * sheet.fermi_level / (std::numbers::pi * K::hbar * w)), 1e-13);
  }
}

TEST(Drude, PassiveForPositiveDamping) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> logw(10.0, 16.0), logg(9.0, 14.0), ef(0.02, 0.5);
  for (int i = 0; i < 500; ++i) {
    const auto sheet = GrapheneSheet::from_user_units(ef(rng));
    EXPECT_GT(drude_conductivity(std::pow(10.0, logw(rng)), sheet, std::pow(10.0, logg(rng))).real(), 0.0);
  }
  EXPECT_GT(drude_conductivity(0.0, testing_support::default_sheet(), 2e12).real(), 0.0);
}

TEST(Drude, LinearInFermiLevelAtFixedGamma) {
  const double w = 1.885e14;
  const cplx a = drude_conductivity(w, GrapheneSheet::from_user_units(0.1), 2e12);
  const cplx b = drude_conductivity(w, GrapheneSheet::from_user_units(0.2), 2e12);
  EXPECT_LT(rel(b, 2.0 * a), 1e-15);
}

TEST(Drude, SingularAndNegativeInputs) {
  const auto sheet = testing_support::default_sheet();
  EXPECT_THROW(drude_conductivity(0.0, sheet, 0.0), SingularityError);
  EXPECT_THROW(drude_conductivity(-1.0, sheet, 1.0), DomainError);
  EXPECT_THROW(drude_conductivity(1.0, sheet, -1.0), DomainError);
}

TEST(EffectivePermittivity, GoldenAndLimits) {
  const double w = Excitation::from_wavelength(10e-6).angular_frequency();
  const cplx s = drude_conductivity(w, testing_support::default_sheet(), 2e12);
  const cplx eg = effective_graphene_permittivity(w, s, 0.33e-9);
  EXPECT_LT(rel(eg, cplx{golden::kEpsGReal, golden::kEpsGImag}), 1e-12);
  EXPECT_LT(eg.real(), -100.0);
  EXPECT_EQ(effective_graphene_permittivity(w, 0.0, 0.33e-9), cplx(1.0, 0.0));
  const cplx eg2 = effective_graphene_permittivity(w, s, 0.66e-9);
  EXPECT_LT(rel(eg2 - 1.0, (eg - 1.0) / 2.0), 1e-15);
  EXPECT_THROW(effective_graphene_permittivity(w, s, 0.0), DomainError);
  EXPECT_THROW(effective_graphene_permittivity(0.0, s, 0.33e-9), DomainError);
}

TEST(Units, RoundTrips) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(1e-3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_LT(rel(units::joule_to_ev(units::ev_to_joule(v)), v), 1e-15);
    EXPECT_LT(rel(units::to_nm(units::from_nm(v)), v), 1e-15);
    EXPECT_LT(rel(units::to_um(units::from_um(v)), v), 1e-15);
    EXPECT_LT(rel(units::per_m_to_per_um(units::per_um_to_per_m(v)), v), 1e-15);
    EXPECT_LT(rel(units::mobility_to_cm2(units::mobility_from_cm2(v)), v), 1e-15);
  }
}
