#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "pe/diagnostics.hpp"
#include "pe/errors.hpp"

using pe::Field;
using pe::Vec2;

namespace {

constexpr double kPi = std::numbers::pi;

using Series = std::vector<std::pair<double, double>>;

Series exponential(double c, double rate, int n, double dt) {
  Series s;
  for (int i = 0; i < n; ++i) s.emplace_back(i * dt, c * std::exp(rate * i * dt));
  return s;
}

std::vector<pe::DiagnosticsRecord> synthetic(int n, double t_end, double rate) {
  std::vector<pe::DiagnosticsRecord> out(n);
  for (int i = 0; i < n; ++i) {
    const double t = t_end * i / (n - 1);
    auto& r = out[i];
    r.t = t;
    r.l2 = std::exp(rate * t);
    r.h1 = 2.0 * r.l2;
    r.h2 = 3.0 * r.l2;
    r.h3 = 4.0 * r.l2;
    r.h4 = 5.0 * r.l2;
    r.energy = r.l2 * r.l2;
  }
  return out;
}

}  // namespace

TEST(DecayFit, RecoversExactExponential) {
  const auto s = exponential(2.5, -0.37, 40, 0.25);
  const auto fit = pe::decay_fit(s);
  EXPECT_NEAR(fit.rate, -0.37, 1e-12);
  EXPECT_NEAR(fit.amplitude, 2.5, 1e-11);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
}

TEST(DecayFit, ConstantSeriesHasZeroRate) {
  Series t;
  for (int i = 0; i < 10; ++i) t.emplace_back(i, 3.0);
  const auto fit = pe::decay_fit(t);
  EXPECT_NEAR(fit.rate, 0.0, 1e-15);
  EXPECT_NEAR(fit.amplitude, 3.0, 1e-14);
}

TEST(DecayFit, TransientIsExcluded) {
  auto s = exponential(1.0, -0.5, 50, 0.1);
  for (int i = 0; i < 9; ++i) s[i].second *= 10.0;  // a transient in the first 18 %
  EXPECT_NEAR(pe::decay_fit(s, 0.2).rate, -0.5, 1e-12);
  EXPECT_GT(std::abs(pe::decay_fit(s, 0.0).rate + 0.5), 0.1);
}

TEST(DecayFit, RejectsBadInput) {
  EXPECT_THROW(pe::decay_fit(exponential(1.0, -1.0, 4, 0.1)), pe::ValidationError);
  auto s = exponential(1.0, -1.0, 10, 0.1);
  s[7].second = 0.0;
  EXPECT_THROW(pe::decay_fit(s), pe::ValidationError);
  s[7].second = -1.0;
  EXPECT_THROW(pe::decay_fit(s), pe::ValidationError);
  s[7].second = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(pe::decay_fit(s), pe::ValidationError);
}

TEST(EnergyMonotone, ReportsFirstUptick) {
  const std::vector<double> down{4.0, 3.0, 3.0, 2.0, 1.0};
  EXPECT_TRUE(pe::check_energy_monotone(down).pass);
  const std::vector<double> up{4.0, 3.0, 2.0, 2.5, 1.0, 1.5};
  const auto rep = pe::check_energy_monotone(up);
  EXPECT_FALSE(rep.pass);
  ASSERT_TRUE(rep.first_violation.has_value());
  EXPECT_EQ(*rep.first_violation, 3u);
}

TEST(EnergyMonotone, ToleranceIsRelative) {
  const std::vector<double> e{1.0, 1.0 + 5e-11, 0.5};
  EXPECT_TRUE(pe::check_energy_monotone(e, 1e-10).pass);
  EXPECT_FALSE(pe::check_energy_monotone(e, 1e-11).pass);
}

TEST(EnergyMonotone, ReadsRecords) {
  const auto recs = synthetic(20, 2.0, -1.0);
  EXPECT_TRUE(pe::check_energy_monotone(recs).pass);
  const auto grow = synthetic(20, 2.0, 0.1);
  EXPECT_EQ(pe::check_energy_monotone(grow).first_violation.value_or(0), 1u);
}

TEST(HkBoundedness, IntegralMatchesClosedForm) {
  const double t_end = 5.0;
  const auto recs = synthetic(401, t_end, -1.0);
  for (int k = 1; k <= 3; ++k) {
    const auto rep = pe::hk_boundedness(recs, k);
    const double amp = k + 2.0;  // H^{k+1} coefficient
    const double exact = amp * amp * (1.0 - std::exp(-2.0 * t_end)) / 2.0;
    EXPECT_LE(std::abs(rep.integral - exact) / exact, 0.01);
    EXPECT_DOUBLE_EQ(rep.max_norm, k + 1.0);
    EXPECT_TRUE(rep.finite);
    EXPECT_TRUE(rep.tail_monotone);
  }
}

TEST(HkBoundedness, FlagsGrowthAndNonFinite) {
  auto recs = synthetic(50, 1.0, -1.0);
  recs[30].h2 *= 1.5;
  EXPECT_FALSE(pe::hk_boundedness(recs, 2).tail_monotone);
  EXPECT_TRUE(pe::hk_boundedness(recs, 1).tail_monotone);
  // growth inside the transient window is tolerated
  auto early = synthetic(50, 1.0, -1.0);
  early[3].h1 *= 1.5;
  EXPECT_TRUE(pe::hk_boundedness(early, 1).tail_monotone);
  recs[10].h3 = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(pe::hk_boundedness(recs, 2).finite);
  EXPECT_THROW(pe::hk_boundedness(recs, 0), std::invalid_argument);
  EXPECT_THROW(pe::hk_boundedness(recs, 4), std::invalid_argument);
}

TEST(Record, ZeroField) {
  const auto g = pe::Grid::create(8, 8, 16, 2 * kPi, 2 * kPi, 1.0);
  const auto r = pe::record(Field(g), 1.5);
  EXPECT_EQ(r.t, 1.5);
  for (double v : {r.l2, r.h1, r.h2, r.h3, r.h4, r.l4_baroclinic, r.energy, r.jensen_slack,
                   r.poincare_slack, r.barotropic_h1, r.boundary_top, r.boundary_bottom})
    EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(std::isnan(r.bilinear_ratio_k0));
}

// v = (sin x cos(pi z / 2), 0) on [0, 2 pi]^2 x (-1, 0); every entry has a closed form.
TEST(Record, SeparableFieldMatchesClosedForm) {
  const auto g = pe::Grid::create(8, 8, 28, 2 * kPi, 2 * kPi, 1.0);
  const Field v = pe::sample(g, [](double x, double, double z) {
    return Vec2{std::sin(x) * std::cos(kPi * z / 2.0), 0.0};
  });
  const auto r = pe::record(v, 0.0);
  const double pi2 = kPi * kPi;
  EXPECT_NEAR(r.l2, kPi, 1e-12);
  EXPECT_NEAR(r.energy, pi2, 1e-11);
  EXPECT_NEAR(r.h1, std::sqrt(pi2 * (2.0 + pi2 / 4.0)), 1e-11);
  EXPECT_NEAR(r.barotropic_h1, std::sqrt(8.0), 1e-12);
  EXPECT_NEAR(r.poincare_slack, pi2 / 2.0 - kPi, 1e-11);
  EXPECT_NEAR(r.jensen_slack, 2.0 * pi2 - 12.0 + 32.0 / kPi, 1e-10);
  EXPECT_LE(r.boundary_top, 1e-11);
  EXPECT_LE(r.boundary_bottom, 1e-12);

  const double mean = 2.0 / kPi;
  const double vert = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double z) { return std::pow(std::cos(kPi * z / 2.0) - mean, 4); }, -1.0, 0.0);
  EXPECT_NEAR(r.l4_baroclinic, std::pow(1.5 * pi2 * vert, 0.25), 1e-10);

  EXPECT_LT(r.h1, r.h2);
  EXPECT_LT(r.h2, r.h3);
  EXPECT_LT(r.h3, r.h4);
  EXPECT_TRUE(std::isfinite(r.bilinear_ratio_k0));
  const double norms[] = {r.l2, r.h1, r.h2, r.h3, r.h4};
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(pe::record_norm(r, k), norms[k]);
  EXPECT_THROW(pe::record_norm(r, 5), std::invalid_argument);
}
