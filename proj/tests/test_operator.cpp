#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pe/errors.hpp"
#include "pe/hydrostatics.hpp"
#include "pe/operator.hpp"
#include "pe/solver.hpp"

using pe::Field;
using pe::Repr;
using pe::Vec2;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

pe::GridPtr box(int n, int nz, double h = 1.0) { return pe::Grid::create(n, n, nz, kTwoPi, kTwoPi, h); }

pe::PhysicalParams windy() {
  pe::PhysicalParams p;
  p.tau = {0.1, 0.05};
  return p;
}

double rel_max(const oracle::Nodal& a, const oracle::Nodal& b) {
  double num = 0.0, den = 0.0;
  for (int c = 0; c < 2; ++c) {
    num = std::max(num, (a.c[c] - b.c[c]).cwiseAbs().maxCoeff());
    den = std::max(den, b.c[c].cwiseAbs().maxCoeff());
  }
  return num / den;
}

double rel_l2(const Field& a, const Field& b) {
  const Field pa = pe::transform(a, Repr::physical), pb = pe::transform(b, Repr::physical);
  return std::sqrt(pe::l2_squared(pa - pb) / pe::l2_squared(pb));
}

// Projected, dealiased, boundary-respecting random field.
Field admissible(const pe::LinearizedOp& op, std::uint64_t seed, double amp = 1.0, double slope = 1.0) {
  return pe::solenoidal_random_field(op.grid_ptr(), seed, amp, slope);
}

}  // namespace

TEST(LinearizedOp, SampledProfileMatchesClosedForm) {
  const auto g = box(8, 32);
  const pe::LinearizedOp op(windy(), g);
  for (int k = 0; k < g->npts(); ++k) {
    const Vec2 v = op.ekman().profile(g->z(k));
    const Vec2 dv = op.ekman().derivative(g->z(k));
    for (std::size_t c = 0; c < 2; ++c) {
      EXPECT_LE(std::abs(op.profile(c, k) - v[c]), 1e-12);
      EXPECT_LE(std::abs(op.shear(c, k) - dv[c]), 1e-12);
    }
  }
}

TEST(ApplyF, ConstantFieldGivesZero) {
  const auto g = box(8, 16);
  const Field c = pe::sample(g, [](double, double, double) { return Vec2{0.3, -1.2}; });
  EXPECT_LE(std::sqrt(pe::l2_squared(pe::apply_F(c, c))), 1e-13);
}

TEST(ApplyF, MatchesAnalyticOracle) {
  const double h = 1.0;
  const auto g = box(16, 16, h);
  const Field v = pe::sample(g, [&](double x, double, double z) { return Vec2{std::sin(x) * (z + h) * (z + h), 0.0}; });
  // v.grad v + w dz v = sin x cos x s^4 / 3; projection removes its mean over depth
  const Field expect = pe::sample(g, [&](double x, double, double z) {
    const double s = z + h;
    return Vec2{std::sin(2 * x) / 6.0 * (std::pow(s, 4) - std::pow(h, 4) / 5.0), 0.0};
  });
  EXPECT_LE(rel_l2(pe::apply_F(v, v), expect), 1e-6);
  EXPECT_LE(rel_l2(pe::apply_F(v, v), expect), 1e-11);
}

TEST(ApplyF, EnergyCancellation) {
  const auto g = box(16, 24);
  const pe::LinearizedOp op(windy(), g);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Field v = admissible(op, seed);
    const double n = std::sqrt(pe::l2_squared(v));
    EXPECT_LE(std::abs(pe::inner_product(pe::apply_F(v, v), v)), 1e-9 * n * n * n) << seed;
  }
}

TEST(ApplyF, BilinearBelowCutoff) {
  const auto g = box(16, 24);
  const pe::LinearizedOp op(windy(), g);
  const Field a = admissible(op, 1), b = admissible(op, 2), c = admissible(op, 3);
  const Field lhs = pe::apply_F(2.0 * a + (-0.5) * b, c);
  const Field rhs = 2.0 * pe::apply_F(a, c) + (-0.5) * pe::apply_F(b, c);
  EXPECT_LE(rel_l2(lhs, rhs), 1e-11);
  const Field lhs2 = pe::apply_F(c, 3.0 * a + b);
  const Field rhs2 = 3.0 * pe::apply_F(c, a) + pe::apply_F(c, b);
  EXPECT_LE(rel_l2(lhs2, rhs2), 1e-11);
}

TEST(ApplyF, MatchesDenseAssembly) {
  const int n = 16, nz = 16;
  const auto g = box(n, nz);
  // low modes keep every product below the dealiasing cutoff
  auto smooth = [](double x, double y, double z) {
    const double s = z + 1.0;
    return Vec2{std::sin(x) * std::cos(y) * s * s + 0.3 * std::cos(2 * y) * s,
                std::cos(x + y) * (1.0 - s * s / 3.0) + 0.2 * std::sin(2 * x)};
  };
  const Field v = pe::sample(g, smooth);
  const Field vp = pe::sample(g, [&](double x, double y, double z) { return smooth(y, x, z); });
  const oracle::DenseOps dense(n, n, nz, kTwoPi, kTwoPi, 1.0);
  const oracle::Nodal expect = dense.apply_F(oracle::from_field(v), oracle::from_field(vp));
  EXPECT_LE(rel_max(oracle::from_field(pe::apply_F(v, vp)), expect), 1e-6);
}

TEST(ApplyA, DiffusionOfBarotropicMode) {
  const auto g = box(8, 16);
  const pe::LinearizedOp op(pe::PhysicalParams{}, g);
  const Field v = pe::sample(g, [](double x, double y, double) {
    return Vec2{std::sin(2 * y) * std::cos(x), 2 * std::sin(x) * std::cos(2 * y)};
  });
  const Field d = op.diffusion(v);
  EXPECT_LE(rel_l2(d, (-0.1 * 5.0) * v), 1e-12);
}

TEST(ApplyA, MatchesDenseAssemblyWithoutSpiral) {
  const int n = 12, nz = 16;
  const double h = 1.0;
  const auto g = box(n, nz, h);
  pe::PhysicalParams p;  // tau = v_g = 0
  const pe::LinearizedOp op(p, g);
  const Field v = pe::project(pe::sample(g, [&](double x, double, double z) {
    return Vec2{std::sin(x) * std::sin((z + h) * kPi / (2 * h)), 0.0};
  }));
  const oracle::DenseOps dense(n, n, nz, kTwoPi, kTwoPi, h);
  std::array<oracle::Vec, 2> prof{oracle::Vec::Zero(nz + 1), oracle::Vec::Zero(nz + 1)}, shear = prof;
  const oracle::Nodal expect = dense.apply_A(oracle::from_field(v), p, prof, shear);
  EXPECT_LE(rel_max(oracle::from_field(pe::apply_A(op, v)), expect), 1e-6);
}

TEST(ApplyA, MatchesDenseAssemblyWithSpiral) {
  const int n = 12, nz = 16;
  const auto g = box(n, nz);
  pe::PhysicalParams p = windy();
  p.v_g = {0.05, -0.02};
  const pe::LinearizedOp op(p, g);
  const Field v = admissible(op, 31, 1.0, 0.5);
  const oracle::DenseOps dense(n, n, nz, kTwoPi, kTwoPi, 1.0);
  std::array<oracle::Vec, 2> prof{oracle::Vec(nz + 1), oracle::Vec(nz + 1)}, shear = prof;
  for (int k = 0; k <= nz; ++k)
    for (std::size_t c = 0; c < 2; ++c) {
      prof[c][k] = op.ekman().profile(dense.vert.z[k])[c];
      shear[c][k] = op.ekman().derivative(dense.vert.z[k])[c];
    }
  const oracle::Nodal expect = dense.apply_A(oracle::from_field(v), p, prof, shear);
  EXPECT_LE(rel_max(oracle::from_field(pe::apply_A(op, v)), expect), 1e-6);
}

TEST(ApplyA, WarnsOnBoundaryViolation) {
  const auto g = box(8, 16);
  const pe::LinearizedOp op(windy(), g);
  bool warned = false;
  const Field flat = pe::sample(g, [](double x, double, double) { return Vec2{std::sin(x), 0.0}; });
  pe::apply_A(op, flat, &warned);
  EXPECT_TRUE(warned);
  pe::apply_A(op, admissible(op, 4), &warned);
  EXPECT_FALSE(warned);
}

TEST(ApplyA, Linear) {
  const auto g = box(16, 24);
  const pe::LinearizedOp op(windy(), g);
  const Field a = admissible(op, 5), b = admissible(op, 6);
  EXPECT_LE(rel_l2(pe::apply_A(op, a + b), pe::apply_A(op, a) + pe::apply_A(op, b)), 1e-11);
}

TEST(ApplyA, EnergyFormNegativeInStableRegime) {
  const auto g = box(16, 24);
  const pe::PhysicalParams p = windy();
  ASSERT_TRUE(pe::smallness_constant(p).stable);
  const pe::LinearizedOp op(p, g);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Field v = pe::solenoidal_random_field(g, 1000 + seed, 1.0, 0.5 + 0.02 * seed);
    EXPECT_LT(pe::inner_product(pe::apply_A(op, v), v), 0.0) << seed;
  }
}

TEST(ApplyA, RotationIsSkew) {
  const auto g = box(16, 24);
  pe::PhysicalParams p = windy();
  p.f = -1.7;
  const pe::LinearizedOp op(p, g);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Field v = pe::project(pe::random_field(g, seed, 1.0, 1.0));
    Field rot(g, Repr::spectral);
    const Field s = pe::transform(v, Repr::spectral);
    for (std::size_t i = 0; i < g->size(); ++i) {
      rot.comp(0)[i] = -p.f * s.comp(1)[i];
      rot.comp(1)[i] = p.f * s.comp(0)[i];
    }
    EXPECT_LE(std::abs(pe::inner_product(pe::project(rot), v)), 1e-10 * std::abs(p.f) * pe::l2_squared(v));
  }
}

TEST(BilinearRatio, ZeroFieldUndefined) {
  const auto g = box(8, 16);
  for (int k = 0; k <= 2; ++k) EXPECT_FALSE(pe::bilinear_ratio(Field(g, Repr::physical), k).has_value());
  EXPECT_THROW(pe::bilinear_ratio(Field(g, Repr::physical), 3), std::invalid_argument);
}

TEST(BilinearRatio, HomogeneousOfDegreeZero) {
  const auto g = box(16, 24);
  const pe::LinearizedOp op(windy(), g);
  const Field v = admissible(op, 9);
  for (int k = 0; k <= 2; ++k) {
    const double a = *pe::bilinear_ratio(v, k), b = *pe::bilinear_ratio(2.0 * v, k);
    EXPECT_LE(std::abs(a - b) / a, 1e-11) << k;
  }
}

TEST(BilinearRatio, ConvergedUnderVerticalRefinement) {
  auto smooth = [](double x, double y, double z) {
    const double s = z + 1.0;
    return Vec2{std::sin(x) * std::cos(y) * s * s * (1.0 - s * s / 2.0) + std::cos(y) * s * s * (2.0 - s),
                std::sin(2 * x) * s * s * (1.0 - s * s / 2.0)};
  };
  for (int k = 0; k <= 2; ++k) {
    std::vector<double> r;
    for (int nz : {24, 32, 48}) r.push_back(*pe::bilinear_ratio(pe::sample(box(16, nz), smooth), k));
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    EXPECT_LT((*hi - *lo) / *lo, 0.05) << k;
  }
}

TEST(SpectralBound, DiffusionOracleWithoutForcing) {
  const double nu_z = 0.1, h = 1.0;
  pe::PhysicalParams p;
  p.nu_z = nu_z;
  const pe::LinearizedOp op(p, box(8, 24, h));
  pe::SpectralBoundOptions o;
  o.dt = 0.005;
  const pe::SpectralBound sb = pe::estimate_spectral_bound(op, o);
  // smallest eigenvalue of -nu_z phi'' with phi'(0) = 0, phi(-h) = 0, on the k = 0 mode
  const double oracle_rate = -nu_z * std::pow(kPi / (2.0 * h), 2);
  EXPECT_TRUE(sb.converged);
  EXPECT_LE(sb.residual, 1e-6);
  EXPECT_LE(std::abs(sb.omega0 - oracle_rate) / std::abs(oracle_rate), 1e-4);
  EXPECT_TRUE(sb.complex_pair);  // rotation pairs the slowest mode with its conjugate
  EXPECT_FALSE(sb.unstable);
}

TEST(SpectralBound, IgnoresCrankNicolsonStiffModes) {
  // Shallow layer at a large step: the stiffest vertical modes have CN
  // amplification near -1 and decay at about -0.24, slower than the
  // physical slowest mode -nu_z (pi / 2h)^2.
  pe::PhysicalParams p;
  p.nu_z = 0.169;
  p.h = 0.506;
  p.f = -1.0;
  const pe::LinearizedOp op(p, pe::Grid::create(8, 8, 24, kTwoPi, kTwoPi, p.h));
  pe::SpectralBoundOptions o;
  o.dt = 0.02;
  o.horizon = 5.0;
  const auto sb = pe::estimate_spectral_bound(op, o);
  const double physical = -p.nu_z * std::pow(kPi / (2.0 * p.h), 2);
  EXPECT_TRUE(sb.converged);
  EXPECT_LE(std::abs(sb.omega0 - physical) / std::abs(physical), 1e-3);
}

TEST(SpectralBound, HorizonDoublingConsistent) {
  const pe::LinearizedOp op(windy(), box(8, 24));
  pe::SpectralBoundOptions o;
  o.horizon = 1.0;
  const auto a = pe::estimate_spectral_bound(op, o);
  o.horizon = 2.0;
  const auto b = pe::estimate_spectral_bound(op, o);
  ASSERT_TRUE(a.converged && b.converged);
  EXPECT_LE(std::abs(a.omega0 - b.omega0), 2.0 * o.tol);
}

TEST(SpectralBound, NegativeInStableWindDrivenRegime) {
  pe::PhysicalParams p = windy();
  p.v_g = {0.005, -0.004};
  ASSERT_TRUE(pe::smallness_constant(p).stable);
  const auto sb = pe::estimate_spectral_bound(pe::LinearizedOp(p, box(8, 24)), {});
  EXPECT_TRUE(sb.converged);
  EXPECT_LT(sb.omega0, 0.0);
}

TEST(SpectralBound, RejectsBadOptions) {
  const pe::LinearizedOp op(windy(), box(8, 16));
  pe::SpectralBoundOptions o;
  o.krylov_dim = 1;
  EXPECT_THROW(pe::estimate_spectral_bound(op, o), pe::ValidationError);
  o = {};
  o.horizon = 0.001;
  EXPECT_THROW(pe::estimate_spectral_bound(op, o), pe::ValidationError);
}

TEST(SpectralBound, ReportsNonConvergence) {
  const pe::LinearizedOp op(windy(), box(8, 24));
  pe::SpectralBoundOptions o;
  o.krylov_dim = 2;
  o.tol = 1e-14;
  const auto sb = pe::estimate_spectral_bound(op, o);
  EXPECT_FALSE(sb.converged);
  EXPECT_EQ(sb.iterations, 2);
}
