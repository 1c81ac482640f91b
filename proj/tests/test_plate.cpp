#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fsi_slab/cli/suites.hpp"

using namespace fsi_slab;

namespace {

Params strong_params() {
  Params p;
  p.kappa = Params::strong_sentinel();
  return p;
}

PlateField random_plate(int n, std::mt19937_64& rng, double amp = 0.1) {
  const Grid g(n, 4);
  const RandomProfile r(rng, amp, 4);
  return r.sample(g);
}

}  // namespace

TEST(PlateLoad, RestStateIsUnloaded) {
  const Grid g(16, 9);
  const State s(g, 1.0);
  for (double f : compute_plate_load(s, SlabGeometry(g, s.w, s.w_t), strong_params()).F) EXPECT_EQ(f, 0.0);
}

TEST(PlateLoad, UniformDensityExcess) {
  const Grid g(16, 9);
  Params p = strong_params();
  p.eps = 0.2;
  const double c = 0.3;
  const State s(g, 1.0 + p.eps * c);
  for (double f : compute_plate_load(s, SlabGeometry(g, s.w, s.w_t), p).F)
    EXPECT_NEAR(f, 2.0 * c / p.eps + c * c, 1e-12);
}

TEST(PlateLoad, PressureLoadHasStaticBalance) {
  const Grid g(32, 17);
  State s(g, 1.0);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) s.rho_hat(i, j) = 1.0 + 0.1 * std::cos(2.0 * g.x(i)) + 0.05 * std::sin(3.0 * g.x(i));
  const PlateField F = compute_plate_load(s, SlabGeometry(g, s.w, s.w_t), strong_params()).F;
  double mean = 0.0;
  for (double f : F) mean += f / g.nx;
  const PlateField w = plate_static_solve(F, g);
  const PlateField b = plate_bilaplacian(w, g);
  double res = 0.0;
  for (int i = 0; i < g.nx; ++i) res = std::max(res, std::abs(b[i] - (F[i] - mean)));
  EXPECT_LT(res, 1e-8);
}

TEST(PlateStep, MeanModeAtRestStaysPut) {
  const int n = 16;
  const PlateField w(n, 0.3), v(n, 0.0), f(n, 0.0);
  PlateField a = w, b = v;
  for (int k = 0; k < 100; ++k) std::tie(a, b) = plate_step(a, b, {f}, 0.05, Params{});
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(a[i], 0.3, 1e-14);
    EXPECT_NEAR(b[i], 0.0, 1e-14);
  }
}

TEST(PlateStep, UndampedModeFollowsHarmonicOscillator) {
  const int n = 32;
  const Grid g(n, 4);
  Params p;
  p.nu_s = 0.0;
  const int k = 3;
  const double om = k * k, A = 0.02, B = 0.1;
  PlateField w(n), v(n), f(n, 0.0);
  for (int i = 0; i < n; ++i) {
    w[i] = A * std::cos(k * g.x(i));
    v[i] = B * std::cos(k * g.x(i));
  }
  const double dt = 0.01;
  const double e0 = 0.5 * B * B + 0.5 * om * om * A * A;
  for (int s = 1; s <= 1000; ++s) {
    std::tie(w, v) = plate_step(w, v, {f}, dt, p);
    const double t = s * dt;
    const double amp = A * std::cos(om * t) + B / om * std::sin(om * t);
    const double vel = -A * om * std::sin(om * t) + B * std::cos(om * t);
    if (s % 100 == 0) {
      EXPECT_NEAR(w[0], amp, 1e-10);
      EXPECT_NEAR(v[0], vel, 1e-10);
      EXPECT_NEAR(0.5 * v[0] * v[0] + 0.5 * om * om * w[0] * w[0], e0, 1e-10);
    }
  }
}

TEST(PlateStep, DampedEnergyStrictlyDecreases) {
  std::mt19937_64 rng(6);
  const int n = 32;
  const Grid g(n, 4);
  Params p;
  p.nu_s = 0.5;
  PlateField w = random_plate(n, rng), v = random_plate(n, rng), f(n, 0.0);
  double e = plate_energy(w, v, g);
  for (int s = 0; s < 200; ++s) {
    std::tie(w, v) = plate_step(w, v, {f}, 0.01, p);
    const double e1 = plate_energy(w, v, g);
    EXPECT_LT(e1, e);
    e = e1;
  }
}

TEST(PlateStep, CriticallyDampedModeUsesLimitingFormula) {
  const int n = 16;
  const Grid g(n, 4);
  const int k = 2;
  Params p;
  p.nu_s = 2.0;  // nu_s k^2 = 2 k^2: double root at -k^2
  const double a = k * k, y0 = 0.05, v0 = -0.3;
  PlateField w(n), v(n), f(n, 0.0);
  for (int i = 0; i < n; ++i) {
    w[i] = y0 * std::cos(k * g.x(i));
    v[i] = v0 * std::cos(k * g.x(i));
  }
  const double t = 0.37;
  std::tie(w, v) = plate_step(w, v, {f}, t, p);
  const double e = std::exp(-a * t);
  EXPECT_NEAR(w[0], (y0 + (v0 + a * y0) * t) * e, 1e-14);
  EXPECT_NEAR(v[0], (v0 - a * (v0 + a * y0) * t) * e, 1e-14);
}

TEST(PlateStep, LinearInStateAndLoad) {
  std::mt19937_64 rng(12);
  const int n = 24;
  const PlateField w1 = random_plate(n, rng), v1 = random_plate(n, rng), f1 = random_plate(n, rng);
  const PlateField w2 = random_plate(n, rng), v2 = random_plate(n, rng), f2 = random_plate(n, rng);
  auto comb = [](const PlateField& a, const PlateField& b) {
    PlateField c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = 2.0 * a[i] - 0.5 * b[i];
    return c;
  };
  const Params p;
  const auto [a1, b1] = plate_step(w1, v1, {f1}, 0.03, p);
  const auto [a2, b2] = plate_step(w2, v2, {f2}, 0.03, p);
  const auto [a3, b3] = plate_step(comb(w1, w2), comb(v1, v2), {comb(f1, f2)}, 0.03, p);
  const PlateField ea = comb(a1, a2), eb = comb(b1, b2);
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(a3[i], ea[i], 1e-13);
    EXPECT_NEAR(b3[i], eb[i], 1e-13);
  }
}

TEST(PlateStep, NonPositiveStepRejected) {
  const PlateField z(8, 0.0);
  EXPECT_THROW(plate_step(z, z, {z}, 0.0, Params{}), Error);
}

TEST(PlateEnergy, ZeroState) {
  const PlateField z(16, 0.0);
  EXPECT_EQ(plate_energy(z, z, Grid(16, 4)), 0.0);
}

TEST(PlateEnergy, SineProfile) {
  const Grid g(32, 4);
  PlateField w(g.nx), z(g.nx, 0.0);
  for (int i = 0; i < g.nx; ++i) w[i] = std::sin(g.x(i));
  EXPECT_NEAR(plate_energy(w, z, g), std::numbers::pi / 2.0, 1e-12);
}

TEST(PlateEnergy, SpectralAndPhysicalQuadratureAgree) {
  std::mt19937_64 rng(14);
  const Grid g(48, 4);
  const PlateField w = random_plate(g.nx, rng), v = random_plate(g.nx, rng);
  const PlateField lap = plate_laplacian(w, g);
  double phys = 0.0;
  for (int i = 0; i < g.nx; ++i) phys += g.hx() * 0.5 * (v[i] * v[i] + lap[i] * lap[i]);
  EXPECT_NEAR(plate_energy(w, v, g), phys, 1e-10);
}

TEST(PlateSuite, PassesWithDefaultSeed) {
  const SuiteResult r = plate_suite(1);
  for (const Assertion& a : r.items) EXPECT_TRUE(a.pass()) << a.name << " " << a.value;
}
