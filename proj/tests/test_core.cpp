#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fsi_slab/core/fourier.hpp"
#include "fsi_slab/core/params.hpp"
#include "fsi_slab/core/stencil.hpp"

using namespace fsi_slab;

namespace {

ScalarField sample(const Grid& g, auto&& f) {
  ScalarField s(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) s(i, j) = f(g.x(i), g.z(j));
  return s;
}

}  // namespace

TEST(Quadrature, ConstantGivesTorusLength) {
  const Grid g(32, 17);
  EXPECT_NEAR(integrate_reference(ScalarField(g, 1.0), ScalarField(g, 1.0)), 2.0 * std::numbers::pi, 1e-13);
}

TEST(Quadrature, ZeroIntegrand) {
  const Grid g(16, 9);
  EXPECT_EQ(integrate_reference(ScalarField(g, 0.0), ScalarField(g, 1.0)), 0.0);
}

TEST(Quadrature, PeriodicMeanZero) {
  const Grid g(32, 9, 1.0);
  const ScalarField f = sample(g, [](double x, double) { return std::sin(2.0 * std::numbers::pi * x); });
  EXPECT_NEAR(integrate_reference(f, ScalarField(g, 1.0)), 0.0, 1e-15);
}

TEST(Quadrature, GridMismatchIsStructural) {
  try {
    integrate_reference(ScalarField(Grid(16, 9)), ScalarField(Grid(32, 9)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::structural);
  }
}

TEST(Quadrature, LinearAndPositive) {
  const Grid g(16, 9);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarField f(g), h(g), wgt(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    f[n] = u(rng);
    h[n] = u(rng);
    wgt[n] = 0.1 + u(rng);
  }
  ScalarField s(g);
  for (std::size_t n = 0; n < g.size(); ++n) s[n] = 2.0 * f[n] - 3.0 * h[n];
  EXPECT_NEAR(integrate_reference(s, wgt), 2.0 * integrate_reference(f, wgt) - 3.0 * integrate_reference(h, wgt), 1e-12);
  EXPECT_GE(integrate_reference(f, wgt), 0.0);
}

TEST(Quadrature, TrapezoidExactForLinearInZ) {
  const Grid g(8, 5);
  const ScalarField f = sample(g, [](double, double z) { return 3.0 * z + 1.0; });
  EXPECT_NEAR(integrate_reference(f), 2.0 * std::numbers::pi * 2.5, 1e-13);
}

TEST(Stencils, GradientOfConstantVanishes) {
  const VectorField d = grad(ScalarField(Grid(16, 9), 3.7));
  EXPECT_LT(d.max_norm(), 1e-13);
}

TEST(Stencils, DivergenceOfLinearFields) {
  const Grid g(16, 9);
  VectorField a(g), b(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      a[0](i, j) = g.z(j);
      b[1](i, j) = g.z(j);
    }
  EXPECT_LT(div(a).max_abs(), 1e-13);
  const ScalarField db = div(b);
  for (double v : db.v) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Stencils, SecondOrderOnSmoothPeriodicData) {
  std::vector<double> eg, ed;
  for (int nx : {16, 32, 64}) {
    const Grid g(nx, nx / 2 + 1);
    const ScalarField f = sample(g, [](double x, double z) { return std::sin(x) * std::exp(z); });
    const VectorField d = grad(f);
    VectorField v(g);
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < g.nx; ++i) {
        v[0](i, j) = std::cos(g.x(i)) * std::cos(g.z(j));
        v[1](i, j) = std::sin(g.x(i)) * std::sin(2.0 * g.z(j));
      }
    const ScalarField dv = div(v);
    double e1 = 0.0, e2 = 0.0;
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i), z = g.z(j);
        e1 = std::max({e1, std::abs(d[0](i, j) - std::cos(x) * std::exp(z)),
                       std::abs(d[1](i, j) - std::sin(x) * std::exp(z))});
        e2 = std::max(e2, std::abs(dv(i, j) - (-std::sin(x) * std::cos(z) + 2.0 * std::sin(x) * std::cos(2.0 * z))));
      }
    eg.push_back(e1);
    ed.push_back(e2);
  }
  for (std::size_t k = 1; k < eg.size(); ++k) {
    EXPECT_GE(std::log2(eg[k - 1] / eg[k]), 1.9);
    EXPECT_GE(std::log2(ed[k - 1] / ed[k]), 1.9);
  }
}

TEST(Fourier, ConstantHasOnlyMeanMode) {
  const Grid g(16, 4);
  const PlateModes m = plate_fourier(PlateField(16, 2.5), g);
  EXPECT_NEAR(m.c[0].real(), 2.5, 1e-14);
  for (std::size_t k = 1; k < m.c.size(); ++k) EXPECT_LT(std::abs(m.c[k]), 1e-14);
}

TEST(Fourier, RoundTripOfRandomField) {
  const Grid g(48, 4);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  PlateField w(g.nx);
  for (double& a : w) a = n(rng);
  const PlateField back = plate_inverse_fourier(plate_fourier(w, g));
  for (int i = 0; i < g.nx; ++i) EXPECT_NEAR(back[i], w[i], 1e-12);
}

TEST(Fourier, BilaplacianEigenfunction) {
  const Grid g(32, 4);
  const int k = 3;
  PlateField w(g.nx);
  for (int i = 0; i < g.nx; ++i) w[i] = std::sin(k * g.x(i));
  const PlateField b = plate_bilaplacian(w, g);
  for (int i = 0; i < g.nx; ++i) EXPECT_NEAR(b[i], std::pow(k, 4) * w[i], 1e-12 * std::pow(k, 4));
}

TEST(Fourier, ParsevalMatchesRectangleRule) {
  const Grid g(40, 4);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  PlateField w(g.nx);
  for (double& a : w) a = n(rng);
  double direct = 0.0;
  for (double a : w) direct += a * a * g.hx();
  EXPECT_NEAR(spectral_quadratic(plate_fourier(w, g), [](double) { return 1.0; }), direct, 1e-11 * direct);
}

TEST(ParamsValidation, RejectsOutOfRange) {
  Params p;
  EXPECT_NO_THROW(p.validate());
  p.gamma = 1.0;
  EXPECT_THROW(p.validate(), Error);
  p = Params{};
  p.delta = 0.1;
  p.beta = 3.0;
  EXPECT_THROW(p.validate(), Error);
  p = Params{};
  p.eps = 0.0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(GridValidation, RejectsTinyGrids) {
  EXPECT_THROW(Grid(2, 9).validate(), Error);
  EXPECT_NO_THROW(Grid(8, 5).validate());
}
