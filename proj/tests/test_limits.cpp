#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fsi_slab/limits/scaling.hpp"
#include "fsi_slab/limits/sweep.hpp"
#include "fsi_slab/scheme/stepper.hpp"

using namespace fsi_slab;

namespace {

RunConfig prepared(int nx, double t_final = 0.2) {
  RunConfig c;
  c.grid = Grid(nx, nx / 2 + 1);
  c.params.eps = 0.1;
  c.params.nu = 0.1;
  c.initial.profile = "well_prepared";
  c.initial.velocity_amplitude = 0.2;
  c.initial.rho1_amplitude = 0.5;
  c.initial.rho1_power = 1.0;
  c.initial.plate_amplitude = 0.01;
  c.t_final = t_final;
  c.output_interval = 0.05;
  c.dt_factor = 0.5;
  return c;
}

SweepRow row(double eps, double nu, double sup, bool ok = true) {
  SweepRow r;
  r.eps = eps;
  r.nu = nu;
  r.sup_rel_energy = sup;
  if (!ok) r.status = "failed";
  return r;
}

}  // namespace

TEST(Scaling, DerivedNumbers) {
  CharacteristicValues cv;
  cv.p_f = 100.0;
  cv.nu_f = 0.01;
  const Nondimensional n = nondimensionalize(cv);
  EXPECT_DOUBLE_EQ(n.eps, 0.1);
  EXPECT_DOUBLE_EQ(n.nu, 0.01);
  for (double r : n.structural) EXPECT_DOUBLE_EQ(r, 1.0);
  EXPECT_TRUE(n.warnings.empty());
}

TEST(Scaling, WarnsWhenPlateRatiosAreOffUnity) {
  CharacteristicValues cv;
  cv.E = 2.0;
  cv.U_f = 2.0;
  cv.N_s = 4.0;
  const Nondimensional n = nondimensionalize(cv);
  EXPECT_DOUBLE_EQ(n.structural[0], 0.25);
  EXPECT_DOUBLE_EQ(n.structural[1], 0.5);
  EXPECT_DOUBLE_EQ(n.structural[2], 1.0);
  EXPECT_EQ(n.warnings.size(), 2u);
  cv.L = 0.0;
  EXPECT_THROW(nondimensionalize(cv), Error);
}

TEST(WellPrepared, DensityIsLinearInEps) {
  const Grid g(16, 9);
  BaseProfiles b(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) b.rho1(i, j) = std::cos(g.x(i));
  const Params p;
  const State s = well_prepared_ic(1e-3, b, 2.0, p);
  EXPECT_NEAR(s.rho_hat.max(), 1.001, 1e-15);
  EXPECT_NEAR(s.rho_hat.min(), 0.999, 1e-15);
  const State flat = well_prepared_ic(0.0, b, 2.0, p);
  for (double r : flat.rho_hat.v) EXPECT_EQ(r, p.rho_bar);
}

TEST(WellPrepared, BoundOnPerturbationEnforced) {
  const Grid g(16, 9);
  BaseProfiles b(g);
  b.rho1.v.assign(g.size(), 3.0);
  EXPECT_NEAR(perturbation_size(b), 3.0, 1e-15);
  try {
    well_prepared_ic(0.1, b, 2.0, Params{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parameter);
  }
  EXPECT_THROW(well_prepared_ic(-0.1, b, 10.0, Params{}), Error);
}

TEST(WellPrepared, VelocityMatchesBothWalls) {
  const Grid g(32, 17);
  BaseProfiles b(g);
  b.u0 = stream_velocity(g, 0.2, 2);
  for (int i = 0; i < g.nx; ++i) {
    b.w0[i] = 0.02 * std::cos(g.x(i));
    b.w1[i] = 0.1 * std::sin(g.x(i));
  }
  const State s = well_prepared_ic(0.1, b, 10.0, Params{});
  EXPECT_LT(kinematic_mismatch(s), 1e-13);
  for (int i = 0; i < g.nx; ++i) EXPECT_EQ(s.u_hat[1](i, 0), 0.0);
}

TEST(WellPrepared, InitialPotentialScalesWithEpsSquared) {
  // gamma = 2: potential (rho - 1)^2 / eps^2 with rho - 1 = a eps^2 cos x integrates to a^2 eps^2 pi.
  for (double eps : {0.2, 0.1, 0.05}) {
    RunConfig c = prepared(16);
    c.params.eps = eps;
    c.initial.velocity_amplitude = 0.0;
    c.initial.plate_amplitude = 0.0;
    const State s = make_initial_state(c.initial, c.grid, c.effective_params());
    EXPECT_NEAR(energy_report(s, c.effective_params()).pressure_potential, 0.25 * eps * eps * std::numbers::pi,
                1e-12);
  }
}

TEST(Proxy, RestBaseStaysAtRest) {
  RunConfig c;
  c.grid = Grid(16, 9);
  c.t_final = 0.1;
  c.output_interval = 0.05;
  const ReferenceSolution ref = reference_proxy(c, 0.05, 0.05);
  ASSERT_EQ(ref.snapshots.size(), 3u);
  for (const ReferenceSnapshot& s : ref.snapshots) {
    EXPECT_EQ(s.v.max_norm(), 0.0);
    EXPECT_EQ(s.pi.max_abs(), 0.0);
    for (double e : s.eta) EXPECT_EQ(e, 0.0);
  }
}

TEST(Proxy, ProjectedVelocityIsSolenoidalAndKinematic) {
  const ReferenceSolution ref = reference_proxy(prepared(32), 0.025, 0.025);
  EXPECT_LT(ref.projection_defect, 1e-6);
  EXPECT_LT(ref.kinematic_defect, 1e-6);
  EXPECT_GT(ref.raw_divergence, ref.projection_defect);
  const ReferenceSnapshot mid = ref.at(0.075);
  EXPECT_DOUBLE_EQ(mid.t, 0.075);
  for (std::size_t i = 0; i < mid.eta.size(); ++i)
    EXPECT_NEAR(mid.eta[i], 0.5 * (ref.snapshots[1].eta[i] + ref.snapshots[2].eta[i]), 1e-15);
}

TEST(Transform, MatchingPlateGivesIdentity) {
  const ReferenceSolution ref = reference_proxy(prepared(32), 0.025, 0.025);
  const ReferenceSnapshot& snap = ref.snapshots[2];
  State s(ref.grid, 1.0);
  s.t = snap.t;
  s.w = snap.eta;
  s.w_t = snap.eta_t;
  const TransformedReference X = transform_reference(ref, s, ref.params);
  for (int a = 0; a < 2; ++a)
    for (std::size_t n = 0; n < s.rho_hat.size(); ++n) EXPECT_NEAR(X.triple.U[a][n], snap.v[a][n], 1e-13);
  EXPECT_LT(X.forcing.total_l2, 1e-12);
  EXPECT_LT(X.forcing.plate_difference, 1e-13);
  EXPECT_LT(admissibility_check(X.triple, s.w, 1e-6).max_defect, 1e-6);
}

TEST(Transform, WallFluxPreservedOnCurvedWall) {
  for (int nx : {32, 64}) {
    const RunConfig c = prepared(nx, 0.1);
    const ReferenceSolution ref = reference_proxy(c, 0.025, 0.025);
    State s(c.grid, 1.0);
    s.t = 0.05;
    for (int i = 0; i < c.grid.nx; ++i) {
      s.w[i] = 0.03 * std::sin(c.grid.x(i));
      s.w_t[i] = 0.05 * std::cos(2.0 * c.grid.x(i));
    }
    const TransformedReference X = transform_reference(ref, s, ref.params);
    EXPECT_LT(admissibility_check(X.triple, s.w, 1.0).max_defect, 1e-13) << nx;
    EXPECT_GT(X.forcing.total_l2, 0.0);
  }
}

TEST(Sweep, SelfComparisonSkipsScaleRule) {
  const RunConfig base = prepared(16);
  const ReferenceSolution ref = reference_proxy(base, 0.1, 0.1);
  SweepSpec spec;
  spec.eps_list = {0.1};
  spec.nu_list = {0.1};
  spec.floor = 0.0;
  const SweepTable t = sweep(spec, base, ref);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_TRUE(t.rows[0].ok()) << t.rows[0].message;
  EXPECT_TRUE(std::isfinite(t.rows[0].sup_rel_energy));
  EXPECT_LT(t.rows[0].sup_rel_energy, 0.1 * energy_report(make_initial_state(base.initial, base.grid, base.params),
                                                             base.params)
                                                    .energy());

  spec.eps_list = {0.2};
  EXPECT_THROW(sweep(spec, base, ref), Error);
}

TEST(Sweep, FailedRunIsRecordedNotThrown) {
  RunConfig base = prepared(16);
  base.t_final = 0.1;
  const ReferenceSolution ref = reference_proxy(base, 0.025, 0.025);
  base.time_budget = 1e-9;
  const SweepRow r = sweep_row(base, ref, 0.1, 0.1);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.message.empty());
  EXPECT_TRUE(std::isnan(r.sup_rel_energy));
  SweepTable t;
  t.rows = {r};
  EXPECT_NE(sweep_csv(t).find(",failed\n"), std::string::npos);
}

TEST(Sweep, CsvLayout) {
  SweepTable t;
  t.rows = {row(0.1, 0.05, 1e-3)};
  const std::string csv = sweep_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "eps,nu,sup_rel_energy,terminal_rel_energy,initial_rel_energy,status");
  EXPECT_NE(csv.find("\n0.10000000000000001,0.050000000000000003,0.001,0,0,ok\n"), std::string::npos);
}

TEST(LogFit, RecoversPowerLaw) {
  const std::vector<double> x{0.1, 0.2, 0.4, 0.8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  const LogFit f = fit_log_log(x, y);
  EXPECT_NEAR(f.slope, 1.5, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
  EXPECT_NEAR(f.residual, 0.0, 1e-12);
  EXPECT_EQ(f.points, 4);
}

TEST(LogFit, SkipsNonPositiveAndNeedsTwoPoints) {
  const LogFit f = fit_log_log({0.1, 0.2, 0.4}, {-1.0, 0.0, 2.0});
  EXPECT_EQ(f.points, 1);
  EXPECT_TRUE(std::isnan(f.slope));
}

TEST(Monotone, ColumnAndDiagonal) {
  SweepTable t;
  t.rows = {row(0.2, 0.2, 4.0), row(0.1, 0.2, 2.0), row(0.05, 0.2, 2.1), row(0.1, 0.1, 1.0), row(0.05, 0.05, 0.5),
            row(0.025, 0.2, 99.0, false)};
  EXPECT_TRUE(monotone_in_eps(t, 0.2, 0.06));
  EXPECT_FALSE(monotone_in_eps(t, 0.2, 0.01));
  EXPECT_TRUE(diagonal_monotone(t, 0.0));
  EXPECT_FALSE(monotone_in_eps(t, 0.05, 0.0));
}
