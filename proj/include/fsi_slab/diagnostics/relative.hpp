#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "energy.hpp"

namespace fsi_slab {

// Comparison fields sampled at the nodes of the current (mapped) grid. Time derivatives are Eulerian,
// taken at a fixed physical point. Spatial gradients are formed from the samples with the grid operators.
struct TestTriple {
  ScalarField r, r_t;
  VectorField U, U_t;
  PlateField W, W_t, W_tt;
  bool admissible = true;

  explicit TestTriple(const Grid& g, double rho_bar = 1.0)
      : r(g, rho_bar), r_t(g), U(g), U_t(g), W(g.plate_size(), 0.0), W_t(g.plate_size(), 0.0),
        W_tt(g.plate_size(), 0.0) {}
};

// The trivial comparison (rho_bar, 0, 0).
inline TestTriple rest_triple(const Grid& g, const Params& p) { return TestTriple(g, p.rho_bar); }

struct AdmissibilityResult {
  bool pass = true;
  double max_defect = 0.0;
};

// max over the top wall of |U . (-w', 1) - W_t|.
inline AdmissibilityResult admissibility_check(const TestTriple& T, const PlateField& w, double tol) {
  const Grid& g = T.U.grid;
  const PlateField s = plate_slope(w, g);
  const int top = g.nz - 1;
  AdmissibilityResult r;
  for (int i = 0; i < g.nx; ++i)
    r.max_defect = std::max(r.max_defect, std::abs(-s[i] * T.U[0](i, top) + T.U[1](i, top) - T.W_t[i]));
  r.pass = r.max_defect <= tol;
  return r;
}

inline double relative_energy(const State& s, const TestTriple& T, const Params& p) {
  const Grid& g = s.grid();
  require(T.r.grid == g && T.U.grid == g, ErrorKind::structural, "triple and state grids differ");
  require(T.r.min() > 0.0, ErrorKind::parameter, "comparison density must be positive");
  double ke = 0.0, pe = 0.0;
  for (int j = 0; j < g.nz; ++j) {
    double rk = 0.0, rp = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t n = g.at(i, j);
      const double J = 1.0 + s.w[i];
      const double a = s.u_hat[0][n] - T.U[0][n], b = s.u_hat[1][n] - T.U[1][n];
      rk += J * s.rho_hat[n] * (a * a + b * b);
      rp += J * pressure_potential(s.rho_hat[n], T.r[n], p);
    }
    ke += g.wz(j) * rk;
    pe += g.wz(j) * rp;
  }
  PlateField dv(g.nx), dw(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    dv[i] = s.w_t[i] - T.W_t[i];
    dw[i] = s.w[i] - T.W[i];
  }
  const double plate = 0.5 * spectral_quadratic(plate_fourier(dv, g), [](double) { return 1.0; }) +
                       0.5 * spectral_quadratic(plate_fourier(dw, g), [](double k2) { return k2 * k2; });
  return 0.5 * g.hx() * ke + g.hx() * pe + plate;
}

// Integrands of the remainder, each already integrated over the current domain or boundary.
struct RemainderItems {
  static constexpr int count = 8;
  std::array<double, count> v{};
  double& advective() { return v[0]; }
  double& pressure_divergence() { return v[1]; }
  double& boundary_pressure() { return v[2]; }
  double& viscous_cross() { return v[3]; }
  double& plate_residual() { return v[4]; }
  double& transport() { return v[5]; }
  double& top_slip_cross() { return v[6]; }
  double& bottom_slip_cross() { return v[7]; }
  double total() const {
    double t = 0.0;
    for (double a : v) t += a;
    return t;
  }
  static const char* name(int k) {
    static const char* names[count] = {"advective",       "pressure_divergence", "boundary_pressure",
                                       "viscous_cross",   "plate_residual",      "transport",
                                       "top_slip_cross",  "bottom_slip_cross"};
    return names[k];
  }
};

namespace detail {

inline VelocityGradient field_gradient(const SlabGeometry& geo, const VectorField& U) {
  return velocity_gradient(geo, U[0].v, U[1].v);
}

// Power-law components (coefficient, exponent) of p_delta.
inline std::vector<std::pair<double, double>> pressure_terms(const Params& p) {
  std::vector<std::pair<double, double>> t{{1.0, p.gamma}};
  if (p.delta > 0.0) t.emplace_back(p.delta, p.beta);
  return t;
}

}  // namespace detail

inline RemainderItems remainder_R(const State& s, const TestTriple& T, const Params& p) {
  const Grid& g = s.grid();
  require(T.r.grid == g && T.U.grid == g, ErrorKind::structural, "triple and state grids differ");
  const SlabGeometry geo = state_geometry(s, p);
  const VelocityGradient Gu = velocity_gradient(geo, s.u_hat[0].v, s.u_hat[1].v);
  const VelocityGradient GU = detail::field_gradient(geo, T.U);
  std::vector<double> rx, rz, tmp;
  geo.gx(T.r.v, rx, tmp);
  geo.gz(T.r.v, rz);
  const double ie2 = 1.0 / (p.eps * p.eps);
  const auto terms = detail::pressure_terms(p);
  RemainderItems R;
  std::array<double, 4> acc{};
  for (int j = 0; j < g.nz; ++j) {
    std::array<double, 4> row{};
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t n = g.at(i, j);
      const double J = geo.J(i);
      const double rho = s.rho_hat[n], u0 = s.u_hat[0][n], u1 = s.u_hat[1][n];
      const double U0 = T.U[0][n], U1 = T.U[1][n];
      const double d0 = u0 - U0, d1 = u1 - U1;
      const double m0 = T.U_t[0][n] + u0 * GU.g00[n] + u1 * GU.g01[n];
      const double m1 = T.U_t[1][n] + u0 * GU.g10[n] + u1 * GU.g11[n];
      row[0] += J * rho * (d0 * m0 + d1 * m1);
      const double divU = GU.g00[n] + GU.g11[n];
      row[1] += J * (pressure_delta(rho, p) - pressure_delta(T.r[n], p)) * divU;
      // S(grad U) : (grad u - grad U)
      const double e00 = Gu.g00[n] - GU.g00[n], e01 = Gu.g01[n] - GU.g01[n];
      const double e10 = Gu.g10[n] - GU.g10[n], e11 = Gu.g11[n] - GU.g11[n];
      const double S00 = 2.0 * p.mu * GU.g00[n] + p.lambda * divU, S11 = 2.0 * p.mu * GU.g11[n] + p.lambda * divU;
      const double S01 = p.mu * (GU.g01[n] + GU.g10[n]);
      row[2] += J * (S00 * e00 + S01 * (e01 + e10) + S11 * e11);
      const double r = T.r[n];
      const double adv_r = T.r_t[n] + U0 * rx[n] + U1 * rz[n];
      const double flux_r = d0 * rx[n] + d1 * rz[n];
      double tr = 0.0;
      for (const auto& [c, k] : terms) tr += c * k * std::pow(r, k - 2.0) * ((rho - r) * adv_r + rho * flux_r);
      row[3] += J * tr;
    }
    for (int k = 0; k < 4; ++k) acc[k] += g.wz(j) * row[k];
  }
  const double hx = g.hx();
  R.advective() = -hx * acc[0];
  R.pressure_divergence() = -ie2 * hx * acc[1];
  R.viscous_cross() = -p.nu * hx * acc[2];
  R.transport() = -ie2 * hx * acc[3];

  const int top = g.nz - 1;
  double bnd = 0.0, top_cross = 0.0, bottom_cross = 0.0;
  const double pbar = pressure_delta(p.rho_bar, p);
  for (int i = 0; i < g.nx; ++i) {
    const std::size_t n = g.at(i, top);
    const double sl = geo.slope()[i];
    const double d0 = s.u_hat[0][n] - T.U[0][n], d1 = s.u_hat[1][n] - T.U[1][n];
    bnd += (pressure_delta(T.r[n], p) - pbar) * (-sl * d0 + d1);
    // Tangential parts along (1, s), with the surface measure sqrt(1 + s^2) dx.
    const double a = T.U[0][n] + sl * (T.U[1][n] - T.W_t[i]);
    const double b = d0 + sl * (d1 - (s.w_t[i] - T.W_t[i]));
    top_cross += a * b / std::sqrt(1.0 + sl * sl);
    const std::size_t nb = g.at(i, 0);
    bottom_cross += T.U[0][nb] * (s.u_hat[0][nb] - T.U[0][nb]);
  }
  R.boundary_pressure() = ie2 * hx * bnd;
  R.top_slip_cross() = -p.alpha * p.nu * hx * top_cross;
  R.bottom_slip_cross() = -p.alpha0 * p.nu * hx * bottom_cross;

  const PlateField lapWt = plate_laplacian(T.W_t, g);
  const PlateField bilW = plate_bilaplacian(T.W, g);
  double pr = 0.0;
  for (int i = 0; i < g.nx; ++i) pr += (s.w_t[i] - T.W_t[i]) * (T.W_tt[i] + bilW[i] - p.nu_s * lapWt[i]);
  R.plate_residual() = -hx * pr;
  return R;
}

// Rates of the dissipation differences on the left of the relative energy inequality (penalty excluded).
inline DissipationRates relative_dissipation_rates(const State& s, const TestTriple& T, const Params& p) {
  const Grid& g = s.grid();
  const SlabGeometry geo = state_geometry(s, p);
  DissipationRates r;
  if (p.nu > 0.0) {
    std::vector<double> e0(g.size()), e1(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
      e0[n] = s.u_hat[0][n] - T.U[0][n];
      e1[n] = s.u_hat[1][n] - T.U[1][n];
    }
    const VelocityGradient G = velocity_gradient(geo, e0, e1);
    double v = 0.0;
    for (int j = 0; j < g.nz; ++j) {
      double row = 0.0;
      for (int i = 0; i < g.nx; ++i) row += geo.J(i) * viscous_density(G, g.at(i, j), p);
      v += g.wz(j) * row;
    }
    r.viscous = p.nu * g.hx() * v;
    const int top = g.nz - 1;
    for (int i = 0; i < g.nx; ++i) {
      const double sl = geo.slope()[i];
      const double len2 = 1.0 + sl * sl;
      const double v0 = e0[g.at(i, top)], v1 = e1[g.at(i, top)] - (s.w_t[i] - T.W_t[i]);
      const double vt = (v0 + sl * v1) / std::sqrt(len2);
      r.top_slip += p.alpha * p.nu * g.hx() * std::sqrt(len2) * vt * vt;
      const double b = e0[g.at(i, 0)];
      r.bottom_slip += p.alpha0 * p.nu * g.hx() * b * b;
    }
  }
  PlateField dv(g.nx);
  for (int i = 0; i < g.nx; ++i) dv[i] = s.w_t[i] - T.W_t[i];
  r.plate = plate_damping_rate(dv, g, p);
  return r;
}

struct RelEnergyReport {
  double t = 0.0;
  double e_rel = 0.0;
  // Instantaneous remainder and its running time integral, per item.
  RemainderItems rate;
  RemainderItems integral;
  DissipationRates dissipated;
  // (E(0) + int R - E(t) - D(t)) / (E(0) + int |R|); negative values violate the inequality.
  double slack = 0.0;
};

using TripleProvider = std::function<TestTriple(const State&)>;

// Accumulates the relative energy inequality along a run; usable as a StepObserver.
class RelativeEnergyMonitor {
 public:
  RelativeEnergyMonitor(TripleProvider provider, const Params& p) : provider_(std::move(provider)), p_(p) {}

  void begin(const State& s) {
    rows_.clear();
    integral_ = {};
    abs_integral_ = 0.0;
    D_ = {};
    const TestTriple T = provider_(s);
    prev_R_ = remainder_R(s, T, p_);
    prev_D_ = relative_dissipation_rates(s, T, p_);
    e0_ = relative_energy(s, T, p_);
    worst_defect_ = admissibility_check(T, s.w, 0.0).max_defect;
    RelEnergyReport row;
    row.t = s.t;
    row.e_rel = e0_;
    row.rate = prev_R_;
    rows_.push_back(row);
  }

  void observe(const State& s, double dt, double penalty_rate) {
    const TestTriple T = provider_(s);
    const RemainderItems R = remainder_R(s, T, p_);
    const DissipationRates Dn = relative_dissipation_rates(s, T, p_);
    worst_defect_ = std::max(worst_defect_, admissibility_check(T, s.w, 0.0).max_defect);
    for (int k = 0; k < RemainderItems::count; ++k) {
      const double inc = 0.5 * dt * (prev_R_.v[k] + R.v[k]);
      integral_.v[k] += inc;
    }
    abs_integral_ += 0.5 * dt * (std::abs(prev_R_.total()) + std::abs(R.total()));
    D_.viscous += 0.5 * dt * (prev_D_.viscous + Dn.viscous);
    D_.top_slip += 0.5 * dt * (prev_D_.top_slip + Dn.top_slip);
    D_.bottom_slip += 0.5 * dt * (prev_D_.bottom_slip + Dn.bottom_slip);
    D_.plate += 0.5 * dt * (prev_D_.plate + Dn.plate);
    D_.penalty += dt * penalty_rate;
    prev_R_ = R;
    prev_D_ = Dn;
    RelEnergyReport row;
    row.t = s.t;
    row.e_rel = relative_energy(s, T, p_);
    row.rate = R;
    row.integral = integral_;
    row.dissipated = D_;
    const double scale = e0_ + abs_integral_;
    row.slack = (e0_ + integral_.total() - row.e_rel - D_.total()) / (scale > 0.0 ? scale : 1.0);
    rows_.push_back(row);
  }

  template <class Info, class Rates>
  void operator()(const State& s, const Info& info, const Rates&) {
    observe(s, info.dt, info.penalty_rate);
  }

  const std::vector<RelEnergyReport>& rows() const { return rows_; }
  double initial_energy() const { return e0_; }
  double min_slack() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < rows_.size(); ++k) m = std::min(m, rows_[k].slack);
    return rows_.size() > 1 ? m : 0.0;
  }
  double max_admissibility_defect() const { return worst_defect_; }

 private:
  TripleProvider provider_;
  Params p_;
  std::vector<RelEnergyReport> rows_;
  RemainderItems prev_R_, integral_;
  DissipationRates prev_D_, D_;
  double e0_ = 0.0, abs_integral_ = 0.0, worst_defect_ = 0.0;
};

// Smooth analytic comparison triple: r and a base velocity given in physical coordinates, plus a
// top-wall correction theta(z) c n^w that makes U . n^w = W_t exactly on the current wall.
class RandomTriple {
 public:
  RandomTriple(std::uint64_t seed, const Params& p, double lx = 2.0 * std::numbers::pi) : rho_bar_(p.rho_bar) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> m(1, 3);
    const double k0 = 2.0 * std::numbers::pi / lx;
    ra_ = 0.1 * u(gen);
    rk_ = k0 * m(gen);
    rphi_ = std::numbers::pi * u(gen);
    rw_ = u(gen);
    a0_ = 0.2 * u(gen);
    a1_ = 0.2 * u(gen);
    k_ = k0 * m(gen);
    phi_ = std::numbers::pi * u(gen);
    om_ = u(gen);
    wa_ = 0.02 * u(gen);
    wk_ = k0 * m(gen);
    wphi_ = std::numbers::pi * u(gen);
    wom_ = 1.0 + std::abs(u(gen));
  }

  TestTriple operator()(const State& s) const {
    const Grid& g = s.grid();
    const double t = s.t;
    TestTriple T(g, rho_bar_);
    const PlateField sl = plate_slope(s.w, g), sl_t = plate_slope(s.w_t, g);
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i);
      const double c = std::cos(wk_ * x + wphi_);
      T.W[i] = wa_ * c * std::cos(wom_ * t);
      T.W_t[i] = -wa_ * wom_ * c * std::sin(wom_ * t);
      T.W_tt[i] = -wa_ * wom_ * wom_ * c * std::cos(wom_ * t);
      const double J = 1.0 + s.w[i];
      const Base bt = base(x, J, t);
      const double n0 = -sl[i], n1 = 1.0, nn = n0 * n0 + n1 * n1;
      const double dn0 = -sl_t[i];
      const double un = bt.u0 * n0 + bt.u1 * n1;
      const double corr = (T.W_t[i] - un) / nn;
      // d/dt of the base velocity along the moving wall.
      const double bt0 = bt.u0_t + bt.u0_y * s.w_t[i], bt1 = bt.u1_t + bt.u1_y * s.w_t[i];
      const double corr_t = (T.W_tt[i] - (bt0 * n0 + bt1 * n1) - bt.u0 * dn0) / nn - corr * 2.0 * n0 * dn0 / nn;
      for (int j = 0; j < g.nz; ++j) {
        const std::size_t n = g.at(i, j);
        const double zh = g.z(j), y = zh * J;
        const Base b = base(x, y, t);
        const double th = zh * zh * (3.0 - 2.0 * zh), dth = 6.0 * zh * (1.0 - zh);
        const double th_t = dth * (-zh * s.w_t[i] / J);
        T.r[n] = b.r;
        T.r_t[n] = b.r_t;
        T.U[0][n] = b.u0 + th * corr * n0;
        T.U[1][n] = b.u1 + th * corr * n1;
        T.U_t[0][n] = b.u0_t + th_t * corr * n0 + th * (corr_t * n0 + corr * dn0);
        T.U_t[1][n] = b.u1_t + th_t * corr * n1 + th * corr_t * n1;
      }
    }
    return T;
  }

 private:
  struct Base {
    double r, r_t, u0, u1, u0_t, u1_t, u0_y, u1_y;
  };
  // r = rho_bar (1 + ra cos(rk x + rphi - rw t) cos(pi y / 2)); the base velocity vanishes normally at y = 0.
  Base base(double x, double y, double t) const {
    Base b;
    const double cr = std::cos(rk_ * x + rphi_ - rw_ * t), sr = std::sin(rk_ * x + rphi_ - rw_ * t);
    const double cy = std::cos(0.5 * std::numbers::pi * y);
    b.r = rho_bar_ * (1.0 + ra_ * cr * cy);
    b.r_t = rho_bar_ * ra_ * rw_ * sr * cy;
    const double ph = k_ * x + phi_;
    const double ct = std::cos(om_ * t), st = std::sin(om_ * t);
    const double sy = std::sin(std::numbers::pi * y), cyy = std::cos(std::numbers::pi * y);
    b.u0 = a0_ * std::sin(ph) * cyy * ct;
    b.u1 = a1_ * std::cos(ph) * sy * ct;
    b.u0_t = -a0_ * std::sin(ph) * cyy * om_ * st;
    b.u1_t = -a1_ * std::cos(ph) * sy * om_ * st;
    b.u0_y = -a0_ * std::sin(ph) * std::numbers::pi * sy * ct;
    b.u1_y = a1_ * std::cos(ph) * std::numbers::pi * cyy * ct;
    return b;
  }

  double rho_bar_;
  double ra_, rk_, rphi_, rw_, a0_, a1_, k_, phi_, om_, wa_, wk_, wphi_, wom_;
};

}  // namespace fsi_slab
