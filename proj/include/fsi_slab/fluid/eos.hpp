#pragma once

#include <cmath>

#include "../core/params.hpp"

namespace fsi_slab {

inline double pressure(double rho, const Params& p) {
  if (rho < 0.0) throw Error(ErrorKind::positivity, "negative density passed to the pressure law");
  return std::pow(rho, p.gamma);
}

inline double pressure_delta(double rho, const Params& p) {
  if (rho < 0.0) throw Error(ErrorKind::positivity, "negative density passed to the pressure law");
  return std::pow(rho, p.gamma) + (p.delta > 0.0 ? p.delta * std::pow(rho, p.beta) : 0.0);
}

inline double pressure_delta_slope(double rho, const Params& p) {
  double s = p.gamma * std::pow(rho, p.gamma - 1.0);
  if (p.delta > 0.0) s += p.delta * p.beta * std::pow(rho, p.beta - 1.0);
  return s;
}

// Scaled pressure fluctuation (p_delta(rho) - p_delta(rho_bar)) / eps^2.
inline double pressure_fluctuation(double rho, const Params& p) {
  return (pressure_delta(rho, p) - pressure_delta(p.rho_bar, p)) / (p.eps * p.eps);
}

// (p(rho) - p'(r)(rho - r) - p(r)) / (gamma - 1) for p = rho^gamma.
inline double bregman_gamma(double rho, double r, double gamma) {
  const double pr = std::pow(r, gamma);
  return (std::pow(rho, gamma) - gamma * pr / r * (rho - r) - pr) / (gamma - 1.0);
}

// Pressure potential density relative to r, including the artificial part and the 1/eps^2 weight.
inline double pressure_potential(double rho, double r, const Params& p) {
  double e = bregman_gamma(rho, r, p.gamma);
  if (p.delta > 0.0) e += p.delta * bregman_gamma(rho, r, p.beta);
  return e / (p.eps * p.eps);
}

// Sound speed sqrt(p_delta'(rho)) / eps.
inline double sound_speed(double rho, const Params& p) { return std::sqrt(pressure_delta_slope(rho, p)) / p.eps; }

// S(grad u) = mu (grad u + grad u^T) + lambda div u I, for a row-major d x d gradient (G[a][b] = d u_a / d x_b).
template <class M>
M stress_tensor(const M& G, const Params& p, int dim) {
  M S{};
  double divu = 0.0;
  for (int a = 0; a < dim; ++a) divu += G[a][a];
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) S[a][b] = p.mu * (G[a][b] + G[b][a]) + (a == b ? p.lambda * divu : 0.0);
  return S;
}

template <class M>
double double_dot(const M& A, const M& B, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) s += A[a][b] * B[a][b];
  return s;
}

}  // namespace fsi_slab
