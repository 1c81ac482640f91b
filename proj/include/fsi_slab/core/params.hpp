#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace fsi_slab {

// Physical and approximation constants of the rescaled system.
struct Params {
  double gamma = 2.0;
  double mu = 1.0;
  double lambda = 0.0;
  double nu = 0.1;
  double eps = 1.0;
  double nu_s = 0.1;
  double alpha = 1.0;
  double alpha0 = 1.0;
  double delta = 0.0;
  double beta = 4.0;
  // Penalty weight for the kinematic condition; +inf encodes strong coupling.
  double kappa = 1e-3;
  double rho_bar = 1.0;
  int dim = 2;
  double contact_floor = 0.05;

  bool strong() const { return std::isinf(kappa); }

  void validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorKind::parameter, m); };
    if (!(gamma > 1.0)) fail("gamma must exceed 1");
    if (!(mu > 0.0)) fail("mu must be positive");
    if (!(lambda + 2.0 * mu / 3.0 >= 0.0)) fail("lambda + 2 mu / 3 must be non-negative");
    if (!(nu >= 0.0)) fail("nu must be non-negative");
    if (!(eps > 0.0)) fail("eps must be positive");
    if (!(nu_s >= 0.0)) fail("nu_s must be non-negative");
    if (!(alpha >= 0.0) || !(alpha0 >= 0.0)) fail("friction coefficients must be non-negative");
    if (!(delta >= 0.0)) fail("delta must be non-negative");
    if (delta > 0.0 && !(beta >= 4.0)) fail("beta must be at least 4 when delta > 0");
    if (!(kappa > 0.0)) fail("kappa must be positive or strong");
    if (!(rho_bar > 0.0)) fail("rho_bar must be positive");
    if (dim != 2 && dim != 3) fail("dim must be 2 or 3");
    if (!(contact_floor > 0.0 && contact_floor < 1.0)) fail("contact_floor must lie in (0,1)");
  }

  static constexpr double strong_sentinel() { return std::numeric_limits<double>::infinity(); }
};

}  // namespace fsi_slab
