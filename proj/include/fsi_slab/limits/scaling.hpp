#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "../core/errors.hpp"

namespace fsi_slab {

struct CharacteristicValues {
  double U_f = 1.0, p_f = 1.0, rho_f = 1.0, L = 1.0, nu_f = 1.0;
  double rho_s = 1.0, h = 1.0, E = 1.0, W = 1.0, T_s = 1.0, N_s = 1.0;
};

struct Nondimensional {
  double eps = 0.0;
  double nu = 0.0;
  // Inertia, stiffness and damping ratios of the plate relative to rho_f U_f^2.
  std::array<double, 3> structural{};
  std::vector<std::string> warnings;
};

inline Nondimensional nondimensionalize(const CharacteristicValues& cv) {
  for (double v : {cv.U_f, cv.p_f, cv.rho_f, cv.L, cv.nu_f, cv.rho_s, cv.h, cv.E, cv.W, cv.T_s, cv.N_s})
    require(v > 0.0 && std::isfinite(v), ErrorKind::parameter, "characteristic values must be positive");
  Nondimensional out;
  out.eps = cv.U_f / std::sqrt(cv.p_f / cv.rho_f);
  out.nu = cv.nu_f / (cv.rho_f * cv.U_f * cv.L);
  const double q = cv.rho_f * cv.U_f * cv.U_f;
  out.structural[0] = cv.rho_s * cv.h * cv.W / (cv.T_s * cv.T_s) / q;
  out.structural[1] = cv.h * cv.h * cv.h * cv.W * cv.E / std::pow(cv.L, 4) / q;
  out.structural[2] = cv.W * cv.N_s / (cv.L * cv.L * cv.T_s) / q;
  static const char* names[3] = {"plate inertia", "plate stiffness", "plate damping"};
  for (int k = 0; k < 3; ++k)
    if (std::abs(out.structural[k] - 1.0) > 0.1)
      out.warnings.push_back(std::string(names[k]) + " ratio is " + std::to_string(out.structural[k]) +
                             ", the scaled model assumes 1");
  return out;
}

}  // namespace fsi_slab
