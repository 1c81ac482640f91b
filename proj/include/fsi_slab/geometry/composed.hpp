#pragma once

#include <cmath>

#include "flat_map.hpp"

namespace fsi_slab {

using Mat2 = std::array<std::array<double, 2>, 2>;

inline Mat2 inverse2(const Mat2& F) {
  const double det = F[0][0] * F[1][1] - F[0][1] * F[1][0];
  return {{{F[1][1] / det, -F[0][1] / det}, {-F[1][0] / det, F[0][0] / det}}};
}

// Psi = Phi_eta o Phi_w^{-1} from the deformed source domain onto the deformed target domain,
// evaluated at the mapped nodes of the source grid.
class ComposedMap {
 public:
  ComposedMap(const Grid& g, PlateField w, PlateField eta, PlateField w_t, PlateField eta_t, double floor = 0.05)
      : src_(g, std::move(w), std::move(w_t), floor), tgt_(g, std::move(eta), std::move(eta_t), floor) {}

  const Grid& grid() const { return src_.grid(); }
  const DomainMap& source() const { return src_; }
  const DomainMap& target() const { return tgt_; }

  // Image of node (i, j) of the source domain.
  Vec3 psi(int i, int j) const { return {grid().x(i), tgt_.height(i, j), 0.0}; }

  // grad Phi_eta . (grad Phi_w)^{-1}, both with their discrete slopes.
  Mat2 gradient(int i, int j) const {
    const double zh = grid().z(j);
    const double Jw = src_.J(i), Je = tgt_.J(i);
    Mat2 F{};
    F[0][0] = 1.0;
    F[0][1] = 0.0;
    F[1][0] = zh * (tgt_.slope()[i] - Je * src_.slope()[i] / Jw);
    F[1][1] = Je / Jw;
    return F;
  }
  double J(int i, int j) const {
    const Mat2 F = gradient(i, j);
    return F[0][0] * F[1][1] - F[0][1] * F[1][0];
  }
  Mat2 A(int i, int j) const { return inverse2(gradient(i, j)); }
  // Time derivative of Psi at a fixed point of the source domain.
  Vec3 dt_psi(int i, int j) const {
    const double zh = grid().z(j);
    return {0.0, zh * (tgt_.w_t()[i] - tgt_.J(i) / src_.J(i) * src_.w_t()[i]), 0.0};
  }

 private:
  DomainMap src_;
  DomainMap tgt_;
};

inline ComposedMap compose_psi(const Grid& g, const PlateField& w, const PlateField& eta, const PlateField& w_t,
                               const PlateField& eta_t, double floor = 0.05) {
  return ComposedMap(g, w, eta, w_t, eta_t, floor);
}

// Bilinear sample of a reference-grid field at reference coordinates (xh, zh), periodic in x.
inline double sample_reference(const ScalarField& f, double xh, double zh) {
  const Grid& g = f.grid;
  const double tol = 1e-9;
  if (!(zh >= -tol && zh <= 1.0 + tol) || !std::isfinite(xh))
    throw Error(ErrorKind::interpolation, "point lies outside the sampled slab");
  zh = std::clamp(zh, 0.0, 1.0);
  double s = xh / g.hx();
  s -= std::floor(s / g.nx) * g.nx;
  int i0 = static_cast<int>(std::floor(s));
  double fx = s - i0;
  i0 %= g.nx;
  const int i1 = (i0 + 1) % g.nx;
  double t = zh / g.hz();
  int j0 = std::min(static_cast<int>(std::floor(t)), g.nz - 2);
  double fz = t - j0;
  return (1 - fx) * (1 - fz) * f(i0, j0) + fx * (1 - fz) * f(i1, j0) + (1 - fx) * fz * f(i0, j0 + 1) +
         fx * fz * f(i1, j0 + 1);
}

// J A applied to a vector.
inline std::array<double, 2> piola_apply(double J, const Mat2& A, std::array<double, 2> v) {
  return {J * (A[0][0] * v[0] + A[0][1] * v[1]), J * (A[1][0] * v[0] + A[1][1] * v[1])};
}

// v = J A (v_tilde o Psi). v_tilde holds samples on the mapped nodes of its own (possibly finer) grid.
inline VectorField piola_transform(const VectorField& v_tilde, const ComposedMap& map) {
  const Grid& g = map.grid();
  VectorField out(g);
  const bool same = v_tilde.grid == g;
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      std::array<double, 2> vt;
      if (same) {
        vt = {v_tilde[0](i, j), v_tilde[1](i, j)};
      } else {
        // In the flat case Phi_eta^{-1}(Psi(X)) has the reference coordinates of X.
        vt = {sample_reference(v_tilde[0], g.x(i), g.z(j)), sample_reference(v_tilde[1], g.x(i), g.z(j))};
      }
      const auto v = piola_apply(map.J(i, j), map.A(i, j), vt);
      out[0](i, j) = v[0];
      out[1](i, j) = v[1];
    }
  return out;
}

// Resamples a reference-grid scalar onto another grid (used for Pi_tilde o Psi).
inline ScalarField resample(const ScalarField& f, const Grid& g) {
  if (f.grid == g) return f;
  ScalarField out(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) out(i, j) = sample_reference(f, g.x(i), g.z(j));
  return out;
}

// max |Div(J A^T)| over the rows, computed on the source domain.
inline double piola_identity_residual(const ComposedMap& map) {
  const Grid& g = map.grid();
  ScalarField m00(g), m01(g), m10(g), m11(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double J = map.J(i, j);
      const Mat2 A = map.A(i, j);
      m00(i, j) = J * A[0][0];
      m01(i, j) = J * A[1][0];
      m10(i, j) = J * A[0][1];
      m11(i, j) = J * A[1][1];
    }
  const DomainMap& src = map.source();
  const VectorField g00 = physical_grad(m00, src), g01 = physical_grad(m01, src);
  const VectorField g10 = physical_grad(m10, src), g11 = physical_grad(m11, src);
  double r = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    r = std::max(r, std::abs(g00[0][n] + g01[1][n]));
    r = std::max(r, std::abs(g10[0][n] + g11[1][n]));
  }
  return r;
}

}  // namespace fsi_slab
