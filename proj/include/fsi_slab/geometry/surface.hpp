#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "cutoff.hpp"
#include "flat_map.hpp"

namespace fsi_slab {

// Analytically packaged closed surface: projection, signed distance (negative inside) and outward normal.
class SurfacePack {
 public:
  virtual ~SurfacePack() = default;
  // Closest surface point; throws a domain error where it is not unique.
  virtual Vec3 project(const Vec3& x) const = 0;
  virtual double signed_distance(const Vec3& x) const = 0;
  virtual Vec3 normal(const Vec3& surface_point) const = 0;
  // Tubular neighbourhood (a, b) on which the projection is smooth.
  virtual double inner() const = 0;
  virtual double outer() const = 0;
};

namespace detail {
inline double norm3(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }
}  // namespace detail

class Sphere final : public SurfacePack {
 public:
  explicit Sphere(double radius) : r_(radius) {}
  Vec3 project(const Vec3& x) const override {
    const double n = detail::norm3(x);
    require(n > 1e-12 * r_, ErrorKind::domain, "projection onto the sphere is undefined at its centre");
    return {r_ * x[0] / n, r_ * x[1] / n, r_ * x[2] / n};
  }
  double signed_distance(const Vec3& x) const override { return detail::norm3(x) - r_; }
  Vec3 normal(const Vec3& p) const override {
    const double n = detail::norm3(p);
    return {p[0] / n, p[1] / n, p[2] / n};
  }
  double inner() const override { return -r_; }
  double outer() const override { return std::numeric_limits<double>::infinity(); }

 private:
  double r_;
};

// Torus of revolution about the z axis with major radius R and tube radius r.
class Torus final : public SurfacePack {
 public:
  Torus(double major, double minor) : R_(major), r_(minor) {}
  Vec3 project(const Vec3& x) const override {
    const Vec3 c = core(x);
    const Vec3 d{x[0] - c[0], x[1] - c[1], x[2] - c[2]};
    const double n = detail::norm3(d);
    require(n > 1e-12 * r_, ErrorKind::domain, "projection onto the torus is undefined on its core circle");
    return {c[0] + r_ * d[0] / n, c[1] + r_ * d[1] / n, c[2] + r_ * d[2] / n};
  }
  double signed_distance(const Vec3& x) const override {
    const Vec3 c = core(x);
    return detail::norm3({x[0] - c[0], x[1] - c[1], x[2] - c[2]}) - r_;
  }
  Vec3 normal(const Vec3& p) const override {
    const Vec3 c = core(p);
    Vec3 d{p[0] - c[0], p[1] - c[1], p[2] - c[2]};
    const double n = detail::norm3(d);
    return {d[0] / n, d[1] / n, d[2] / n};
  }
  double inner() const override { return -r_; }
  double outer() const override { return R_ - r_; }

 private:
  Vec3 core(const Vec3& x) const {
    const double rho = std::hypot(x[0], x[1]);
    require(rho > 1e-12 * R_, ErrorKind::domain, "projection onto the torus is undefined on its axis");
    return {R_ * x[0] / rho, R_ * x[1] / rho, 0.0};
  }
  double R_, r_;
};

// Displacement given as a function of the surface point it is attached to.
using SurfaceDisplacement = std::function<double(const Vec3&)>;

namespace detail {

inline Vec3 general_shift(const SurfacePack& s, const CutoffProfile& f, const SurfaceDisplacement& w, const Vec3& X,
                          double sign) {
  for (double c : X) require(std::isfinite(c), ErrorKind::domain, "point is not finite");
  const double d = s.signed_distance(X);
  if (d <= f.m2() || d >= f.M2()) return X;
  const Vec3 p = s.project(X);
  const double wp = w(p);
  require(wp > s.inner() && wp < s.outer(), ErrorKind::band, "displacement leaves the tubular neighbourhood");
  const double fg = f(d);
  const Vec3 n = s.normal(p);
  return {X[0] + sign * fg * wp * n[0], X[1] + sign * fg * wp * n[1], X[2] + sign * fg * wp * n[2]};
}

}  // namespace detail

// X + f(d(X)) w(pi(X)) n(pi(X)).
inline Vec3 general_flow_map(const SurfacePack& s, const CutoffProfile& f, const SurfaceDisplacement& w, const Vec3& X) {
  return detail::general_shift(s, f, w, X, 1.0);
}

// x - f(d(x)) w(pi(x)) n(pi(x)); exact where the cutoff is flat.
inline Vec3 general_flow_map_inverse(const SurfacePack& s, const CutoffProfile& f, const SurfaceDisplacement& w,
                                     const Vec3& x) {
  return detail::general_shift(s, f, w, x, -1.0);
}

}  // namespace fsi_slab
