#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "../core/errors.hpp"

namespace fsi_slab {

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1], found by Newton iteration on P_n.
inline const std::vector<std::pair<double, double>>& gauss_legendre() {
  static const std::vector<std::pair<double, double>> table = [] {
    const int n = 16;
    std::vector<std::pair<double, double>> t(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      t[n - 1 - i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return t;
  }();
  return table;
}

template <class F>
double gauss_integrate(F&& f, double a, double b, int panels) {
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (auto [x, wt] : gauss_legendre()) s += wt * f(c + 0.5 * h * x);
  }
  return 0.5 * h * s;
}

}  // namespace detail

// Piecewise-linear plateau f mollified by a compactly supported bump of half-width alpha.
// f vanishes left of m2 + alpha, rises to 1 at m1 - alpha, stays 1 up to M1 + alpha and
// returns to 0 at M2 - alpha, so the mollified profile is 1 on [m1, M1] and 0 outside (m2, M2).
class CutoffProfile {
 public:
  CutoffProfile(double m2, double m1, double M1, double M2, double alpha)
      : m2_(m2), m1_(m1), M1_(M1), M2_(M2), alpha_(alpha) {
    norm_ = 1.0;
    norm_ = 1.0 / detail::gauss_integrate([this](double t) { return bump(t); }, -alpha_, alpha_, 64);
  }

  double m2() const { return m2_; }
  double m1() const { return m1_; }
  double M1() const { return M1_; }
  double M2() const { return M2_; }
  double alpha() const { return alpha_; }

  double mollifier(double t) const { return norm_ * bump(t); }

  double mollifier_mass() const {
    return detail::gauss_integrate([this](double t) { return mollifier(t); }, -alpha_, alpha_, 64);
  }

  double linear(double s) const {
    const double a = m2_ + alpha_, b = m1_ - alpha_, c = M1_ + alpha_, d = M2_ - alpha_;
    if (s <= a || s >= d) return 0.0;
    if (s < b) return (s - a) / (b - a);
    if (s <= c) return 1.0;
    return (d - s) / (d - c);
  }

  double operator()(double s) const {
    if (s <= m2_ || s >= M2_) return 0.0;
    if (s >= m1_ && s <= M1_) return 1.0;
    // Split the convolution integral at the kinks of the linear profile.
    std::vector<double> cuts = {-alpha_, alpha_};
    for (double k : {m2_ + alpha_, m1_ - alpha_, M1_ + alpha_, M2_ - alpha_}) {
      const double t = s - k;
      if (t > -alpha_ && t < alpha_) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    double v = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
      v += detail::gauss_integrate([&](double t) { return linear(s - t) * mollifier(t); }, cuts[p], cuts[p + 1], 16);
    return std::clamp(v, 0.0, 1.0);
  }

 private:
  double bump(double t) const {
    const double r = t / alpha_;
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
  }

  double m2_, m1_, M1_, M2_, alpha_;
  double norm_ = 1.0;
};

// Ordering m'' < m' < m < 0 < M < M' < M'' with 0 < alpha < min(m' - m'', M'' - M') / 2.
inline CutoffProfile build_cutoff(double m2, double m1, double m, double M, double M1, double M2, double alpha) {
  const bool ordered = m2 < m1 && m1 < m && m < 0.0 && 0.0 < M && M < M1 && M1 < M2;
  require(ordered, ErrorKind::parameter, "cutoff breakpoints must satisfy m'' < m' < m < 0 < M < M' < M''");
  require(alpha > 0.0 && alpha < 0.5 * std::min(m1 - m2, M2 - M1), ErrorKind::parameter,
          "mollifier width must lie in (0, min(m' - m'', M'' - M') / 2)");
  return CutoffProfile(m2, m1, M1, M2, alpha);
}

inline CutoffProfile build_cutoff(double m2, double m1, double M1, double M2, double alpha) {
  return build_cutoff(m2, m1, 0.5 * m1, 0.5 * M1, M1, M2, alpha);
}

}  // namespace fsi_slab
