#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "field.hpp"

namespace fsi_slab {

// Half-spectrum of a real plate field; coefficients are normalized so that c(0) is the mean.
struct PlateModes {
  int nx = 0;
  int ny = 1;
  double lx = 2.0 * std::numbers::pi;
  double ly = 2.0 * std::numbers::pi;
  std::vector<std::complex<double>> c;

  int mx() const { return nx / 2 + 1; }
  std::size_t at(int m, int l) const { return static_cast<std::size_t>(l) * mx() + m; }
  double kx(int m) const { return 2.0 * std::numbers::pi * m / lx; }
  double ky(int l) const { return ny == 1 ? 0.0 : 2.0 * std::numbers::pi * (l <= ny / 2 ? l : l - ny) / ly; }
  double k2(int m, int l) const { return kx(m) * kx(m) + ky(l) * ky(l); }
  // Number of full-spectrum coefficients represented by half-spectrum entry m.
  double multiplicity(int m) const { return (m == 0 || (nx % 2 == 0 && m == nx / 2)) ? 1.0 : 2.0; }
};

namespace detail {

class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans p;
    return p;
  }

  fftw_plan forward(int nx, int ny) { return get(nx, ny, true); }
  fftw_plan backward(int nx, int ny) { return get(nx, ny, false); }

 private:
  fftw_plan get(int nx, int ny, bool fwd) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(nx, ny, fwd);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const std::size_t nr = static_cast<std::size_t>(nx) * ny;
    const std::size_t nc = static_cast<std::size_t>(nx / 2 + 1) * ny;
    std::vector<double> r(nr);
    std::vector<std::complex<double>> c(nc);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p;
    if (ny == 1)
      p = fwd ? fftw_plan_dft_r2c_1d(nx, r.data(), cp, flags) : fftw_plan_dft_c2r_1d(nx, cp, r.data(), flags);
    else
      p = fwd ? fftw_plan_dft_r2c_2d(ny, nx, r.data(), cp, flags) : fftw_plan_dft_c2r_2d(ny, nx, cp, r.data(), flags);
    plans_.emplace(key, p);
    return p;
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

}  // namespace detail

inline PlateModes plate_fourier(const PlateField& w, const Grid& g) {
  require(w.size() == g.plate_size(), ErrorKind::structural, "plate sample count does not match grid");
  PlateModes m{g.nx, g.ny, g.lx, g.ly, {}};
  m.c.resize(static_cast<std::size_t>(m.mx()) * g.ny);
  std::vector<double> in(w);
  fftw_execute_dft_r2c(detail::FftPlans::instance().forward(g.nx, g.ny), in.data(),
                       reinterpret_cast<fftw_complex*>(m.c.data()));
  const double scale = 1.0 / static_cast<double>(g.plate_size());
  for (auto& a : m.c) a *= scale;
  return m;
}

inline PlateField plate_inverse_fourier(const PlateModes& m) {
  std::vector<std::complex<double>> in(m.c);
  PlateField out(static_cast<std::size_t>(m.nx) * m.ny);
  fftw_execute_dft_c2r(detail::FftPlans::instance().backward(m.nx, m.ny), reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
  return out;
}

// Applies a real multiplier depending on |k|^2 to every mode.
template <class F>
PlateModes apply_symbol(PlateModes m, F&& symbol) {
  for (int l = 0; l < m.ny; ++l)
    for (int mm = 0; mm < m.mx(); ++mm) m.c[m.at(mm, l)] *= symbol(m.k2(mm, l));
  return m;
}

inline PlateField plate_laplacian(const PlateField& w, const Grid& g) {
  return plate_inverse_fourier(apply_symbol(plate_fourier(w, g), [](double k2) { return -k2; }));
}

inline PlateField plate_bilaplacian(const PlateField& w, const Grid& g) {
  return plate_inverse_fourier(apply_symbol(plate_fourier(w, g), [](double k2) { return k2 * k2; }));
}

// Integral over the torus of sum_k symbol(|k|^2)|c_k|^2, by Parseval.
template <class F>
double spectral_quadratic(const PlateModes& m, F&& symbol) {
  double s = 0.0;
  for (int l = 0; l < m.ny; ++l)
    for (int mm = 0; mm < m.mx(); ++mm) s += m.multiplicity(mm) * symbol(m.k2(mm, l)) * std::norm(m.c[m.at(mm, l)]);
  const double area = m.ny == 1 ? m.lx : m.lx * m.ly;
  return area * s;
}

}  // namespace fsi_slab
