#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace halfheat {

using cplx = std::complex<double>;

/// Uniform periodic lattice carrying boundary data for the half space
/// R^{d-1} x (0,inf) x R: d-1 tangential axes of period box_x plus one time
/// axis of period box_t. Axis order is x_1,...,x_{d-1},t with t fastest
/// (row-major flat indexing). For d = 1 the tangential axes are absent.
struct Grid {
  int d = 1;
  double box_x = 0.0;  // tangential period L', 0 when d == 1
  double box_t = 0.0;
  int n_x = 1;         // samples per tangential axis, 1 when d == 1
  int n_t = 0;

  int rank() const { return d; }  // lattice axes: (d-1) tangential + time

  std::size_t size() const {
    std::size_t n = std::size_t(n_t);
    for (int k = 0; k + 1 < d; ++k) n *= std::size_t(n_x);
    return n;
  }

  double volume() const {
    double v = box_t;
    for (int k = 0; k + 1 < d; ++k) v *= box_x;
    return v;
  }

  // uniform Riemann cell for lp sums
  double cell() const { return volume() / double(size()); }

  // slot i on an axis of n samples maps to the signed integer in [-n/2, n/2)
  static int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }

  double freq_x(int i) const {
    return 2.0 * M_PI * double(signed_index(i, n_x)) / box_x;
  }
  double freq_t(int i) const {
    return 2.0 * M_PI * double(signed_index(i, n_t)) / box_t;
  }

  bool same_shape(const Grid& o) const {
    return d == o.d && n_x == o.n_x && n_t == o.n_t && box_x == o.box_x &&
           box_t == o.box_t;
  }
};

/// Throws std::invalid_argument unless d in {1,2,3}, boxes are positive and
/// sample counts are powers of two >= 4 (n_x/box_x must be 1/0 when d == 1).
Grid make_grid(int d, double box_x, double box_t, int n_x, int n_t);

struct SampledField {
  Grid grid;
  std::vector<cplx> v;
};

struct SpectralField {
  Grid grid;
  std::vector<cplx> c;
};

SampledField zeros_sampled(const Grid& g);
SpectralField zeros_spectral(const Grid& g);

/// Discrete surrogate of the continuous transform: coefficient at frequency
/// (xi',tau) is (volume/size) * sum_x u(x) e^{-i(xi'.x' + tau t)}, so the
/// (0,0) coefficient equals mean(u) * volume.
SpectralField forward(const SampledField& u);

/// Inverse of forward: u(x) = (1/volume) * sum_k c_k e^{+i(xi'.x' + tau t)}.
SampledField inverse(const SpectralField& f);

/// Riemann sum of the L^p(box) norm with uniform weights volume/size.
/// p = infinity returns the max sample modulus. Throws for p < 1.
double lp_norm(const SampledField& u, double p);

/// One site of the frequency lattice.
struct Mode {
  std::size_t flat = 0;
  std::array<double, 2> xi{0.0, 0.0};  // tangential components, d-1 used
  double abs_xi = 0.0;
  double tau = 0.0;
  bool origin() const { return abs_xi == 0.0 && tau == 0.0; }
};

/// Flat index of the frequency paired with `flat` under complex conjugation
/// of the physical field (negation of every lattice index mod n).
std::size_t conjugate_index(const Grid& g, std::size_t flat);

/// Visits every frequency-lattice site in flat order; f(const Mode&).
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  Mode m;
  const int nsp = g.d - 1;
  std::array<int, 2> ix{0, 0};
  std::size_t flat = 0;
  for (;;) {
    double a2 = 0.0;
    for (int k = 0; k < nsp; ++k) {
      m.xi[k] = g.freq_x(ix[k]);
      a2 += m.xi[k] * m.xi[k];
    }
    m.abs_xi = std::sqrt(a2);
    for (int it = 0; it < g.n_t; ++it) {
      m.tau = g.freq_t(it);
      m.flat = flat++;
      f(static_cast<const Mode&>(m));
    }
    int k = nsp - 1;
    for (; k >= 0; --k) {
      if (++ix[k] < g.n_x) break;
      ix[k] = 0;
    }
    if (k < 0) break;
  }
}

}  // namespace halfheat
