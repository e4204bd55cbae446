#include "halfheat/multiplier.hpp"

#include <cmath>
#include <stdexcept>

#include "halfheat/lp_bank.hpp"

namespace halfheat {

namespace {

cplx ipow(cplx z, int n) {
  cplx acc(1.0, 0.0);
  for (int k = 0; k < n; ++k) acc *= z;
  return acc;
}

// one-sided smooth step: 0 for t <= 0, 1 for t >= 1
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace

cplx root(double abs_xi, double tau) {
  return std::sqrt(cplx(abs_xi * abs_xi, tau));
}

cplx poisson_symbol(double x_d, double abs_xi, double tau) {
  if (abs_xi == 0.0 && tau == 0.0) return cplx(1.0, 0.0);
  return std::exp(-x_d * root(abs_xi, tau));
}

cplx neumann_symbol(double x_d, double abs_xi, double tau) {
  if (abs_xi == 0.0 && tau == 0.0)
    throw std::domain_error("neumann_symbol: undefined at the zero frequency");
  const cplx z = root(abs_xi, tau);
  return -std::exp(-x_d * z) / z;
}

cplx deriv_symbol(std::span<const int> alpha, int beta,
                  std::span<const double> xi, double abs_xi, double tau) {
  const int d = int(alpha.size());
  cplx acc(1.0, 0.0);
  for (int k = 0; k + 1 < d; ++k)
    acc *= ipow(cplx(0.0, xi[std::size_t(k)]), alpha[std::size_t(k)]);
  if (alpha[std::size_t(d - 1)] > 0)
    acc *= ipow(-root(abs_xi, tau), alpha[std::size_t(d - 1)]);
  return acc * ipow(cplx(0.0, tau), beta);
}

cplx frac_power(double s, double abs_xi, double tau) {
  if (abs_xi == 0.0 && tau == 0.0) {
    if (s > 0.0) return cplx(0.0, 0.0);
    if (s == 0.0) return cplx(1.0, 0.0);
    throw std::domain_error("frac_power: negative power at the zero frequency");
  }
  return std::pow(cplx(abs_xi * abs_xi, tau), 0.5 * s);
}

double annulus_cutoff(double r) {
  if (!(r > 0.0)) return 0.0;
  const double u = std::log2(r);
  const double lg3 = std::log2(3.0);
  // rises over log2 r in (-lg3, -1), falls over (1, lg3)
  const double rise = smooth_step((u + lg3) / (lg3 - 1.0));
  const double fall = smooth_step((lg3 - u) / (lg3 - 1.0));
  return rise * fall;
}

double kernel_decay_l1(const Grid& g, std::span<const int> alpha, int beta,
                       double x_d) {
  if (int(alpha.size()) != g.d)
    throw std::invalid_argument("kernel_decay_l1: alpha must have d entries");
  // the window lives on 1/3 < |xi'| + |tau|^{1/2} < 3; require both coverage
  // of the outer edge and at least 8 lattice steps across the annulus
  const double dtau = 2.0 * M_PI / g.box_t;
  const double tau_max = dtau * double(g.n_t / 2);
  if (tau_max < 9.0 || (9.0 - 1.0 / 9.0) / dtau < 8.0)
    throw std::invalid_argument("kernel_decay_l1: grid too coarse to resolve "
                                "the annulus window (time axis)");
  if (g.d > 1) {
    const double dxi = 2.0 * M_PI / g.box_x;
    const double xi_max = dxi * double(g.n_x / 2);
    if (xi_max < 3.0 || (3.0 - 1.0 / 3.0) / dxi < 8.0)
      throw std::invalid_argument("kernel_decay_l1: grid too coarse to "
                                  "resolve the annulus window (x axis)");
  }
  SpectralField f = zeros_spectral(g);
  for_each_mode(g, [&](const Mode& m) {
    const double w = annulus_cutoff(anisotropic_radius(m.abs_xi, m.tau));
    if (w == 0.0) return;
    const cplx p = deriv_symbol(alpha, beta, m.xi, m.abs_xi, m.tau);
    f.c[m.flat] = w * p * std::exp(-x_d * root(m.abs_xi, m.tau));
  });
  return lp_norm(inverse(f), 1.0);
}

std::vector<ParabolicIndex> parabolic_indices(int d, int order) {
  std::vector<ParabolicIndex> out;
  std::vector<int> a(std::size_t(d), 0);
  const auto emit = [&](auto&& self, int pos, int rem, int beta) -> void {
    if (pos == d - 1) {
      a[std::size_t(pos)] = rem;
      out.push_back(ParabolicIndex{a, beta});
      return;
    }
    for (int v = rem; v >= 0; --v) {
      a[std::size_t(pos)] = v;
      self(self, pos + 1, rem - v, beta);
    }
  };
  for (int beta = 0; 2 * beta <= order; ++beta)
    emit(emit, 0, order - 2 * beta, beta);
  return out;
}

}  // namespace halfheat
