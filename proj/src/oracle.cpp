#include "halfheat/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace halfheat {

namespace {

constexpr int kTimeImagesDirichlet = 3;
constexpr int kTimeImagesNeumann = 6;
constexpr int kSpaceImages = 4;   // tangential images per side
constexpr int kFineFactor = 4;    // tangential quadrature refinement
constexpr int kPointsPerOctaveU = 48;
constexpr int kSamplesPerPeriod = 10;  // cap against the fastest time mode

// one tangential Gaussian factor summed over periodic images
double theta_axis(double w, double u, double box) {
  const double pre = 1.0 / std::sqrt(4.0 * M_PI * u);
  double acc = 0.0;
  for (int k = -kSpaceImages; k <= kSpaceImages; ++k) {
    const double s = w + double(k) * box;
    acc += pre * std::exp(-s * s / (4.0 * u));
  }
  return acc;
}

// normal-direction kernel factors
double k1_dirichlet(double x_d, double u) {
  return x_d / u / std::sqrt(4.0 * M_PI * u) * std::exp(-x_d * x_d / (4.0 * u));
}
double k1_neumann(double x_d, double u) {
  return -2.0 / std::sqrt(4.0 * M_PI * u) * std::exp(-x_d * x_d / (4.0 * u));
}

struct UGrid {
  std::vector<double> u, w;
};

// geometric spacing resolving the kernel head, capped so the fastest time
// oscillation keeps kSamplesPerPeriod nodes per period; trapezoid weights
UGrid log_ugrid(double u_min, double u_max, int ppo, double du_cap) {
  const double q = std::exp2(1.0 / double(ppo));
  UGrid g;
  g.u.push_back(u_min);
  while (g.u.back() < u_max) {
    const double u = g.u.back();
    g.u.push_back(std::min(u_max, std::min(u * q, u + du_cap)));
  }
  const std::size_t n = g.u.size();
  g.w.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * (g.u[i + 1] - g.u[i]);
    g.w[i] += h;
    g.w[i + 1] += h;
  }
  return g;
}

// derivatives of k(v) = coef * v^{-s} e^{-a/v} up to third order, for the
// integration-by-parts expansion of the oscillatory far tail
std::array<double, 4> kernel_jet(double coef, double s, double a, double v) {
  const double k = coef * std::pow(v, -s) * std::exp(-a / v);
  const double g1 = a / (v * v) - s / v;                    // (log k)'
  const double g2 = -2.0 * a / (v * v * v) + s / (v * v);   // (log k)''
  const double g3 = 6.0 * a / (v * v * v * v) - 2.0 * s / (v * v * v);
  return {k, k * g1, k * (g1 * g1 + g2), k * (g1 * g1 * g1 + 3.0 * g1 * g2 + g3)};
}

// int_T^inf k(v) e^{-i tau v} dv by repeated integration by parts; the
// series converges because k varies slowly past the retained images
cplx oscillatory_tail(const std::array<double, 4>& jet, double tau, double T) {
  const cplx it(0.0, tau);
  cplx term(0.0, 0.0), pow_it = it;
  for (int m = 0; m < 4; ++m) {
    term += jet[std::size_t(m)] / pow_it;
    pow_it *= it;
  }
  return std::exp(-it * T) * term;
}

double convolve(const SampledField& g, std::span<const double> x_prime,
                double x_d, double t, bool neumann) {
  const Grid& grid = g.grid;
  if (!(x_d > 0.0))
    throw std::invalid_argument("convolve: interior point needs x_d > 0");
  if (int(x_prime.size()) != grid.d - 1)
    throw std::invalid_argument("convolve: x' must have d-1 components");

  const SpectralField ghat = forward(g);
  if (neumann) {
    double scale = 0.0;
    for (const auto& z : ghat.c) scale = std::max(scale, std::abs(z));
    if (scale > 0.0 && std::abs(ghat.c[0]) > 1e-12 * scale)
      throw std::invalid_argument(
          "convolve_neumann: boundary data must be mean-zero");
  }

  const int n_images = neumann ? kTimeImagesNeumann : kTimeImagesDirichlet;
  const int nsp = grid.d - 1;
  const int n_fine = kFineFactor * grid.n_x;
  const std::size_t fine_total = [&] {
    std::size_t n = 1;
    for (int a = 0; a < nsp; ++a) n *= std::size_t(n_fine);
    return n;
  }();
  const double dy = nsp > 0 ? grid.box_x / double(n_fine) : 1.0;
  const double fine_cell = std::pow(dy, nsp);

  // trig interpolation onto the fine lattice = inverse transform of the
  // spectrum zero-padded to n_fine per axis; slot of spatial index k
  std::vector<std::size_t> pad_index(std::size_t(std::max(grid.n_x, 1)));
  for (int k = 0; k < grid.n_x; ++k) {
    const int s = k < grid.n_x / 2 ? k : k - grid.n_x;
    pad_index[std::size_t(k)] = std::size_t(s >= 0 ? s : n_fine + s);
  }
  fftw_plan fine_plan = nullptr;
  std::vector<cplx> pad(nsp > 0 ? fine_total : 0);
  if (nsp == 1)
    fine_plan = fftw_plan_dft_1d(
        n_fine, reinterpret_cast<fftw_complex*>(pad.data()),
        reinterpret_cast<fftw_complex*>(pad.data()), FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
  else if (nsp == 2)
    fine_plan = fftw_plan_dft_2d(
        n_fine, n_fine, reinterpret_cast<fftw_complex*>(pad.data()),
        reinterpret_cast<fftw_complex*>(pad.data()), FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);

  const double u_min = x_d * x_d / 50.0;
  const double tau_max = M_PI * double(grid.n_t) / grid.box_t;
  const UGrid ug =
      log_ugrid(u_min, grid.box_t + u_min, kPointsPerOctaveU,
                2.0 * M_PI / (tau_max * double(kSamplesPerPeriod)));
  const std::size_t n_sp_modes = grid.size() / std::size_t(grid.n_t);

  std::vector<cplx> c_y(n_sp_modes);
  std::vector<cplx> g_fine(fine_total);
  std::vector<double> kernel(fine_total);
  double acc = 0.0;

  for (std::size_t iu = 0; iu < ug.u.size(); ++iu) {
    const double u = ug.u[iu];
    const double ts = t - u;

    // collapse the time axis of ghat at time t - u
    std::fill(c_y.begin(), c_y.end(), cplx(0.0, 0.0));
    for (std::size_t ks = 0; ks < n_sp_modes; ++ks) {
      const cplx* row = ghat.c.data() + ks * std::size_t(grid.n_t);
      cplx s(0.0, 0.0);
      for (int m = 0; m < grid.n_t; ++m)
        s += row[m] * std::exp(cplx(0.0, grid.freq_t(m) * ts));
      c_y[ks] = s;
    }

    // evaluate g on the fine tangential lattice
    if (nsp == 0) {
      g_fine[0] = c_y[0] / grid.volume();
    } else {
      std::fill(pad.begin(), pad.end(), cplx(0.0, 0.0));
      if (nsp == 1) {
        for (int k = 0; k < grid.n_x; ++k)
          pad[pad_index[std::size_t(k)]] = c_y[std::size_t(k)];
      } else {
        for (int k1 = 0; k1 < grid.n_x; ++k1)
          for (int k2 = 0; k2 < grid.n_x; ++k2)
            pad[pad_index[std::size_t(k1)] * std::size_t(n_fine) +
                pad_index[std::size_t(k2)]] =
                c_y[std::size_t(k1) * std::size_t(grid.n_x) + std::size_t(k2)];
      }
      fftw_execute(fine_plan);
      for (std::size_t j = 0; j < fine_total; ++j)
        g_fine[j] = pad[j] / grid.volume();
    }

    // kernel over the fine lattice: near time images exactly, far images as
    // a continuum remainder against the tangential mean (Dirichlet only)
    std::fill(kernel.begin(), kernel.end(), 0.0);
    for (int n = 0; n < n_images; ++n) {
      const double un = u + double(n) * grid.box_t;
      const double k1 = neumann ? k1_neumann(x_d, un) : k1_dirichlet(x_d, un);
      if (nsp == 0) {
        kernel[0] += k1;
      } else if (nsp == 1) {
        for (int jf = 0; jf < n_fine; ++jf)
          kernel[std::size_t(jf)] +=
              k1 * theta_axis(x_prime[0] - dy * double(jf), un, grid.box_x);
      } else {
        for (int jf1 = 0; jf1 < n_fine; ++jf1) {
          const double th1 =
              theta_axis(x_prime[0] - dy * double(jf1), un, grid.box_x);
          for (int jf2 = 0; jf2 < n_fine; ++jf2)
            kernel[std::size_t(jf1) * std::size_t(n_fine) + std::size_t(jf2)] +=
                k1 * th1 *
                theta_axis(x_prime[1] - dy * double(jf2), un, grid.box_x);
        }
      }
    }
    double slice = 0.0;
    for (std::size_t j = 0; j < fine_total; ++j)
      slice += kernel[j] * g_fine[j].real();
    acc += ug.w[iu] * slice * fine_cell;
  }
  if (fine_plan) fftw_destroy_plan(fine_plan);

  // beyond the retained images the tangential factors are flat, so only the
  // tangential mean contributes; add that remainder analytically per time mode
  const double T = double(n_images) * grid.box_t + u_min;
  const double a = x_d * x_d / 4.0;
  const auto jet = neumann
                       ? kernel_jet(-1.0 / std::sqrt(M_PI), 0.5, a, T)
                       : kernel_jet(x_d / (2.0 * std::sqrt(M_PI)), 1.5, a, T);
  for (int m = 0; m < grid.n_t; ++m) {
    const double tau = grid.freq_t(m);
    const cplx cm = ghat.c[std::size_t(m)] / grid.volume();
    if (tau == 0.0) {
      if (!neumann) acc += (cm * std::erf(x_d / (2.0 * std::sqrt(T)))).real();
    } else {
      acc += (cm * std::exp(cplx(0.0, tau * t)) * oscillatory_tail(jet, tau, T))
                 .real();
    }
  }
  return acc;
}

// independent partition profile for the tiny oracle (no shared code path)
double oracle_bump(double v) {
  const double a = std::fabs(v);
  if (a >= 1.0 - 1e-8) return 0.0;
  return std::exp(-1.0 / (1.0 - v * v));
}

double oracle_weight(int j, double r) {
  if (!(r > 0.0)) return 0.0;
  const double lg = std::log(r) / std::log(2.0);
  const double num = oracle_bump(lg - double(j));
  if (num == 0.0) return 0.0;
  const double t = lg - std::floor(lg);
  return num / (oracle_bump(t) + oracle_bump(t - 1.0));
}

}  // namespace

double heat_kernel(std::span<const double> x, double t) {
  if (t <= 0.0) return 0.0;
  double q = 0.0;
  for (const double c : x) q += c * c;
  const double dim = double(x.size());
  return std::pow(4.0 * M_PI * t, -0.5 * dim) * std::exp(-q / (4.0 * t));
}

double CaloricReference::value(std::span<const double> x_prime, double x_d,
                               double t) const {
  std::vector<double> x;
  x.reserve(std::size_t(d));
  for (int k = 0; k + 1 < d; ++k)
    x.push_back(x_prime[std::size_t(k)] - center[std::size_t(k)]);
  x.push_back(x_d + depth);
  return heat_kernel(x, t - t0);
}

SampledField CaloricReference::boundary_trace(const Grid& g) const {
  if (g.d != d)
    throw std::invalid_argument("boundary_trace: grid dimension mismatch");
  SampledField out = zeros_sampled(g);
  const double dx = g.d > 1 ? g.box_x / double(g.n_x) : 0.0;
  const double dt = g.box_t / double(g.n_t);
  std::vector<double> xp(std::size_t(d - 1), 0.0);
  std::size_t flat = 0;
  std::array<int, 2> ix{0, 0};
  const int nsp = d - 1;
  for (;;) {
    for (int k = 0; k < nsp; ++k) xp[std::size_t(k)] = dx * double(ix[k]);
    for (int it = 0; it < g.n_t; ++it)
      out.v[flat++] = value(xp, 0.0, dt * double(it));
    int k = nsp - 1;
    for (; k >= 0; --k) {
      if (++ix[k] < g.n_x) break;
      ix[k] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

double CaloricReference::box_mean(double x_d, const Grid& g) const {
  const double T = g.box_t - t0;
  if (T <= 0.0) return 0.0;
  const double a = x_d + depth;
  const double f = std::sqrt(T / M_PI) * std::exp(-a * a / (4.0 * T)) -
                   0.5 * a * std::erfc(a / (2.0 * std::sqrt(T)));
  return f / g.volume();
}

double convolve_dirichlet(const SampledField& g, std::span<const double> x_prime,
                          double x_d, double t) {
  return convolve(g, x_prime, x_d, t, false);
}

double convolve_neumann(const SampledField& g, std::span<const double> x_prime,
                        double x_d, double t) {
  return convolve(g, x_prime, x_d, t, true);
}

double tiny_besov_oracle(const SampledField& g, double s, double p, double q) {
  const Grid& grid = g.grid;
  if (grid.n_t > 16 || (grid.d > 1 && grid.n_x > 16))
    throw std::invalid_argument("tiny_besov_oracle: lattice too large");
  const std::size_t n = grid.size();

  // direct DFT, row-major modes, same normalization as forward()
  std::vector<cplx> coef(n, cplx(0.0, 0.0));
  std::vector<double> radius(n, 0.0);
  const double dx = grid.d > 1 ? grid.box_x / double(grid.n_x) : 0.0;
  const double dt = grid.box_t / double(grid.n_t);
  const int nsp = grid.d - 1;

  const auto decode = [&](std::size_t flat, std::array<int, 3>& idx) {
    idx = {0, 0, 0};
    std::size_t rest = flat;
    idx[2] = int(rest % std::size_t(grid.n_t));
    rest /= std::size_t(grid.n_t);
    for (int k = nsp - 1; k >= 0; --k) {
      idx[k] = int(rest % std::size_t(grid.n_x));
      rest /= std::size_t(grid.n_x);
    }
  };

  for (std::size_t kf = 0; kf < n; ++kf) {
    std::array<int, 3> ki{};
    decode(kf, ki);
    double a2 = 0.0;
    std::array<double, 2> xi{0.0, 0.0};
    for (int a = 0; a < nsp; ++a) {
      xi[std::size_t(a)] = grid.freq_x(ki[a]);
      a2 += xi[std::size_t(a)] * xi[std::size_t(a)];
    }
    const double tau = grid.freq_t(ki[2]);
    radius[kf] = std::sqrt(a2) + std::sqrt(std::fabs(tau));
    cplx acc(0.0, 0.0);
    for (std::size_t xf = 0; xf < n; ++xf) {
      std::array<int, 3> pi{};
      decode(xf, pi);
      double ph = tau * dt * double(pi[2]);
      for (int a = 0; a < nsp; ++a) ph += xi[std::size_t(a)] * dx * double(pi[a]);
      acc += g.v[xf] * std::exp(cplx(0.0, -ph));
    }
    coef[kf] = acc * (grid.volume() / double(n));
  }

  double r_min = 0.0, r_max = 0.0;
  for (std::size_t kf = 1; kf < n; ++kf) {
    if (radius[kf] <= 0.0) continue;
    if (r_min == 0.0 || radius[kf] < r_min) r_min = radius[kf];
    r_max = std::max(r_max, radius[kf]);
  }
  const double eps = 1e-9;
  const auto snap_ceil = [&](double v) {
    return std::fabs(v - std::round(v)) < eps ? int(std::round(v))
                                              : int(std::ceil(v));
  };
  const auto snap_floor = [&](double v) {
    return std::fabs(v - std::round(v)) < eps ? int(std::round(v))
                                              : int(std::floor(v));
  };
  const int j_min = snap_ceil(std::log2(r_min));
  const int j_max = snap_floor(std::log2(r_max));

  double acc_q = 0.0;
  for (int j = j_min; j <= j_max; ++j) {
    // band-filtered field by direct inverse DFT
    double band_p = 0.0;
    for (std::size_t xf = 0; xf < n; ++xf) {
      std::array<int, 3> pi{};
      decode(xf, pi);
      cplx val(0.0, 0.0);
      for (std::size_t kf = 0; kf < n; ++kf) {
        const double w = oracle_weight(j, radius[kf]);
        if (w == 0.0) continue;
        std::array<int, 3> ki{};
        decode(kf, ki);
        double ph = grid.freq_t(ki[2]) * dt * double(pi[2]);
        for (int a = 0; a < nsp; ++a)
          ph += grid.freq_x(ki[a]) * dx * double(pi[a]);
        val += w * coef[kf] * std::exp(cplx(0.0, ph));
      }
      val /= grid.volume();
      if (std::isinf(p))
        band_p = std::max(band_p, std::abs(val));
      else
        band_p += std::pow(std::abs(val), p);
    }
    const double term =
        std::isinf(p) ? band_p
                      : std::pow(band_p * grid.cell(), 1.0 / p);
    const double weighted = std::pow(2.0, double(j) * s) * term;
    if (weighted == 0.0) continue;
    if (std::isinf(q))
      acc_q = std::max(acc_q, weighted);
    else
      acc_q += std::pow(weighted, q);
  }
  return std::isinf(q) ? acc_q : std::pow(acc_q, 1.0 / q);
}

}  // namespace halfheat
