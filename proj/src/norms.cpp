#include "halfheat/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "halfheat/lp_bank.hpp"
#include "halfheat/multiplier.hpp"

namespace halfheat {

namespace {

void require_mean_zero(const SpectralField& f, const char* who) {
  double scale = 0.0;
  for (const auto& z : f.c) scale = std::max(scale, std::abs(z));
  if (scale > 0.0 && std::abs(f.c[0]) > 1e-12 * scale)
    throw std::invalid_argument(std::string(who) +
                                ": field must be mean-zero");
}

// l^q accumulator over band terms with sup semantics at q = infinity
struct QSum {
  double q;
  double acc = 0.0;
  void add(double term) {
    if (term == 0.0) return;
    if (std::isinf(q))
      acc = std::max(acc, term);
    else
      acc += std::pow(term, q);
  }
  double value() const {
    return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
  }
};

std::vector<double> band_weights_on(const Grid& g, int j) {
  std::vector<double> w(g.size(), 0.0);
  for_each_mode(g, [&](const Mode& m) {
    w[m.flat] = band_weight(j, m.abs_xi, m.tau);
  });
  return w;
}

}  // namespace

double besov_norm(const SampledField& g, double s, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0))
    throw std::invalid_argument("besov_norm: p, q must be >= 1");
  const SpectralField f = forward(g);
  require_mean_zero(f, "besov_norm");
  const BandRange bands = active_bands(g.grid);
  QSum sum{q};
  for (int j = bands.j_min; j <= bands.j_max; ++j) {
    const double t = lp_norm(inverse(apply_band(j, f)), p);
    sum.add(std::pow(2.0, double(j) * s) * t);
  }
  return sum.value();
}

double bessel_norm(const SampledField& g, double s, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("bessel_norm: p must be >= 1");
  SpectralField f = forward(g);
  require_mean_zero(f, "bessel_norm");
  for_each_mode(g.grid, [&](const Mode& m) {
    if (m.origin())
      f.c[m.flat] = 0.0;
    else
      f.c[m.flat] *= frac_power(s, m.abs_xi, m.tau);
  });
  return lp_norm(inverse(f), p);
}

double sobolev_norm(const SliceStack& v, int m, double p) {
  if (m < 0) throw std::invalid_argument("sobolev_norm: m must be >= 0");
  if (m == 0) return interior_lp_norm(v, p);
  double acc = 0.0;
  for (const auto& idx : parabolic_indices(v.grid.d, 2 * m))
    acc += interior_lp_norm(derivative_field(v, idx.alpha, idx.beta), p);
  return acc;
}

double interior_besov_norm(const SliceStack& v, double s, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0))
    throw std::invalid_argument("interior_besov_norm: p, q must be >= 1");
  if (v.slices.empty())
    throw std::invalid_argument("interior_besov_norm: empty stack");
  const BandRange bands = active_bands(v.grid);
  QSum sum{q};
  SliceStack filtered;
  filtered.grid = v.grid;
  filtered.nodes = v.nodes;
  filtered.weights = v.weights;
  filtered.slices.assign(v.slices.size(),
                         SpectralField{v.grid, std::vector<cplx>(v.grid.size())});
  for (int j = bands.j_min; j <= bands.j_max; ++j) {
    const std::vector<double> w = band_weights_on(v.grid, j);
    for (std::size_t i = 0; i < v.slices.size(); ++i)
      for (std::size_t k = 0; k < w.size(); ++k)
        filtered.slices[i].c[k] = w[k] * v.slices[i].c[k];
    sum.add(std::pow(2.0, double(j) * s) * interior_lp_norm(filtered, p));
  }
  return sum.value();
}

double interior_bessel_norm(const SliceStack& v, double s, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("interior_bessel_norm: p must be >= 1");
  if (!(s >= 0.0))
    throw std::invalid_argument("interior_bessel_norm: s must be >= 0");
  if (v.slices.empty())
    throw std::invalid_argument("interior_bessel_norm: empty stack");
  // geometric interpolation between the two neighboring integer-order
  // derivative sums; at even integer s this is exactly sobolev_norm(v, s/2, p)
  const int m0 = int(std::floor(s / 2.0));
  const double theta = s / 2.0 - double(m0);
  const double lo = sobolev_norm(v, m0, p);
  if (theta == 0.0) return lo;
  const double hi = sobolev_norm(v, m0 + 1, p);
  return std::pow(lo, 1.0 - theta) * std::pow(hi, theta);
}

double gagliardo_seminorm_1d(const SampledField& g, double s, double p,
                             double* excluded_mass) {
  if (g.grid.d != 1)
    throw std::invalid_argument("gagliardo_seminorm_1d: needs a d = 1 grid");
  if (!(s > 0.0) || s == std::floor(s))
    throw std::invalid_argument(
        "gagliardo_seminorm_1d: s must be positive and non-integer");
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("gagliardo_seminorm_1d: need 1 <= p < inf");
  const int deriv = int(std::floor(s));
  const double sigma = s - std::floor(s);

  // integer part of the smoothness acts spectrally on the time axis
  SampledField base = g;
  if (deriv > 0) {
    SpectralField f = forward(g);
    for_each_mode(g.grid, [&](const Mode& m) {
      cplx fac(1.0, 0.0);
      for (int k = 0; k < deriv; ++k) fac *= cplx(0.0, m.tau);
      f.c[m.flat] *= fac;
    });
    base = inverse(f);
  }

  const int n = g.grid.n_t;
  const double box = g.grid.box_t;
  const double h = box / double(n);
  const double expo = 1.0 + sigma * p;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      const int di = std::min(std::abs(i - k), n - std::abs(i - k));
      const double dist = double(di) * h;  // exact min-image separation
      const double diff = std::abs(base.v[std::size_t(i)] - base.v[std::size_t(k)]);
      if (diff == 0.0) continue;
      acc += std::pow(diff, p) / std::pow(dist, expo) * h * h;
    }
  }
  if (excluded_mass) {
    // near-diagonal estimate from the local slope: for |w| < h the integrand
    // is ~ |g'|^p |w|^{p - 1 - sigma p}, total 2 h^{p - sigma p}/(p - sigma p)
    double slope = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d1 =
          std::abs(base.v[std::size_t((i + 1) % n)] - base.v[std::size_t(i)]) / h;
      slope += std::pow(d1, p) * h;
    }
    *excluded_mass =
        slope * 2.0 * std::pow(h, p - sigma * p) / (p - sigma * p);
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace halfheat
