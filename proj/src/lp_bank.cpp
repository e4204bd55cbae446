#include "halfheat/lp_bank.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace halfheat {

namespace {

// mollifier bump in log2 radius, supported on |u| < 1; the hard cutoff at
// 1 - 1e-8 avoids overflow in the exponent near the edge
double bump(double u) {
  const double a = std::fabs(u);
  if (a >= 1.0 - 1e-8) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

// sum of bump over all integer translates in log2; only the two straddling
// the fractional part can be nonzero, and the sum is invariant under
// dilation r -> 2r by construction
double translate_sum(double lg) {
  const double t = lg - std::floor(lg);
  return bump(t) + bump(t - 1.0);
}

}  // namespace

double anisotropic_radius(double abs_xi, double tau) {
  return abs_xi + std::sqrt(std::fabs(tau));
}

double band_profile(double r) {
  if (!(r > 0.0)) return 0.0;
  const double lg = std::log2(r);
  const double num = bump(lg);
  if (num == 0.0) return 0.0;
  return num / translate_sum(lg);
}

double band_weight(int j, double abs_xi, double tau) {
  const double r = anisotropic_radius(abs_xi, tau);
  if (!(r > 0.0)) return 0.0;
  const double lg = std::log2(r);
  const double num = bump(lg - double(j));
  if (num == 0.0) return 0.0;
  return num / translate_sum(lg);
}

BandRange active_bands(const Grid& g) {
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
  for_each_mode(g, [&](const Mode& m) {
    if (m.origin()) return;
    const double r = anisotropic_radius(m.abs_xi, m.tau);
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
  });
  // largest j with 2^{j-1} < r_min and smallest j with r_max < 2^{j+1};
  // snap exact powers of two before rounding
  const double eps = 1e-9;
  const double a = std::log2(r_min);
  const double b = std::log2(r_max);
  const double ar = std::round(a);
  const double br = std::round(b);
  BandRange range;
  range.j_min = std::fabs(a - ar) < eps ? int(ar) : int(std::ceil(a));
  range.j_max = std::fabs(b - br) < eps ? int(br) : int(std::floor(b));
  return range;
}

SpectralField apply_band(int j, const SpectralField& f) {
  const BandRange range = active_bands(f.grid);
  if (!range.contains(j))
    throw std::out_of_range("apply_band: band " + std::to_string(j) +
                            " outside active range [" +
                            std::to_string(range.j_min) + ", " +
                            std::to_string(range.j_max) + "]");
  SpectralField out{f.grid, std::vector<cplx>(f.grid.size())};
  for_each_mode(f.grid, [&](const Mode& m) {
    const double w = band_weight(j, m.abs_xi, m.tau);
    if (w != 0.0) out.c[m.flat] = w * f.c[m.flat];
  });
  return out;
}

DyadicBank make_bank(const Grid& g) { return DyadicBank{active_bands(g)}; }

}  // namespace halfheat
