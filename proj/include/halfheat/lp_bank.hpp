#pragma once

#include "halfheat/grid.hpp"

namespace halfheat {

/// Parabolic annulus radius r(xi',tau) = |xi'| + |tau|^{1/2}; frequencies at
/// distance r from the origin belong to dyadic shells around 2^j.
double anisotropic_radius(double abs_xi, double tau);

/// Smooth partition profile rho on (0,inf): rho is supported in (1/2,2),
/// rho(1) = 1 and sum_k rho(2^-k r) = 1 for every r > 0. Built from the
/// exp(-1/(1-u^2)) mollifier in u = log2 r, normalized by its own dyadic
/// translates; the normalizer is dilation periodic so the telescoping sum
/// is exact to rounding.
double band_profile(double r);

/// phi_j(xi',tau) = rho(2^-j r); in [0,1], zero outside 2^{j-1} < r < 2^{j+1}
/// and at the origin.
double band_weight(int j, double abs_xi, double tau);

struct BandRange {
  int j_min = 0;
  int j_max = 0;
  bool contains(int j) const { return j >= j_min && j <= j_max; }
  int count() const { return j_max - j_min + 1; }
};

/// Smallest interval [j_min, j_max] with every nonzero lattice frequency in
/// (2^{j_min-1}, 2^{j_max+1}).
BandRange active_bands(const Grid& g);

/// Coefficients multiplied pointwise by band_weight(j, .). Throws
/// std::out_of_range when j is outside active_bands(f.grid).
SpectralField apply_band(int j, const SpectralField& f);

/// The filter bank for one grid: the shared profile plus the active range.
struct DyadicBank {
  BandRange j_range;
  double profile(double r) const { return band_profile(r); }
};

DyadicBank make_bank(const Grid& g);

}  // namespace halfheat
