#pragma once

#include <span>
#include <vector>

#include "halfheat/grid.hpp"

namespace halfheat {

/// (4 pi t)^{-d/2} e^{-|x|^2/(4t)} for t > 0, 0 for t <= 0; the dimension is
/// x.size().
double heat_kernel(std::span<const double> x, double t);

/// Closed-form caloric field w(x,t) = heat_kernel((x'-center, x_d+depth),
/// t - t0): a source buried at depth below the boundary, smooth and caloric
/// in the closed upper half space for t > t0.
struct CaloricReference {
  int d = 1;
  double depth = 0.5;
  std::vector<double> center;  // d-1 tangential components
  double t0 = 0.0;

  double value(std::span<const double> x_prime, double x_d, double t) const;

  /// Samples value(x', 0, t) on the grid lattice.
  SampledField boundary_trace(const Grid& g) const;

  /// Box average of the field at depth x_d over one grid period:
  /// the tangential integral of the kernel is 1, so the average is the
  /// one-dimensional time integral F(x_d+depth, box_t-t0) / volume with
  /// F(a,T) = sqrt(T/pi) e^{-a^2/(4T)} - (a/2) erfc(a/(2 sqrt(T))).
  /// A periodic solve carries the boundary mean unchanged in depth; this
  /// closed form is what the mean actually does, used to align the zero
  /// mode when comparing against the reference.
  double box_mean(double x_d, const Grid& g) const;
};

/// Direct quadrature of the boundary-to-interior convolution
///   -2 int int d_d Gamma(x'-y', x_d, t-s) g(y',s) dy' ds
/// over the periodic box: geometric refinement of the time integral near
/// s = t, the kernel summed over the nearest periodic images plus an
/// analytic continuum remainder for the far time images. Throws for
/// x_d <= 0. Returns the real part (boundary data are real in every use).
double convolve_dirichlet(const SampledField& g, std::span<const double> x_prime,
                          double x_d, double t);

/// Same with kernel -2 Gamma. The kernel's time integral only converges
/// against mean-zero data; throws when g carries a mean.
double convolve_neumann(const SampledField& g, std::span<const double> x_prime,
                        double x_d, double t);

/// Besov dyadic sum evaluated by direct nested loops: own DFT, own copy of
/// the partition profile, no transform library. Exhaustive, for lattices of
/// at most 16 points per axis; equivalence reference for besov_norm.
double tiny_besov_oracle(const SampledField& g, double s, double p, double q);

}  // namespace halfheat
