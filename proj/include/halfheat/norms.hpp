#pragma once

#include "halfheat/grid.hpp"
#include "halfheat/solver.hpp"

namespace halfheat {

/// Norm family selector used by the CLI and the experiment harness.
/// The time smoothness is always tied to the space smoothness (s/2, or m),
/// never independent.
struct NormSpec {
  enum class Family { besov, bessel, sobolev };
  Family family = Family::besov;
  double s = 0.0;  // besov / bessel
  int m = 0;       // sobolev
  double p = 2.0;
  double q = 2.0;  // besov only
};

/// ( sum_{j active} 2^{jsq} |band_j g|_p^q )^{1/q}, sup over j when
/// q = infinity. Requires mean-zero g (homogeneous norms degenerate on
/// constants); throws std::invalid_argument otherwise.
double besov_norm(const SampledField& g, double s, double p, double q);

/// L^p norm of the inverse transform of frac_power(s) ghat over nonzero
/// modes. Requires mean-zero g.
double bessel_norm(const SampledField& g, double s, double p);

/// sum over all (alpha, beta) with |alpha| + 2 beta = 2m of the interior
/// L^p norm of grad^alpha d_t^beta v. m = 0 reduces to interior_lp_norm.
double sobolev_norm(const SliceStack& v, int m, double p);

/// Besov norm of an interior stack: bands act on the (x',t) spectra of every
/// slice, depth is handled by the quadrature weights.
double interior_besov_norm(const SliceStack& v, double s, double p, double q);

/// Bessel norm of an interior stack, realized as the geometric interpolation
/// of the neighboring integer-order derivative sums:
/// sobolev(floor(s/2))^(1-theta) * sobolev(floor(s/2)+1)^theta. At even
/// integer s it coincides with sobolev_norm(v, s/2, p) by construction, so
/// the two families agree where the spaces do. Requires s >= 0.
double interior_bessel_norm(const SliceStack& v, double s, double p);

/// Direct double quadrature of the fractional difference quotient
/// ( sum_{i != k} |D^{floor(s)} g(t_i) - D^{floor(s)} g(t_k)|^p /
///   dist(t_i,t_k)^{1 + sigma p} h^2 )^{1/p},  sigma = s - floor(s),
/// with periodic distance on the box and integer derivatives taken
/// spectrally. The diagonal cells |t_i - t_k| < h are excluded; their
/// estimated mass (O(h^{1 + p - sigma p})) is written to *excluded_mass
/// when given. Requires d = 1, non-integer s > 0, 1 <= p < infinity.
double gagliardo_seminorm_1d(const SampledField& g, double s, double p,
                             double* excluded_mass = nullptr);

}  // namespace halfheat
