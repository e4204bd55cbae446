#pragma once

#include <span>
#include <vector>

#include "halfheat/grid.hpp"

namespace halfheat {

/// Principal branch of sqrt(|xi'|^2 + i tau). The real part is bounded below
/// by (|xi'|^4 + tau^2)^{1/4} / sqrt(2), so e^{-x_d root} decays for every
/// nonzero frequency.
cplx root(double abs_xi, double tau);

/// e^{-x_d root(xi',tau)}; value 1 at the origin by continuity.
cplx poisson_symbol(double x_d, double abs_xi, double tau);

/// -e^{-x_d root}/root, the depth profile of the Neumann solve. Throws
/// std::domain_error at the zero frequency.
cplx neumann_symbol(double x_d, double abs_xi, double tau);

/// Symbol of grad_x^alpha d_t^beta on fields with the e^{-x_d root} depth
/// profile: product of (i xi_k)^{alpha_k} over tangential axes, (-root)^
/// {alpha_d} for the normal axis (alpha.back()), and (i tau)^beta. Integer
/// powers only; 0^0 = 1. alpha.size() must equal the grid dimension d.
cplx deriv_symbol(std::span<const int> alpha, int beta,
                  std::span<const double> xi, double abs_xi, double tau);

/// (|xi'|^2 + i tau)^{s/2}, principal branch. At the origin: 0 for s > 0,
/// 1 for s = 0; throws std::domain_error for s < 0.
cplx frac_power(double s, double abs_xi, double tau);

/// Smooth annulus window: 1 on 1/2 <= r <= 2, 0 outside 1/3 < r < 3, built
/// from the same mollifier rise as the band profile, in log2 radius.
double annulus_cutoff(double r);

/// L^1(box) norm of the inverse transform of annulus_cutoff(r) *
/// deriv_symbol(alpha,beta) * e^{-x_d root} on the grid's frequency lattice.
/// Requires the lattice to cover the annulus with at least 8 samples across
/// it on every axis; throws std::invalid_argument otherwise.
double kernel_decay_l1(const Grid& g, std::span<const int> alpha, int beta,
                       double x_d);

/// Multi-index helpers shared by the norm and harness layers: all (alpha,
/// beta) with |alpha| + 2 beta == order, alpha over d axes (tangential first,
/// normal last), in lexicographic order.
struct ParabolicIndex {
  std::vector<int> alpha;
  int beta = 0;
};
std::vector<ParabolicIndex> parabolic_indices(int d, int order);

}  // namespace halfheat
