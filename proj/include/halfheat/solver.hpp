#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "halfheat/grid.hpp"

namespace halfheat {

/// Geometric x_d quadrature for integrals over (0, inf): nodes x_min * rho^i
/// reaching x_max, trapezoid weights in log x_d. The integrand of every
/// interior norm concentrates at depth ~ 2^{-j} per frequency band, so log
/// spacing equidistributes quadrature error across bands.
struct QuadratureSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  int points_per_octave = 8;
};

/// Default window for a grid's active bands: x_min = 2^{-j_max-4},
/// x_max = ln(1e8) / 2^{j_min-1} (the slowest band decays below 1e-8).
QuadratureSpec default_quadrature(const Grid& g);

struct XdGrid {
  std::vector<double> nodes;    // strictly increasing, > 0
  std::vector<double> weights;  // trapezoid in log x: x_i du, halved at ends
};

/// Throws std::invalid_argument unless 0 < x_min < x_max and
/// points_per_octave >= 2.
XdGrid build_quadrature(const QuadratureSpec& spec);

/// Interior representation of a half-space field: one boundary-grid spectral
/// slice per x_d node, plus the quadrature weights tying slices into
/// integrals over depth.
struct SliceStack {
  Grid grid;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<SpectralField> slices;
  bool zero_mode_carried = false;  // boundary data had nonzero mean
};

/// Depth propagator table for one grid + quadrature: slice i of the solve is
/// the boundary spectrum multiplied pointwise by row i. Building the table
/// dominates a solve, so the harness shares one per configuration.
struct Propagator {
  enum class Kind { dirichlet, neumann };
  Grid grid;
  XdGrid xd;
  Kind kind = Kind::dirichlet;
  std::vector<cplx> table;  // nodes.size() * grid.size(), row-major
};

Propagator make_propagator(const Grid& g, const QuadratureSpec& spec,
                           Propagator::Kind kind);

/// Throws std::invalid_argument for a Neumann propagator when g carries a
/// nonzero mean; flags (and propagates unchanged) the mean for Dirichlet.
SliceStack apply_propagator(const Propagator& prop, const SampledField& g);

/// slice(x_d) = e^{-x_d root} ghat per mode. The zero mode passes through
/// with symbol 1 and sets zero_mode_carried.
SliceStack solve_dirichlet(const SampledField& g, const QuadratureSpec& spec);

/// slice(x_d) = -e^{-x_d root}/root ghat per mode; rejects nonzero mean.
SliceStack solve_neumann(const SampledField& g, const QuadratureSpec& spec);

/// Pointwise multiplication of every slice by deriv_symbol(alpha, beta).
/// Normal derivatives act analytically through the (-root) factor; nothing
/// is finite-differenced.
SliceStack derivative_field(const SliceStack& stack, std::span<const int> alpha,
                            int beta);

/// ( x_min * lp(slice_0)^p + sum_i w_i * lp(slice_i)^p )^{1/p}; the head cell
/// uses the boundary-limit behavior v = g + O(x_d) below the first node.
/// p = infinity: sup over slices.
double interior_lp_norm(const SliceStack& stack, double p);

struct TraceReport {
  int flagged_modes = 0;       // quadrature window too narrow for the mode
  double worst_tail = 0.0;     // largest analytic tail fraction encountered
};

/// Per-mode quadrature of 4 int x_d z^2 e^{-x_d z} vhat(x_d) dx_d over the
/// stack's window, with closed-form head and tail corrections that assume
/// the Poisson profile. `normal_order` is the (-root)-power the stack's
/// slices carry (0 for a plain Dirichlet solve, m after d_{x_d}^m).
/// Recovers the boundary data; throws on zero-frequency content.
SampledField trace_recover(const SliceStack& stack, int normal_order,
                           TraceReport* report = nullptr);

/// Quadrature value (with the same head/tail corrections) of the Gamma
/// integral 4 int x z^2 e^{-2 x z} dx = 1, for Re z > 0. Used to audit the
/// depth quadrature one mode at a time.
cplx gamma_mass(cplx z, const QuadratureSpec& spec);

/// Stack serialization: directory with manifest.json (grid, nodes, weights,
/// slice file names) plus one spectral field file per slice.
void write_stack(const std::filesystem::path& dir, const SliceStack& stack);
SliceStack read_stack(const std::filesystem::path& dir);

}  // namespace halfheat
