#include "halfheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "halfheat/field_io.hpp"
#include "halfheat/lp_bank.hpp"
#include "halfheat/multiplier.hpp"

namespace halfheat {

namespace {

double spectral_scale(const std::vector<cplx>& c) {
  double m = 0.0;
  for (const auto& z : c) m = std::max(m, std::abs(z));
  return m;
}

// 1 - e^{-a}(1+a), stable for small |a|
cplx gamma_head(cplx a) {
  if (std::abs(a) < 1e-2) {
    const cplx a2 = a * a;
    return a2 * (1.0 / 2.0) - a2 * a * (1.0 / 3.0) + a2 * a2 * (1.0 / 8.0) -
           a2 * a2 * a * (1.0 / 30.0) + a2 * a2 * a2 * (1.0 / 144.0);
  }
  return 1.0 - std::exp(-a) * (1.0 + a);
}

cplx ipow(cplx z, int n) {
  cplx acc(1.0, 0.0);
  for (int k = 0; k < n; ++k) acc *= z;
  return acc;
}

}  // namespace

QuadratureSpec default_quadrature(const Grid& g) {
  const BandRange bands = active_bands(g);
  QuadratureSpec spec;
  spec.x_min = std::ldexp(1.0, -bands.j_max - 4);
  spec.x_max = std::log(1e8) / std::ldexp(1.0, bands.j_min - 1);
  spec.points_per_octave = 8;
  return spec;
}

XdGrid build_quadrature(const QuadratureSpec& spec) {
  if (!(spec.x_min > 0.0) || !(spec.x_max > spec.x_min))
    throw std::invalid_argument("build_quadrature: need 0 < x_min < x_max");
  if (spec.points_per_octave < 2)
    throw std::invalid_argument("build_quadrature: points_per_octave >= 2");
  const double octaves = std::log2(spec.x_max / spec.x_min);
  const int cells = std::max(1, int(std::ceil(octaves * spec.points_per_octave)));
  const double du = std::log(spec.x_max / spec.x_min) / double(cells);
  XdGrid xd;
  xd.nodes.resize(std::size_t(cells) + 1);
  xd.weights.resize(std::size_t(cells) + 1);
  for (int i = 0; i <= cells; ++i) {
    const double x = spec.x_min * std::exp(du * double(i));
    xd.nodes[std::size_t(i)] = x;
    const double half = (i == 0 || i == cells) ? 0.5 : 1.0;
    xd.weights[std::size_t(i)] = half * x * du;
  }
  xd.nodes.back() = spec.x_max;  // kill the last exp() rounding drift
  return xd;
}

Propagator make_propagator(const Grid& g, const QuadratureSpec& spec,
                           Propagator::Kind kind) {
  Propagator prop;
  prop.grid = g;
  prop.xd = build_quadrature(spec);
  prop.kind = kind;
  const std::size_t n = g.size();
  const std::size_t rows = prop.xd.nodes.size();
  prop.table.resize(rows * n);
  for_each_mode(g, [&](const Mode& m) {
    if (m.origin()) {
      for (std::size_t i = 0; i < rows; ++i)
        prop.table[i * n + m.flat] =
            kind == Propagator::Kind::dirichlet ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      return;
    }
    const cplx z = root(m.abs_xi, m.tau);
    const cplx pre =
        kind == Propagator::Kind::dirichlet ? cplx(1.0, 0.0) : -1.0 / z;
    for (std::size_t i = 0; i < rows; ++i)
      prop.table[i * n + m.flat] = pre * std::exp(-prop.xd.nodes[i] * z);
  });
  return prop;
}

SliceStack apply_propagator(const Propagator& prop, const SampledField& g) {
  if (!g.grid.same_shape(prop.grid))
    throw std::invalid_argument("apply_propagator: grid mismatch");
  const SpectralField ghat = forward(g);
  const double scale = spectral_scale(ghat.c);
  const bool has_mean = std::abs(ghat.c[0]) > 1e-13 * scale && scale > 0.0;
  if (prop.kind == Propagator::Kind::neumann && has_mean)
    throw std::invalid_argument(
        "solve_neumann: boundary data must be mean-zero");
  SliceStack stack;
  stack.grid = prop.grid;
  stack.nodes = prop.xd.nodes;
  stack.weights = prop.xd.weights;
  stack.zero_mode_carried =
      prop.kind == Propagator::Kind::dirichlet && has_mean;
  const std::size_t n = prop.grid.size();
  stack.slices.reserve(stack.nodes.size());
  for (std::size_t i = 0; i < stack.nodes.size(); ++i) {
    SpectralField slice{prop.grid, std::vector<cplx>(n)};
    const cplx* row = prop.table.data() + i * n;
    for (std::size_t k = 0; k < n; ++k) slice.c[k] = row[k] * ghat.c[k];
    stack.slices.push_back(std::move(slice));
  }
  return stack;
}

SliceStack solve_dirichlet(const SampledField& g, const QuadratureSpec& spec) {
  return apply_propagator(
      make_propagator(g.grid, spec, Propagator::Kind::dirichlet), g);
}

SliceStack solve_neumann(const SampledField& g, const QuadratureSpec& spec) {
  return apply_propagator(
      make_propagator(g.grid, spec, Propagator::Kind::neumann), g);
}

SliceStack derivative_field(const SliceStack& stack, std::span<const int> alpha,
                            int beta) {
  if (stack.slices.empty())
    throw std::invalid_argument("derivative_field: empty stack");
  const Grid& g = stack.grid;
  if (int(alpha.size()) != g.d)
    throw std::invalid_argument("derivative_field: alpha must have d entries");
  std::vector<cplx> symbol(g.size());
  for_each_mode(g, [&](const Mode& m) {
    symbol[m.flat] = deriv_symbol(alpha, beta, m.xi, m.abs_xi, m.tau);
  });
  SliceStack out;
  out.grid = g;
  out.nodes = stack.nodes;
  out.weights = stack.weights;
  out.zero_mode_carried = stack.zero_mode_carried;
  out.slices.reserve(stack.slices.size());
  for (const auto& slice : stack.slices) {
    SpectralField s{g, std::vector<cplx>(g.size())};
    for (std::size_t k = 0; k < s.c.size(); ++k) s.c[k] = symbol[k] * slice.c[k];
    out.slices.push_back(std::move(s));
  }
  return out;
}

double interior_lp_norm(const SliceStack& stack, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("interior_lp_norm: p must be >= 1");
  if (stack.slices.empty())
    throw std::invalid_argument("interior_lp_norm: empty stack");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& slice : stack.slices)
      m = std::max(m, lp_norm(inverse(slice), p));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < stack.slices.size(); ++i) {
    const double t = lp_norm(inverse(stack.slices[i]), p);
    acc += stack.weights[i] * std::pow(t, p);
    if (i == 0) acc += stack.nodes[0] * std::pow(t, p);  // cell (0, x_min)
  }
  return std::pow(acc, 1.0 / p);
}

SampledField trace_recover(const SliceStack& stack, int normal_order,
                           TraceReport* report) {
  if (stack.slices.empty())
    throw std::invalid_argument("trace_recover: empty stack");
  const Grid& g = stack.grid;
  const std::size_t rows = stack.slices.size();
  double scale = 0.0;
  for (const auto& s : stack.slices) scale = std::max(scale, spectral_scale(s.c));
  if (std::abs(stack.slices[0].c[0]) > 1e-12 * scale && scale > 0.0)
    throw std::invalid_argument(
        "trace_recover: stack carries zero-frequency content");

  TraceReport local;
  SpectralField ghat = zeros_spectral(g);
  const double x_min = stack.nodes.front();
  const double x_max = stack.nodes.back();
  for_each_mode(g, [&](const Mode& m) {
    if (m.origin()) return;
    if (std::abs(stack.slices[0].c[m.flat]) <= 1e-13 * scale) return;
    const cplx z = root(m.abs_xi, m.tau);
    const cplx zm = ipow(-z, normal_order);
    // window coverage: head needs x_min well inside the mode's decay scale,
    // tail correction needs the Poisson profile to dominate by x_max
    if (x_min * std::abs(z) > 0.5 || x_max * z.real() < 5.0) ++local.flagged_modes;
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      const cplx vh = stack.slices[i].c[m.flat];
      if (vh == cplx(0.0, 0.0)) continue;
      const double x = stack.nodes[i];
      acc += stack.weights[i] * x * std::exp(-x * z) * vh;
    }
    acc *= 4.0 * z * z / zm;
    // head: int_0^{x_min} 4 x z^2 e^{-2xz} dx = 1 - e^{-a}(1+a), a = 2 x_min z,
    // against the boundary value estimated from the first slice
    const cplx g_head =
        stack.slices[0].c[m.flat] * std::exp(x_min * z) / zm;
    acc += g_head * gamma_head(2.0 * x_min * z);
    // tail: int_{x_max}^inf = e^{-b}(1+b), b = 2 x_max z, folded so only
    // decaying exponentials are evaluated
    const cplx b = 2.0 * x_max * z;
    const cplx tail =
        stack.slices[rows - 1].c[m.flat] * std::exp(-x_max * z) * (1.0 + b) / zm;
    acc += tail;
    local.worst_tail = std::max(local.worst_tail, std::abs(std::exp(-b)));
    ghat.c[m.flat] = acc;
  });
  if (report) *report = local;
  return inverse(ghat);
}

cplx gamma_mass(cplx z, const QuadratureSpec& spec) {
  if (!(z.real() > 0.0))
    throw std::invalid_argument("gamma_mass: need Re z > 0");
  const XdGrid xd = build_quadrature(spec);
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < xd.nodes.size(); ++i) {
    const double x = xd.nodes[i];
    acc += xd.weights[i] * x * std::exp(-2.0 * x * z);
  }
  acc *= 4.0 * z * z;
  acc += gamma_head(2.0 * xd.nodes.front() * z);
  const cplx b = 2.0 * xd.nodes.back() * z;
  acc += std::exp(-b) * (1.0 + b);
  return acc;
}

void write_stack(const std::filesystem::path& dir, const SliceStack& stack) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["d"] = stack.grid.d;
  manifest["box_x"] = stack.grid.box_x;
  manifest["box_t"] = stack.grid.box_t;
  manifest["n_x"] = stack.grid.n_x;
  manifest["n_t"] = stack.grid.n_t;
  manifest["zero_mode_carried"] = stack.zero_mode_carried;
  manifest["nodes"] = stack.nodes;
  manifest["weights"] = stack.weights;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < stack.slices.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "slice_%04zu.bin", i);
    names.emplace_back(buf);
    write_field(dir / buf, stack.slices[i]);
  }
  manifest["slices"] = names;
  std::ofstream os(dir / "manifest.json");
  if (!os) throw std::runtime_error("cannot write manifest: " + dir.string());
  os << manifest.dump(2) << "\n";
}

SliceStack read_stack(const std::filesystem::path& dir) {
  std::ifstream is(dir / "manifest.json");
  if (!is) throw std::runtime_error("cannot read manifest: " + dir.string());
  nlohmann::json manifest = nlohmann::json::parse(is);
  SliceStack stack;
  stack.grid = make_grid(manifest["d"], manifest["box_x"], manifest["box_t"],
                         manifest["n_x"], manifest["n_t"]);
  stack.zero_mode_carried = manifest["zero_mode_carried"];
  stack.nodes = manifest["nodes"].get<std::vector<double>>();
  stack.weights = manifest["weights"].get<std::vector<double>>();
  for (const auto& name : manifest["slices"])
    stack.slices.push_back(read_spectral(dir / name.get<std::string>()));
  return stack;
}

}  // namespace halfheat
