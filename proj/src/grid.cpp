#include "halfheat/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace halfheat {

namespace {

bool power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

// FFTW plans are cached per shape and direction. Plan creation is not
// thread-safe, execution on distinct arrays is; FFTW_ESTIMATE keeps the
// chosen algorithm deterministic across runs.
struct PlanKey {
  int n0, n1, n2, sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(n0, n1, n2, sign) < std::tie(o.n0, o.n1, o.n2, o.sign);
  }
};

fftw_plan plan_for(const Grid& g, int sign) {
  static std::mutex mu;
  static std::map<PlanKey, fftw_plan> cache;

  int dims[3] = {0, 0, 0};
  int rank = g.rank();
  for (int k = 0; k + 1 < g.d; ++k) dims[k] = g.n_x;
  dims[rank - 1] = g.n_t;

  PlanKey key{dims[0], dims[1], dims[2], sign};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::size_t n = g.size();
  fftw_complex* a = fftw_alloc_complex(n);
  fftw_complex* b = fftw_alloc_complex(n);
  std::fill_n(reinterpret_cast<double*>(a), 2 * n, 0.0);
  fftw_plan p = fftw_plan_dft(rank, dims, a, b, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(key, p);
  return p;
}

void execute(const Grid& g, int sign, const std::vector<cplx>& in,
             std::vector<cplx>& out) {
  fftw_plan p = plan_for(g, sign);
  // out-of-place execution leaves the input intact
  auto* src = reinterpret_cast<fftw_complex*>(
      const_cast<cplx*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p, src, dst);
}

}  // namespace

Grid make_grid(int d, double box_x, double box_t, int n_x, int n_t) {
  if (d < 1 || d > 3)
    throw std::invalid_argument("make_grid: d must be 1, 2 or 3");
  if (!(box_t > 0.0))
    throw std::invalid_argument("make_grid: box_t must be positive");
  if (!power_of_two(n_t) || n_t < 4)
    throw std::invalid_argument("make_grid: n_t must be a power of two >= 4");
  if (d == 1) {
    if (n_x != 1 || box_x != 0.0)
      throw std::invalid_argument(
          "make_grid: d = 1 has no tangential axis; pass box_x = 0, n_x = 1");
  } else {
    if (!(box_x > 0.0))
      throw std::invalid_argument("make_grid: box_x must be positive");
    if (!power_of_two(n_x) || n_x < 4)
      throw std::invalid_argument(
          "make_grid: n_x must be a power of two >= 4");
  }
  Grid g;
  g.d = d;
  g.box_x = box_x;
  g.box_t = box_t;
  g.n_x = n_x;
  g.n_t = n_t;
  return g;
}

SampledField zeros_sampled(const Grid& g) {
  return SampledField{g, std::vector<cplx>(g.size())};
}

SpectralField zeros_spectral(const Grid& g) {
  return SpectralField{g, std::vector<cplx>(g.size())};
}

SpectralField forward(const SampledField& u) {
  if (u.v.size() != u.grid.size())
    throw std::invalid_argument("forward: value array does not match grid");
  SpectralField f{u.grid, std::vector<cplx>(u.grid.size())};
  execute(u.grid, FFTW_FORWARD, u.v, f.c);
  const double scale = u.grid.volume() / double(u.grid.size());
  for (auto& z : f.c) z *= scale;
  return f;
}

SampledField inverse(const SpectralField& f) {
  if (f.c.size() != f.grid.size())
    throw std::invalid_argument("inverse: coefficient array does not match grid");
  SampledField u{f.grid, std::vector<cplx>(f.grid.size())};
  execute(f.grid, FFTW_BACKWARD, f.c, u.v);
  const double scale = 1.0 / f.grid.volume();
  for (auto& z : u.v) z *= scale;
  return u;
}

double lp_norm(const SampledField& u, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("lp_norm: p must be >= 1");
  if (u.v.size() != u.grid.size())
    throw std::invalid_argument("lp_norm: value array does not match grid");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : u.v) m = std::max(m, std::abs(z));
    return m;
  }
  double acc = 0.0;
  if (p == 2.0) {
    for (const auto& z : u.v) acc += std::norm(z);
  } else if (p == 1.0) {
    for (const auto& z : u.v) acc += std::abs(z);
  } else {
    for (const auto& z : u.v) acc += std::pow(std::abs(z), p);
  }
  return std::pow(acc * u.grid.cell(), 1.0 / p);
}

std::size_t conjugate_index(const Grid& g, std::size_t flat) {
  // decode row-major (x_1,...,x_{d-1},t), negate each index mod its axis size
  std::size_t rest = flat;
  int it = int(rest % std::size_t(g.n_t));
  rest /= std::size_t(g.n_t);
  std::array<int, 2> ix{0, 0};
  for (int k = g.d - 2; k >= 0; --k) {
    ix[k] = int(rest % std::size_t(g.n_x));
    rest /= std::size_t(g.n_x);
  }
  std::size_t out = 0;
  for (int k = 0; k + 1 < g.d; ++k)
    out = out * std::size_t(g.n_x) + std::size_t((g.n_x - ix[k]) % g.n_x);
  out = out * std::size_t(g.n_t) + std::size_t((g.n_t - it) % g.n_t);
  return out;
}

}  // namespace halfheat
