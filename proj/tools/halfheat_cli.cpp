// Command line front end: estimate verification runs, kernel decay fits,
// and one-off half-space solves with on-disk field dumps.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "halfheat/field_io.hpp"
#include "halfheat/grid.hpp"
#include "halfheat/harness.hpp"
#include "halfheat/solver.hpp"

namespace {

using namespace halfheat;

struct EstimateOpts {
  int d = 1;
  int m = 1;
  double s = 0.0;
  std::string p = "2";
  std::string q;
  std::vector<int> grid;     // NX,NT
  std::vector<double> box;   // LX,LT
  std::vector<double> quad;  // XMIN,XMAX,PPO
  std::string family = "random_bandlimited";
  int trials = 20;
  std::uint64_t seed = 1;
  int block_j = 0;
  std::string out;
  std::string format = "csv";
};

double parse_exponent(const std::string& text, const char* flag) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError(flag, "expected a number or 'inf'");
}

void add_grid_opts(CLI::App* cmd, EstimateOpts& o) {
  cmd->add_option("--d", o.d, "space dimension, 1 to 3");
  cmd->add_option("--grid", o.grid,
                  "lattice sizes NX,NT (NX forced to 1 when d=1)")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--box", o.box, "box side lengths LX,LT")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--quad", o.quad, "depth quadrature XMIN,XMAX,PPO")
      ->delimiter(',')
      ->expected(3);
}

void add_estimate_opts(CLI::App* cmd, EstimateOpts& o) {
  add_grid_opts(cmd, o);
  cmd->add_option("--m", o.m, "derivative order");
  cmd->add_option("--s", o.s, "smoothness index (bessel/besov branches)");
  cmd->add_option("--p", o.p, "integrability exponent, number or 'inf'");
  cmd->add_option("--q", o.q, "summation exponent, number or 'inf' (default p)");
  cmd->add_option("--family", o.family, "boundary data family")
      ->check(CLI::IsMember({"dyadic_block", "gaussian_bump",
                             "random_bandlimited", "caloric_trace"}));
  cmd->add_option("--trials", o.trials, "independent draws");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--block-j", o.block_j, "dyadic_block scale");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig to_config(const EstimateOpts& o, Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.d = o.d;
  c.m = o.m;
  c.s = o.s;
  c.p = parse_exponent(o.p, "--p");
  c.q = o.q.empty() ? 0.0 : parse_exponent(o.q, "--q");
  if (!o.grid.empty()) {
    c.n_x = o.grid[0];
    c.n_t = o.grid[1];
  }
  if (!o.box.empty()) {
    c.box_x = o.box[0];
    c.box_t = o.box[1];
  }
  if (!o.quad.empty()) {
    c.quad.x_min = o.quad[0];
    c.quad.x_max = o.quad[1];
    c.quad.points_per_octave = int(o.quad[2]);
  }
  c.family = family_from_string(o.family);
  c.trials = o.trials;
  c.seed = o.seed;
  c.block_j = o.block_j;
  return c;
}

void write_out(const EstimateReport& report, const EstimateOpts& o) {
  const ReportFormat fmt =
      o.format == "json" ? ReportFormat::json : ReportFormat::csv;
  if (o.out.empty())
    emit_report(report, std::cout, fmt);
  else
    emit_report(report, std::filesystem::path(o.out), fmt);
}

Experiment pick_estimate(const std::string& name, const std::string& branch) {
  if (name == "regularity") return Experiment::regularity;
  if (name == "trace") return Experiment::trace;
  if (name == "neumann" || name == "neumann_variant")
    return Experiment::neumann_variant;
  if (name == "corollary") {
    if (branch == "sobolev") return Experiment::corollary_sobolev;
    if (branch == "bessel") return Experiment::corollary_bessel;
    if (branch == "besov") return Experiment::corollary_besov;
    throw CLI::ValidationError("--branch", "expected sobolev, bessel or besov");
  }
  return experiment_from_string(name);  // long spellings pass through
}

struct SolveOpts {
  EstimateOpts est;
  bool neumann = false;
  std::string in;
  std::string stack_dir;
  std::string trace_out;
  int trace_order = 1;
  std::string boundary_out;
};

int run_solve(const SolveOpts& o) {
  ExperimentConfig c = to_config(o.est, Experiment::regularity);
  c.trials = 1;
  c = normalized(c);
  SampledField data = [&] {
    if (!o.in.empty()) return read_sampled(o.in);
    Rng rng(c.seed);
    return make_family(c, config_grid(c), rng);
  }();
  const Grid& g = data.grid;
  const QuadratureSpec quad =
      c.quad.x_min > 0.0 ? c.quad : default_quadrature(g);
  const Propagator prop = make_propagator(
      g, quad,
      o.neumann ? Propagator::Kind::neumann : Propagator::Kind::dirichlet);
  const SliceStack stack = apply_propagator(prop, data);
  if (!o.stack_dir.empty()) write_stack(o.stack_dir, stack);
  if (!o.boundary_out.empty()) write_field(o.boundary_out, data);
  if (!o.trace_out.empty()) {
    TraceReport tr;
    const SampledField rec = trace_recover(stack, o.trace_order, &tr);
    write_field(o.trace_out, rec);
    if (tr.flagged_modes > 0)
      std::fprintf(stderr,
                   "trace: %d modes outside the quadrature's reliable range\n",
                   tr.flagged_modes);
  }
  std::printf("solved %s problem: d=%d grid=%dx%d depths=%zu\n",
              o.neumann ? "neumann" : "dirichlet", g.d, g.n_x, g.n_t,
              stack.nodes.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "halfheat: half-space heat solves from boundary data, anisotropic "
      "Littlewood-Paley norms, and two-sided estimate verification"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI/TOML file");

  EstimateOpts verify_opts;
  std::string estimate_name;
  std::string branch = "sobolev";
  CLI::App* verify = app.add_subcommand(
      "verify", "ratio statistics for one two-sided estimate");
  verify
      ->add_option("estimate", estimate_name,
                   "regularity | trace | corollary | neumann")
      ->required();
  verify->add_option("--branch", branch,
                     "corollary branch: sobolev | bessel | besov");
  add_estimate_opts(verify, verify_opts);

  EstimateOpts decay_opts;
  CLI::App* decay = app.add_subcommand(
      "decay", "exponential off-diagonal kernel decay fits");
  add_grid_opts(decay, decay_opts);
  decay->add_option("--out", decay_opts.out, "output path (default stdout)");
  decay->add_option("--format", decay_opts.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}));

  SolveOpts solve_opts;
  CLI::App* solve = app.add_subcommand(
      "solve", "solve once and dump the interior slice stack");
  add_estimate_opts(solve, solve_opts.est);
  solve->add_flag("--neumann", solve_opts.neumann,
                  "solve the Neumann problem instead of Dirichlet");
  solve->add_option("--in", solve_opts.in,
                    "boundary data file (overrides --family)");
  solve->add_option("--stack-out", solve_opts.stack_dir,
                    "directory for the solved slice stack");
  solve->add_option("--boundary-out", solve_opts.boundary_out,
                    "file for the boundary data actually used");
  solve->add_option("--trace-out", solve_opts.trace_out,
                    "file for the recovered boundary trace");
  solve->add_option("--trace-order", solve_opts.trace_order,
                    "normal derivative order fed to the trace recovery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const Experiment e = pick_estimate(estimate_name, branch);
      write_out(run_experiment(to_config(verify_opts, e)), verify_opts);
      return 0;
    }
    if (decay->parsed()) {
      decay_opts.family = "random_bandlimited";
      write_out(run_experiment(to_config(decay_opts, Experiment::decay)),
                decay_opts);
      return 0;
    }
    if (solve->parsed()) return run_solve(solve_opts);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
