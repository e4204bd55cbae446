#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "halfheat/grid.hpp"
#include "halfheat/solver.hpp"

namespace halfheat {

enum class Experiment {
  regularity,
  trace,
  corollary_sobolev,
  corollary_bessel,
  corollary_besov,
  neumann_variant,
  decay,
};

enum class Family {
  dyadic_block,
  gaussian_bump,
  random_bandlimited,
  caloric_trace,
};

enum class ReportFormat { csv, json };

const char* to_string(Experiment e);
const char* to_string(Family f);
Experiment experiment_from_string(const std::string& name);
Family family_from_string(const std::string& name);

/// One experiment: data family, estimate indices, grid, quadrature, trials.
/// Zero-valued grid/box/quadrature fields are filled with per-experiment
/// defaults by normalized().
struct ExperimentConfig {
  Experiment experiment = Experiment::regularity;
  int d = 1;
  int m = 1;
  double s = 0.0;  // bessel/besov corollary branches
  double p = 2.0;
  double q = 0.0;  // 0: follow p
  int n_x = 0;
  int n_t = 0;
  double box_x = 0.0;
  double box_t = 0.0;
  QuadratureSpec quad{0.0, 0.0, 0};
  Family family = Family::random_bandlimited;
  int trials = 20;
  std::uint64_t seed = 1;
  int block_j = 0;  // dyadic_block scale
};

/// Fills defaulted fields; validates the rest. Throws std::invalid_argument
/// on out-of-contract values.
ExperimentConfig normalized(ExperimentConfig c);
Grid config_grid(const ExperimentConfig& c);
std::string canonical_config(const ExperimentConfig& c);

struct TrialRecord {
  int trial = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Decay-run entry: kernel_decay_l1 tabulated over x_d in {1/4,...,8} and
/// fitted to C e^{-c x_d} by least squares on the log values.
struct DecayRecord {
  std::vector<int> alpha;
  int beta = 0;
  double prefactor = 0.0;  // C
  double rate = 0.0;       // c
  double residual = 0.0;   // sup |log value - log fit| over the sampled x_d
  std::vector<double> x;
  std::vector<double> values;
};

struct EstimateReport {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<TrialRecord> trials;
  int degenerate_trials = 0;  // 0/0 trials, excluded from the summary
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double ratio_geomean = 0.0;
  std::vector<DecayRecord> decay;
};

/// Deterministic random source: std::mt19937_64 is bit-exact across
/// platforms, and all draws go through these helpers.
struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  std::mt19937_64 engine;
  double uniform() {  // [0, 1)
    return double(engine() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

/// Draws one boundary field: real-valued, mean-zero (caloric traces are
/// mean-subtracted), spectra symmetrized so the inverse transform is real.
SampledField make_family(const ExperimentConfig& c, const Grid& g, Rng& rng);

/// Matched parabolic dilation: same sample array on the grid with boxes
/// (box_x / 2^k, box_t / 4^k), representing g(2^k x', 4^k t).
SampledField dilate_field(const SampledField& g, int k);

/// lhs = sum over |alpha| + 2 beta = m of the interior L^p norm of the
/// derivative of the Dirichlet solve; rhs = boundary Besov norm with weight
/// 2^{j(m - 1/p)}.
EstimateReport run_regularity(const ExperimentConfig& c);

/// lhs = boundary Besov norm; rhs = interior L^p norm of the m-th normal
/// derivative of the solve.
EstimateReport run_trace(const ExperimentConfig& c);

/// Two-sided ratio between the interior norm of the solve (per branch:
/// derivative sum / interpolated derivative sum / dyadic bands) and the
/// boundary Besov norm with indices shifted by -1/p.
EstimateReport run_corollary(const ExperimentConfig& c);

/// Regularity-type ratios for the Neumann solve; boundary index m - 1 - 1/p.
EstimateReport run_neumann_variant(const ExperimentConfig& c);

/// Tabulates kernel_decay_l1 over x_d in {2^-2,...,2^3} for every (alpha,
/// beta) with |alpha| + 2 beta <= 4, fits the exponential, asserts the rate
/// is positive. Fit residuals are recorded, not asserted.
EstimateReport run_decay(const ExperimentConfig& c);

EstimateReport run_experiment(const ExperimentConfig& c);

/// CSV: one row per trial (experiment, family, seed, trial, d, m_or_s, p, q,
/// lhs, rhs, ratio). JSON: config echo, summary statistics, fitted
/// constants, decay table. Byte-stable at fixed seed and thread count.
void emit_report(const EstimateReport& report, std::ostream& os,
                 ReportFormat format);
void emit_report(const EstimateReport& report,
                 const std::filesystem::path& path, ReportFormat format);

}  // namespace halfheat
