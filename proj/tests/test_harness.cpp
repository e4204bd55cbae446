#include <doctest.h>

#include <cmath>
#include <sstream>

#include "halfheat/grid.hpp"
#include "halfheat/harness.hpp"
#include "halfheat/lp_bank.hpp"
#include "halfheat/norms.hpp"

using namespace halfheat;

namespace {

double max_abs(const SampledField& u) {
  double m = 0.0;
  for (const auto& z : u.v) m = std::max(m, std::abs(z));
  return m;
}

cplx mean(const SampledField& u) {
  cplx acc(0.0, 0.0);
  for (const auto& z : u.v) acc += z;
  return acc / double(u.v.size());
}

ExperimentConfig tiny_regularity() {
  ExperimentConfig c;
  c.experiment = Experiment::regularity;
  c.d = 1;
  c.m = 1;
  c.p = 2.0;
  c.n_t = 64;
  c.box_t = 2.0 * M_PI;
  c.trials = 3;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("normalized fills defaults and validates") {
  ExperimentConfig c;
  c.experiment = Experiment::trace;
  c.d = 2;
  const ExperimentConfig n = normalized(c);
  CHECK(n.q == n.p);
  CHECK(n.n_x == 64);
  CHECK(n.n_t == 1024);
  CHECK(n.box_t == doctest::Approx(2.0 * M_PI));
  CHECK(n.box_x == doctest::Approx(2.0 * M_PI));
  ExperimentConfig dec;
  dec.experiment = Experiment::decay;
  dec.d = 3;
  const ExperimentConfig nd = normalized(dec);
  CHECK(nd.box_t == 80.0);
  CHECK(nd.n_t == 256);
  CHECK(nd.box_x == 38.0);
  CHECK(nd.n_x == 64);
  ExperimentConfig sob;
  sob.experiment = Experiment::corollary_sobolev;
  sob.m = 2;
  CHECK(normalized(sob).s == 4.0);

  ExperimentConfig bad = tiny_regularity();
  bad.d = 0;
  CHECK_THROWS_AS(normalized(bad), std::invalid_argument);
  bad = tiny_regularity();
  bad.trials = 0;
  CHECK_THROWS_AS(normalized(bad), std::invalid_argument);
  bad = tiny_regularity();
  bad.p = 0.5;
  CHECK_THROWS_AS(normalized(bad), std::invalid_argument);
  bad = tiny_regularity();
  bad.p = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(normalized(bad), std::invalid_argument);
  bad = tiny_regularity();
  bad.m = 0;
  CHECK_THROWS_AS(normalized(bad), std::invalid_argument);
}

TEST_CASE("experiment and family names round-trip") {
  for (Experiment e :
       {Experiment::regularity, Experiment::trace, Experiment::corollary_sobolev,
        Experiment::corollary_bessel, Experiment::corollary_besov,
        Experiment::neumann_variant, Experiment::decay})
    CHECK(experiment_from_string(to_string(e)) == e);
  for (Family f : {Family::dyadic_block, Family::gaussian_bump,
                   Family::random_bandlimited, Family::caloric_trace})
    CHECK(family_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(experiment_from_string("nope"), std::invalid_argument);
  CHECK_THROWS_AS(family_from_string("nope"), std::invalid_argument);
}

TEST_CASE("config hash separates configs and ignores nothing") {
  ExperimentConfig a = tiny_regularity();
  ExperimentConfig b = a;
  CHECK(canonical_config(a) == canonical_config(b));
  b.seed = 6;
  CHECK(canonical_config(a) != canonical_config(b));
  b = a;
  b.p = 4.0;
  CHECK(canonical_config(a) != canonical_config(b));
}

TEST_CASE("families are deterministic, real and mean-free") {
  const ExperimentConfig base = normalized(tiny_regularity());
  const Grid g = config_grid(base);
  for (Family fam : {Family::dyadic_block, Family::gaussian_bump,
                     Family::random_bandlimited, Family::caloric_trace}) {
    ExperimentConfig c = base;
    c.family = fam;
    c.block_j = 1;
    Rng r1(42), r2(42), r3(7);
    const SampledField a = make_family(c, g, r1);
    const SampledField b = make_family(c, g, r2);
    const SampledField other = make_family(c, g, r3);
    CHECK(a.v == b.v);  // bit-identical at equal seeds
    CHECK(a.v != other.v);
    CHECK(max_abs(a) > 0.0);
    CHECK(std::abs(mean(a)) <= 1e-13 * max_abs(a));
    for (const auto& z : a.v) CHECK(z.imag() == 0.0);
  }
}

TEST_CASE("dyadic_block spectra stay inside their shell") {
  ExperimentConfig c = normalized(tiny_regularity());
  c.family = Family::dyadic_block;
  c.block_j = 1;
  const Grid g = config_grid(c);
  Rng rng(3);
  const SampledField u = make_family(c, g, rng);
  const SpectralField f = forward(u);
  const BandRange range = active_bands(g);
  double inside = 0.0, outside = 0.0;
  for (int j = range.j_min; j <= range.j_max; ++j) {
    double e = 0.0;
    for (const auto& z : apply_band(j, f).c) e += std::norm(z);
    if (std::abs(j - c.block_j) <= 1)
      inside += e;
    else
      outside += e;
  }
  CHECK(inside > 0.0);
  CHECK(outside <= 1e-20 * inside);
  // a block with no lattice support is rejected
  c.block_j = 40;
  Rng rng2(3);
  CHECK_THROWS_AS(make_family(c, g, rng2), std::invalid_argument);
}

TEST_CASE("dilate_field rescales the boxes only") {
  const Grid g = make_grid(2, 4.0, 8.0, 8, 16);
  SampledField u = zeros_sampled(g);
  u.v[5] = cplx(2.0, 0.0);
  const SampledField v = dilate_field(u, 2);
  CHECK(v.grid.box_x == doctest::Approx(1.0));
  CHECK(v.grid.box_t == doctest::Approx(0.5));
  CHECK(v.grid.n_x == 8);
  CHECK(v.v == u.v);
  const SampledField w = dilate_field(u, -1);
  CHECK(w.grid.box_x == doctest::Approx(8.0));
  CHECK(w.grid.box_t == doctest::Approx(32.0));
}

TEST_CASE("regularity run produces positive finite ratios") {
  const EstimateReport r = run_regularity(tiny_regularity());
  REQUIRE(r.trials.size() == 3);
  CHECK(r.degenerate_trials == 0);
  for (const auto& t : r.trials) {
    CHECK(t.lhs > 0.0);
    CHECK(t.rhs > 0.0);
    CHECK(std::isfinite(t.ratio));
    CHECK(t.ratio > 0.0);
    CHECK(t.ratio >= r.ratio_min);
    CHECK(t.ratio <= r.ratio_max);
  }
  double log_acc = 0.0;
  for (const auto& t : r.trials) log_acc += std::log(t.ratio);
  CHECK(r.ratio_geomean ==
        doctest::Approx(std::exp(log_acc / 3.0)).epsilon(1e-12));
  CHECK(r.ratio_geomean >= r.ratio_min);
  CHECK(r.ratio_geomean <= r.ratio_max);
}

TEST_CASE("reports repeat byte for byte") {
  const EstimateReport r1 = run_regularity(tiny_regularity());
  const EstimateReport r2 = run_regularity(tiny_regularity());
  for (ReportFormat f : {ReportFormat::csv, ReportFormat::json}) {
    std::ostringstream a, b;
    emit_report(r1, a, f);
    emit_report(r2, b, f);
    CHECK(a.str() == b.str());
    CHECK(!a.str().empty());
  }
}

TEST_CASE("csv layout is the pinned header plus one row per trial") {
  const EstimateReport r = run_regularity(tiny_regularity());
  std::ostringstream os;
  emit_report(r, os, ReportFormat::csv);
  std::istringstream in(os.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "experiment,family,seed,trial,d,m_or_s,p,q,lhs,rhs,ratio");
  int rows = 0;
  double first_lhs = -1.0;
  while (std::getline(in, line)) {
    if (rows == 0) {
      // the lhs column survives a text round trip exactly
      std::size_t pos = 0;
      for (int comma = 0; comma < 8; ++comma) pos = line.find(',', pos) + 1;
      first_lhs = std::strtod(line.c_str() + pos, nullptr);
    }
    ++rows;
  }
  CHECK(rows == 3);
  CHECK(first_lhs == r.trials[0].lhs);
  // a report with no trials still prints the header
  EstimateReport empty;
  empty.config = normalized(tiny_regularity());
  std::ostringstream eo;
  emit_report(empty, eo, ReportFormat::csv);
  CHECK(eo.str() == "experiment,family,seed,trial,d,m_or_s,p,q,lhs,rhs,ratio\n");
}

TEST_CASE("trace and corollary runs share the ratio discipline") {
  ExperimentConfig c = tiny_regularity();
  c.experiment = Experiment::trace;
  const EstimateReport tr = run_trace(c);
  CHECK(tr.ratio_min > 0.0);
  CHECK(tr.ratio_max < 1e3 * tr.ratio_min);

  c.experiment = Experiment::corollary_besov;
  c.s = 1.0;
  const EstimateReport cb = run_corollary(c);
  CHECK(cb.ratio_min > 0.0);
  CHECK(cb.degenerate_trials == 0);

  c.experiment = Experiment::neumann_variant;
  c.m = 2;  // boundary index m - 1 - 1/p stays positive
  const EstimateReport nv = run_neumann_variant(c);
  CHECK(nv.ratio_min > 0.0);

  c.experiment = Experiment::regularity;
  CHECK_THROWS_AS(run_corollary(c), std::invalid_argument);
}

TEST_CASE("block-scale drift stays small for the first-order estimate") {
  double lo = 0.0, hi = 0.0;
  for (int j : {1, 2}) {
    ExperimentConfig c = tiny_regularity();
    c.n_t = 256;
    c.family = Family::dyadic_block;
    c.block_j = j;
    c.trials = 4;
    const double gm = run_regularity(c).ratio_geomean;
    if (lo == 0.0) lo = hi = gm;
    lo = std::min(lo, gm);
    hi = std::max(hi, gm);
  }
  CHECK(hi / lo <= 1.2);
}

TEST_CASE("decay run fits positive rates on the small d=1 grid") {
  ExperimentConfig c;
  c.experiment = Experiment::decay;
  c.d = 1;
  const EstimateReport r = run_decay(c);
  REQUIRE(!r.decay.empty());
  CHECK(r.decay.size() == 9);  // (alpha_d, beta) pairs up to order 4
  for (const auto& rec : r.decay) {
    CHECK(rec.rate > 0.0);
    CHECK(rec.prefactor > 0.0);
    CHECK(rec.x.size() == rec.values.size());
    for (double v : rec.values) CHECK(v > 0.0);
  }
  std::ostringstream os;
  emit_report(r, os, ReportFormat::json);
  CHECK(os.str().find("\"decay\"") != std::string::npos);
  CHECK(os.str().find("\"rate\"") != std::string::npos);
}

TEST_CASE("run_experiment dispatches on the config") {
  ExperimentConfig c = tiny_regularity();
  const EstimateReport a = run_experiment(c);
  const EstimateReport b = run_regularity(c);
  CHECK(a.ratio_geomean == b.ratio_geomean);
  CHECK(a.config_hash == b.config_hash);
}

}  // TEST_SUITE
