#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mls/oracle.hpp"
#include "mls/samplers.hpp"
#include "mls/transport.hpp"

namespace mls {

enum class ExperimentKind { Blr, SimplexQuadratic, Dirichlet, Custom };

std::string to_string(ExperimentKind k);
std::string to_string(SamplerKind k);

// Declarative description of one experiment run.  Parsed from a
// line-oriented `key = value` file with a single [section] header naming
// the experiment; see load_config.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Custom;
  SamplerKind sampler = SamplerKind::MLA;
  int dimension = 10;
  double step_size = 0.005;
  int inner_steps = 10;
  long iterations = 30;
  int chains = 30;
  int trials = 10;
  long burn_in = 0;
  std::uint64_t seed = 0;

  // blr
  int n_pairs = 1000;
  double theta_star_fill = 0.9;

  // simplex_quadratic (and custom quadratic potentials)
  std::uint64_t matrix_seed = 0;
  double pla_step_size = 1e-6;

  // dirichlet / weighted maps: (a_0, ..., a_d), boundary weight first
  Vector weights;

  // custom only
  MapKind custom_map = MapKind::BoxLogBarrier;
  PotentialKind custom_potential = PotentialKind::Zero;

  void validate() const;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

// Parses the config format: UTF-8, `#` comments, blank lines ignored,
// one `[blr|simplex_quadratic|dirichlet|custom]` header, then
// `key = value` lines.  Unknown or duplicate keys are ParseErrors with
// the line number; violated invariants are ValidationErrors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize(const ExperimentConfig& cfg);

// One metric observation.  Trial indices are 1-based; trial 0 carries
// the trial-averaged curves (metric name suffixed `_avg`).
struct RunRecord {
  std::string experiment;
  std::string sampler;
  int inner_steps = 1;
  int trial = 0;
  long iteration = 0;
  std::string metric;
  double value = 0.0;
};

bool operator==(const RunRecord& a, const RunRecord& b);

// Synthetic logistic data: X_i uniform on the l1 ball, Y_i Bernoulli of
// sigma(<theta_star, X_i>).  Consumes, per pair, one l1-ball draw then
// one label uniform.
LogisticDataset generate_logistic_data(int dim, int n,
                                       const Vector& theta_star,
                                       GaussianStream& noise);

// Noise streams are derived from (seed, tag, trial, chain) where
// tag = experiment base (blr 0x10, simplex_quadratic 0x20,
// dirichlet 0x30, custom 0x40) plus role (0 chains, 1 data,
// 2 reference, 3 matrix).  Chains are indexed from 0; per-trial roles
// use chain 0.
//
// All experiments initialize every chain at the domain center (origin
// for the box, barycenter for the simplex).  Per-trial records cover
// iterations 1..N (plus iteration 0 for the blr running estimate);
// averaged records cover 1..N.
//
// threads <= 0 selects the hardware concurrency.
std::vector<RunRecord> run_experiment_blr(const ExperimentConfig& cfg,
                                          int threads = 0);
std::vector<RunRecord> run_experiment_simplex_quadratic(
    const ExperimentConfig& cfg, int threads = 0);
std::vector<RunRecord> run_experiment_dirichlet(const ExperimentConfig& cfg,
                                                int threads = 0);

// Single run (`sample` command): one trial of the configured sampler
// only.  Custom experiments record per-iteration `mean_norm` and
// `var_trace` of the chain cloud.
std::vector<RunRecord> run_single(const ExperimentConfig& cfg,
                                  int threads = 0);

// Header `experiment,sampler,inner_steps,trial,iteration,metric,value`,
// rows sorted by (sampler, inner_steps, trial, iteration, metric),
// values printed with round-trip-exact shortest decimal form.
void write_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> read_csv(const std::string& path);

// Dataset export, header `y,x1,...,xd`.
void write_dataset_csv(const LogisticDataset& ds, const std::string& path);

}  // namespace mls
