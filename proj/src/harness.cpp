#include "mls/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace mls {

namespace {

// Stream-tag layout: experiment base plus role offset.
constexpr std::uint32_t kRoleChain = 0;
constexpr std::uint32_t kRoleData = 1;
constexpr std::uint32_t kRoleReference = 2;
constexpr std::uint32_t kRoleMatrix = 3;

std::uint32_t tag_base(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Blr:
      return 0x10;
    case ExperimentKind::SimplexQuadratic:
      return 0x20;
    case ExperimentKind::Dirichlet:
      return 0x30;
    case ExperimentKind::Custom:
      return 0x40;
  }
  return 0;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& raw, int line) {
  double v = 0.0;
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    parse_fail(line, "expected a number, got '" + raw + "'");
  return v;
}

long parse_long(const std::string& raw, int line) {
  long v = 0;
  const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (res.ec != std::errc() || res.ptr != raw.data() + raw.size())
    parse_fail(line, "expected an integer, got '" + raw + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& raw, int line) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (res.ec != std::errc() || res.ptr != raw.data() + raw.size())
    parse_fail(line, "expected an unsigned integer, got '" + raw + "'");
  return v;
}

Vector parse_vector(const std::string& raw, int line) {
  std::vector<double> vals;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    vals.push_back(parse_double(trim(item), line));
  }
  if (vals.empty()) parse_fail(line, "expected a comma-separated vector");
  return Eigen::Map<Vector>(vals.data(), static_cast<long>(vals.size()));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void parallel_for(int count, int threads,
                  const std::function<void(int)>& fn) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Blr:
      return "blr";
    case ExperimentKind::SimplexQuadratic:
      return "simplex_quadratic";
    case ExperimentKind::Dirichlet:
      return "dirichlet";
    case ExperimentKind::Custom:
      return "custom";
  }
  return "custom";
}

std::string to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::MLA:
      return "mla";
    case SamplerKind::ULA:
      return "ula";
    case SamplerKind::PLA:
      return "pla";
  }
  return "mla";
}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  if (dimension < 1) throw ValidationError("config: dimension must be >= 1");
  if (!(step_size > 0.0))
    throw ValidationError("config: step_size must be positive");
  if (!(pla_step_size > 0.0))
    throw ValidationError("config: pla_step_size must be positive");
  if (inner_steps < 1)
    throw ValidationError("config: inner_steps must be >= 1");
  if (iterations < 1) throw ValidationError("config: iterations must be >= 1");
  if (chains < 1) throw ValidationError("config: chains must be >= 1");
  if (trials < 1) throw ValidationError("config: trials must be >= 1");
  if (n_pairs < 1) throw ValidationError("config: n must be >= 1");
  if (burn_in < 0 || burn_in >= iterations)
    throw ValidationError("config: burn_in must satisfy 0 <= burn_in < iterations");
  if (!std::isfinite(theta_star_fill))
    throw ValidationError("config: theta_star must be finite");

  const bool wants_weights =
      experiment == ExperimentKind::Dirichlet ||
      (experiment == ExperimentKind::Custom &&
       (custom_map == MapKind::WeightedSimplexBarrier ||
        custom_potential == PotentialKind::WeightedBarrier));
  if (wants_weights) {
    if (weights.size() != dimension + 1)
      throw ValidationError("config: weights must hold dimension + 1 values");
    if (weights.minCoeff() <= 0.0)
      throw ValidationError("config: weights must be positive");
  }
  if (experiment == ExperimentKind::Custom &&
      custom_potential == PotentialKind::WeightedBarrier &&
      sampler != SamplerKind::MLA) {
    throw ValidationError(
        "config: the barrier potential requires the mla sampler (its "
        "gradient is undefined outside the open simplex)");
  }
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.experiment == b.experiment && a.sampler == b.sampler &&
         a.dimension == b.dimension && a.step_size == b.step_size &&
         a.inner_steps == b.inner_steps && a.iterations == b.iterations &&
         a.chains == b.chains && a.trials == b.trials &&
         a.burn_in == b.burn_in && a.seed == b.seed &&
         a.n_pairs == b.n_pairs && a.theta_star_fill == b.theta_star_fill &&
         a.matrix_seed == b.matrix_seed &&
         a.pla_step_size == b.pla_step_size &&
         a.weights.size() == b.weights.size() && a.weights == b.weights &&
         a.custom_map == b.custom_map &&
         a.custom_potential == b.custom_potential;
}

namespace {

ExperimentConfig defaults_for(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::Blr:
      cfg.dimension = 10;
      cfg.iterations = 100;
      break;
    case ExperimentKind::SimplexQuadratic:
      cfg.dimension = 100;
      cfg.iterations = 30;
      break;
    case ExperimentKind::Dirichlet:
      cfg.dimension = 10;
      cfg.iterations = 30;
      break;
    case ExperimentKind::Custom:
      cfg.dimension = 10;
      cfg.iterations = 100;
      cfg.trials = 1;
      break;
  }
  return cfg;
}

const std::set<std::string> kCommonKeys = {
    "sampler", "dimension", "step_size", "inner_steps", "iterations",
    "chains",  "trials",    "burn_in",   "seed"};

bool key_allowed(ExperimentKind kind, const std::string& key) {
  if (kCommonKeys.count(key)) return true;
  switch (kind) {
    case ExperimentKind::Blr:
      return key == "n" || key == "theta_star";
    case ExperimentKind::SimplexQuadratic:
      return key == "matrix_seed" || key == "pla_step_size";
    case ExperimentKind::Dirichlet:
      return key == "weights";
    case ExperimentKind::Custom:
      return key == "map" || key == "potential" || key == "weights" ||
             key == "matrix_seed";
  }
  return false;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::stringstream input(text);
  std::string raw;
  int line_no = 0;
  bool have_section = false;
  bool dimension_given = false;
  bool weights_given = false;
  bool matrix_seed_given = false;
  ExperimentConfig cfg;
  std::set<std::string> seen;

  while (std::getline(input, raw)) {
    ++line_no;
    std::string line = trim(raw);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "unterminated section header");
      if (have_section) parse_fail(line_no, "more than one experiment section");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "blr") {
        cfg = defaults_for(ExperimentKind::Blr);
      } else if (name == "simplex_quadratic") {
        cfg = defaults_for(ExperimentKind::SimplexQuadratic);
      } else if (name == "dirichlet") {
        cfg = defaults_for(ExperimentKind::Dirichlet);
      } else if (name == "custom") {
        cfg = defaults_for(ExperimentKind::Custom);
      } else {
        parse_fail(line_no, "unknown experiment '" + name + "'");
      }
      have_section = true;
      continue;
    }

    if (!have_section)
      parse_fail(line_no, "key before the [experiment] section header");

    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(line_no, "empty key");
    if (value.empty()) parse_fail(line_no, "empty value for '" + key + "'");
    if (!key_allowed(cfg.experiment, key))
      parse_fail(line_no, "unknown key '" + key + "'");
    if (!seen.insert(key).second)
      parse_fail(line_no, "duplicate key '" + key + "'");

    if (key == "sampler") {
      if (value == "mla") cfg.sampler = SamplerKind::MLA;
      else if (value == "ula") cfg.sampler = SamplerKind::ULA;
      else if (value == "pla") cfg.sampler = SamplerKind::PLA;
      else parse_fail(line_no, "unknown sampler '" + value + "'");
    } else if (key == "dimension") {
      cfg.dimension = static_cast<int>(parse_long(value, line_no));
      dimension_given = true;
    } else if (key == "step_size") {
      cfg.step_size = parse_double(value, line_no);
    } else if (key == "inner_steps") {
      cfg.inner_steps = static_cast<int>(parse_long(value, line_no));
    } else if (key == "iterations") {
      cfg.iterations = parse_long(value, line_no);
    } else if (key == "chains") {
      cfg.chains = static_cast<int>(parse_long(value, line_no));
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(parse_long(value, line_no));
    } else if (key == "burn_in") {
      cfg.burn_in = parse_long(value, line_no);
    } else if (key == "seed") {
      cfg.seed = parse_u64(value, line_no);
    } else if (key == "n") {
      cfg.n_pairs = static_cast<int>(parse_long(value, line_no));
    } else if (key == "theta_star") {
      cfg.theta_star_fill = parse_double(value, line_no);
    } else if (key == "matrix_seed") {
      cfg.matrix_seed = parse_u64(value, line_no);
      matrix_seed_given = true;
    } else if (key == "pla_step_size") {
      cfg.pla_step_size = parse_double(value, line_no);
    } else if (key == "weights") {
      cfg.weights = parse_vector(value, line_no);
      weights_given = true;
    } else if (key == "map") {
      if (value == "euclidean") cfg.custom_map = MapKind::Euclidean;
      else if (value == "box") cfg.custom_map = MapKind::BoxLogBarrier;
      else if (value == "simplex") cfg.custom_map = MapKind::SimplexBarrier;
      else if (value == "weighted_simplex")
        cfg.custom_map = MapKind::WeightedSimplexBarrier;
      else parse_fail(line_no, "unknown map '" + value + "'");
    } else if (key == "potential") {
      if (value == "zero") cfg.custom_potential = PotentialKind::Zero;
      else if (value == "quadratic")
        cfg.custom_potential = PotentialKind::Quadratic;
      else if (value == "dirichlet")
        cfg.custom_potential = PotentialKind::WeightedBarrier;
      else parse_fail(line_no, "unknown potential '" + value + "'");
    }
  }

  if (!have_section) throw ParseError("missing [experiment] section header");

  // Weights define the dimension when present; defaults fill the rest.
  const bool wants_weights =
      cfg.experiment == ExperimentKind::Dirichlet ||
      (cfg.experiment == ExperimentKind::Custom &&
       (cfg.custom_map == MapKind::WeightedSimplexBarrier ||
        cfg.custom_potential == PotentialKind::WeightedBarrier));
  if (weights_given) {
    if (dimension_given &&
        cfg.weights.size() != cfg.dimension + 1) {
      throw ValidationError(
          "config: weights must hold dimension + 1 values");
    }
    cfg.dimension = static_cast<int>(cfg.weights.size()) - 1;
  } else if (wants_weights) {
    cfg.weights = Vector::Constant(cfg.dimension + 1, 2.0);
  }
  if (!matrix_seed_given) cfg.matrix_seed = cfg.seed;

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[" << to_string(cfg.experiment) << "]\n";
  out << "sampler = " << to_string(cfg.sampler) << "\n";
  out << "dimension = " << cfg.dimension << "\n";
  out << "step_size = " << format_double(cfg.step_size) << "\n";
  out << "inner_steps = " << cfg.inner_steps << "\n";
  out << "iterations = " << cfg.iterations << "\n";
  out << "chains = " << cfg.chains << "\n";
  out << "trials = " << cfg.trials << "\n";
  out << "burn_in = " << cfg.burn_in << "\n";
  out << "seed = " << cfg.seed << "\n";
  switch (cfg.experiment) {
    case ExperimentKind::Blr:
      out << "n = " << cfg.n_pairs << "\n";
      out << "theta_star = " << format_double(cfg.theta_star_fill) << "\n";
      break;
    case ExperimentKind::SimplexQuadratic:
      out << "matrix_seed = " << cfg.matrix_seed << "\n";
      out << "pla_step_size = " << format_double(cfg.pla_step_size) << "\n";
      break;
    case ExperimentKind::Dirichlet:
    case ExperimentKind::Custom: {
      if (cfg.experiment == ExperimentKind::Custom) {
        const char* map_name = "box";
        if (cfg.custom_map == MapKind::Euclidean) map_name = "euclidean";
        if (cfg.custom_map == MapKind::SimplexBarrier) map_name = "simplex";
        if (cfg.custom_map == MapKind::WeightedSimplexBarrier)
          map_name = "weighted_simplex";
        const char* pot_name = "zero";
        if (cfg.custom_potential == PotentialKind::Quadratic)
          pot_name = "quadratic";
        if (cfg.custom_potential == PotentialKind::WeightedBarrier)
          pot_name = "dirichlet";
        out << "map = " << map_name << "\n";
        out << "potential = " << pot_name << "\n";
        out << "matrix_seed = " << cfg.matrix_seed << "\n";
      }
      if (cfg.weights.size() > 0) {
        out << "weights = ";
        for (int i = 0; i < cfg.weights.size(); ++i) {
          if (i) out << ",";
          out << format_double(cfg.weights[i]);
        }
        out << "\n";
      }
      break;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Data generation

LogisticDataset generate_logistic_data(int dim, int n,
                                       const Vector& theta_star,
                                       GaussianStream& noise) {
  if (dim < 1 || n < 1) {
    throw ValidationError("generate_logistic_data: dim and n must be >= 1");
  }
  LogisticDataset ds;
  ds.features.resize(n, dim);
  ds.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const Vector x = sample_uniform_l1_ball(dim, noise);
    ds.features.row(i) = x.transpose();
    const double t = theta_star.dot(x);
    const double p = 1.0 / (1.0 + std::exp(-t));
    ds.labels[i] = noise.uniform() < p ? 1.0 : 0.0;
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Experiment engines

namespace {

std::vector<Trajectory> run_chain_set(const MirrorMap& map,
                                      const Potential& pot, SamplerKind kind,
                                      const Vector& x0,
                                      const SamplerConfig& base, int n_chains,
                                      std::uint64_t seed, std::uint32_t tag,
                                      int trial, int threads) {
  std::vector<Trajectory> out(n_chains);
  parallel_for(n_chains, threads, [&](int c) {
    GaussianStream stream = GaussianStream::derive(
        seed, tag, static_cast<std::uint32_t>(trial),
        static_cast<std::uint32_t>(c));
    out[c] = run_chain(map, pot, kind, x0, base, stream);
  });
  return out;
}

EmpiricalMeasure cloud_at(const std::vector<Trajectory>& trajs, long k) {
  Eigen::MatrixXd pts(trajs.size(), trajs.front().states.front().size());
  for (std::size_t c = 0; c < trajs.size(); ++c)
    pts.row(c) = trajs[c].states[static_cast<std::size_t>(k)].transpose();
  return EmpiricalMeasure(std::move(pts));
}

// Mean over trials per (sampler, inner, iteration, metric), emitted as
// trial-0 records with an `_avg` metric suffix, iterations 1..N only.
void append_trial_averages(std::vector<RunRecord>& records) {
  std::map<std::tuple<std::string, int, long, std::string>,
           std::pair<double, int>>
      acc;
  for (const auto& r : records) {
    if (r.trial == 0 || r.iteration == 0) continue;
    auto& slot = acc[{r.sampler, r.inner_steps, r.iteration, r.metric}];
    slot.first += r.value;
    slot.second += 1;
  }
  const std::string experiment =
      records.empty() ? "" : records.front().experiment;
  for (const auto& [key, sum_count] : acc) {
    records.push_back(RunRecord{experiment, std::get<0>(key),
                                std::get<1>(key), 0, std::get<2>(key),
                                std::get<3>(key) + "_avg",
                                sum_count.first / sum_count.second});
  }
}

Eigen::MatrixXd build_quadratic_matrix(int dim, std::uint64_t matrix_seed,
                                       std::uint32_t tag) {
  GaussianStream stream = GaussianStream::derive(matrix_seed, tag, 0, 0);
  Eigen::MatrixXd tilde(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) tilde(i, j) = 2.0 * stream.uniform() - 1.0;
  }
  Eigen::MatrixXd a = tilde * tilde.transpose();
  a /= a.cwiseAbs().maxCoeff();
  return a;
}

std::vector<RunRecord> blr_trials(const ExperimentConfig& cfg,
                                  const std::vector<SamplerKind>& samplers,
                                  int n_trials, int threads) {
  cfg.validate();
  const int d = cfg.dimension;
  const Vector theta_star = Vector::Constant(d, cfg.theta_star_fill);
  const MirrorMap map = MirrorMap::box_log_barrier(d);
  const Vector x0 = Vector::Zero(d);
  const std::uint32_t base = tag_base(ExperimentKind::Blr);

  std::vector<RunRecord> records;
  for (int t = 1; t <= n_trials; ++t) {
    GaussianStream data_stream =
        GaussianStream::derive(cfg.seed, base + kRoleData, t, 0);
    const Potential pot = Potential::logistic_regression(
        generate_logistic_data(d, cfg.n_pairs, theta_star, data_stream));
    for (const SamplerKind kind : samplers) {
      SamplerConfig sc;
      sc.step_size = cfg.step_size;
      sc.inner_steps = kind == SamplerKind::MLA ? cfg.inner_steps : 1;
      sc.iterations = cfg.iterations;
      sc.seed = cfg.seed;
      const auto trajs = run_chain_set(map, pot, kind, x0, sc, cfg.chains,
                                       cfg.seed, base + kRoleChain, t, threads);
      for (long k = 0; k <= cfg.iterations; ++k) {
        Vector mean = Vector::Zero(d);
        for (const auto& traj : trajs)
          mean += traj.states[static_cast<std::size_t>(k)];
        mean /= static_cast<double>(trajs.size());
        records.push_back(RunRecord{"blr", to_string(kind), sc.inner_steps, t,
                                    k, "pm_error",
                                    (mean - theta_star).norm()});
      }
    }
  }
  return records;
}

std::vector<RunRecord> simplex_quadratic_trials(
    const ExperimentConfig& cfg, const std::vector<SamplerKind>& samplers,
    int n_trials, int threads) {
  cfg.validate();
  const int d = cfg.dimension;
  const MirrorMap map = MirrorMap::simplex_barrier(d);
  const Vector x0 = Vector::Constant(d, 1.0 / (d + 1));
  const std::uint32_t base = tag_base(ExperimentKind::SimplexQuadratic);
  const Eigen::MatrixXd a =
      build_quadratic_matrix(d, cfg.matrix_seed, base + kRoleMatrix);
  const Potential pot = Potential::quadratic(a);
  // Rejection sampling is only viable at low dimension; above that the
  // reference is a long MLA run and the metric name says so.
  const bool exact_reference = d <= 3;
  const std::string metric = exact_reference ? "w2sq" : "w2sq_vs_selfref";

  std::vector<RunRecord> records;
  for (int t = 1; t <= n_trials; ++t) {
    EmpiricalMeasure reference;
    if (exact_reference) {
      const RejectionSpec spec = RejectionSpec::simplex_quadratic(a);
      GaussianStream ref_stream =
          GaussianStream::derive(cfg.seed, base + kRoleReference, t, 0);
      Eigen::MatrixXd pts(cfg.chains, d);
      for (int i = 0; i < cfg.chains; ++i)
        pts.row(i) = rejection_sample(spec, ref_stream).transpose();
      reference = EmpiricalMeasure(std::move(pts));
    } else {
      SamplerConfig ref_cfg;
      ref_cfg.step_size = cfg.step_size;
      ref_cfg.inner_steps = cfg.inner_steps;
      ref_cfg.iterations = std::max(10 * cfg.iterations, 300L);
      ref_cfg.seed = cfg.seed;
      const auto ref_trajs =
          run_chain_set(map, pot, SamplerKind::MLA, x0, ref_cfg, cfg.chains,
                        cfg.seed, base + kRoleReference, t, threads);
      reference = cloud_at(ref_trajs, ref_cfg.iterations);
    }
    for (const SamplerKind kind : samplers) {
      SamplerConfig sc;
      sc.step_size =
          kind == SamplerKind::PLA ? cfg.pla_step_size : cfg.step_size;
      sc.inner_steps = kind == SamplerKind::MLA ? cfg.inner_steps : 1;
      sc.iterations = cfg.iterations;
      sc.seed = cfg.seed;
      const auto trajs = run_chain_set(map, pot, kind, x0, sc, cfg.chains,
                                       cfg.seed, base + kRoleChain, t, threads);
      for (long k = 1; k <= cfg.iterations; ++k) {
        records.push_back(RunRecord{
            "simplex_quadratic", to_string(kind), sc.inner_steps, t, k, metric,
            empirical_w2_sq(cloud_at(trajs, k), reference)});
      }
    }
  }
  return records;
}

std::vector<RunRecord> dirichlet_trials(const ExperimentConfig& cfg,
                                        const std::vector<int>& inner_sweep,
                                        int n_trials, int threads) {
  cfg.validate();
  const int d = cfg.dimension;
  const MirrorMap map = MirrorMap::weighted_simplex_barrier(cfg.weights);
  const Potential pot = Potential::weighted_barrier(cfg.weights);
  const Vector x0 = Vector::Constant(d, 1.0 / (d + 1));
  const std::uint32_t base = tag_base(ExperimentKind::Dirichlet);

  std::vector<RunRecord> records;
  for (int t = 1; t <= n_trials; ++t) {
    GaussianStream ref_stream =
        GaussianStream::derive(cfg.seed, base + kRoleReference, t, 0);
    Eigen::MatrixXd pts(cfg.chains, d);
    for (int i = 0; i < cfg.chains; ++i)
      pts.row(i) = sample_dirichlet_gamma(cfg.weights, ref_stream).transpose();
    const EmpiricalMeasure reference(std::move(pts));
    for (const int inner : inner_sweep) {
      SamplerConfig sc;
      sc.step_size = cfg.step_size;
      sc.inner_steps = inner;
      sc.iterations = cfg.iterations;
      sc.seed = cfg.seed;
      const auto trajs =
          run_chain_set(map, pot, SamplerKind::MLA, x0, sc, cfg.chains,
                        cfg.seed, base + kRoleChain, t, threads);
      for (long k = 1; k <= cfg.iterations; ++k) {
        records.push_back(RunRecord{"dirichlet", "mla", inner, t, k, "w2sq",
                                    empirical_w2_sq(cloud_at(trajs, k),
                                                    reference)});
      }
    }
  }
  return records;
}

std::vector<RunRecord> custom_single(const ExperimentConfig& cfg,
                                     int threads) {
  cfg.validate();
  const int d = cfg.dimension;
  MirrorMap map = MirrorMap::euclidean(d);
  Vector x0 = Vector::Zero(d);
  switch (cfg.custom_map) {
    case MapKind::Euclidean:
      break;
    case MapKind::BoxLogBarrier:
      map = MirrorMap::box_log_barrier(d);
      break;
    case MapKind::SimplexBarrier:
      map = MirrorMap::simplex_barrier(d);
      x0 = Vector::Constant(d, 1.0 / (d + 1));
      break;
    case MapKind::WeightedSimplexBarrier:
      map = MirrorMap::weighted_simplex_barrier(cfg.weights);
      x0 = Vector::Constant(d, 1.0 / (d + 1));
      break;
  }
  Potential pot = Potential::zero(d);
  if (cfg.custom_potential == PotentialKind::Quadratic) {
    pot = Potential::quadratic(build_quadratic_matrix(
        d, cfg.matrix_seed,
        tag_base(ExperimentKind::Custom) + kRoleMatrix));
  } else if (cfg.custom_potential == PotentialKind::WeightedBarrier) {
    pot = Potential::weighted_barrier(cfg.weights);
  }

  SamplerConfig sc;
  sc.step_size = cfg.step_size;
  sc.inner_steps = cfg.sampler == SamplerKind::MLA ? cfg.inner_steps : 1;
  sc.iterations = cfg.iterations;
  sc.seed = cfg.seed;
  const auto trajs = run_chain_set(
      map, pot, cfg.sampler, x0, sc, cfg.chains, cfg.seed,
      tag_base(ExperimentKind::Custom) + kRoleChain, 1, threads);

  std::vector<RunRecord> records;
  for (long k = 1; k <= cfg.iterations; ++k) {
    const EmpiricalMeasure cloud = cloud_at(trajs, k);
    records.push_back(RunRecord{"custom", to_string(cfg.sampler),
                                sc.inner_steps, 1, k, "mean_norm",
                                cloud.points.colwise().mean().norm()});
    if (cfg.chains >= 2) {
      records.push_back(RunRecord{
          "custom", to_string(cfg.sampler), sc.inner_steps, 1, k, "var_trace",
          per_coordinate_moments(cloud.points).variance.sum()});
    }
  }
  return records;
}

}  // namespace

std::vector<RunRecord> run_experiment_blr(const ExperimentConfig& cfg,
                                          int threads) {
  if (cfg.experiment != ExperimentKind::Blr)
    throw ValidationError("run_experiment_blr: config is not a blr config");
  auto records = blr_trials(cfg, {SamplerKind::MLA, SamplerKind::PLA},
                            cfg.trials, threads);
  append_trial_averages(records);
  return records;
}

std::vector<RunRecord> run_experiment_simplex_quadratic(
    const ExperimentConfig& cfg, int threads) {
  if (cfg.experiment != ExperimentKind::SimplexQuadratic)
    throw ValidationError(
        "run_experiment_simplex_quadratic: config mismatch");
  auto records = simplex_quadratic_trials(
      cfg, {SamplerKind::MLA, SamplerKind::PLA}, cfg.trials, threads);
  append_trial_averages(records);
  return records;
}

std::vector<RunRecord> run_experiment_dirichlet(const ExperimentConfig& cfg,
                                                int threads) {
  if (cfg.experiment != ExperimentKind::Dirichlet)
    throw ValidationError("run_experiment_dirichlet: config mismatch");
  auto records = dirichlet_trials(cfg, {1, 5, 10, 20}, cfg.trials, threads);
  append_trial_averages(records);
  return records;
}

std::vector<RunRecord> run_single(const ExperimentConfig& cfg, int threads) {
  switch (cfg.experiment) {
    case ExperimentKind::Blr:
      return blr_trials(cfg, {cfg.sampler}, 1, threads);
    case ExperimentKind::SimplexQuadratic:
      return simplex_quadratic_trials(cfg, {cfg.sampler}, 1, threads);
    case ExperimentKind::Dirichlet:
      return dirichlet_trials(cfg, {cfg.inner_steps}, 1, threads);
    case ExperimentKind::Custom:
      return custom_single(cfg, threads);
  }
  return {};
}

// ---------------------------------------------------------------------------
// CSV

bool operator==(const RunRecord& a, const RunRecord& b) {
  return a.experiment == b.experiment && a.sampler == b.sampler &&
         a.inner_steps == b.inner_steps && a.trial == b.trial &&
         a.iteration == b.iteration && a.metric == b.metric &&
         a.value == b.value;
}

void write_csv(const std::vector<RunRecord>& records,
               const std::string& path) {
  std::vector<RunRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RunRecord& a, const RunRecord& b) {
                     return std::tie(a.sampler, a.inner_steps, a.trial,
                                     a.iteration, a.metric) <
                            std::tie(b.sampler, b.inner_steps, b.trial,
                                     b.iteration, b.metric);
                   });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "experiment,sampler,inner_steps,trial,iteration,metric,value\n";
  for (const auto& r : sorted) {
    out << r.experiment << ',' << r.sampler << ',' << r.inner_steps << ','
        << r.trial << ',' << r.iteration << ',' << r.metric << ','
        << format_double(r.value) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<RunRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "experiment,sampler,inner_steps,trial,iteration,metric,value") {
    throw ParseError("line 1: bad CSV header");
  }
  std::vector<RunRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7) parse_fail(line_no, "expected 7 CSV fields");
    RunRecord r;
    r.experiment = fields[0];
    r.sampler = fields[1];
    r.inner_steps = static_cast<int>(parse_long(fields[2], line_no));
    r.trial = static_cast<int>(parse_long(fields[3], line_no));
    r.iteration = parse_long(fields[4], line_no);
    r.metric = fields[5];
    r.value = parse_double(fields[6], line_no);
    records.push_back(std::move(r));
  }
  return records;
}

void write_dataset_csv(const LogisticDataset& ds, const std::string& path) {
  ds.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "y";
  for (int j = 1; j <= ds.dimension(); ++j) out << ",x" << j;
  out << "\n";
  for (int i = 0; i < ds.count(); ++i) {
    out << static_cast<int>(ds.labels[i]);
    for (int j = 0; j < ds.dimension(); ++j)
      out << ',' << format_double(ds.features(i, j));
    out << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace mls
