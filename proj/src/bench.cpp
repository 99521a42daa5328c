#include "robustmean/bench.hpp"

#include "robustmean/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "robustmean/comparators.hpp"
#include "robustmean/diagnostics.hpp"
#include "robustmean/estimator.hpp"

namespace robustmean {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ScoreFamily make_family(FamilyKind kind, double beta, int p) {
  switch (kind) {
    case FamilyKind::Huber:
      return ScoreFamily::huber(beta);
    case FamilyKind::Catoni:
      return ScoreFamily::catoni(beta);
    case FamilyKind::Polynomial:
      return ScoreFamily::polynomial(beta, p);
  }
  throw std::logic_error("unknown family kind");
}

struct CellOutcome {
  Vector estimate;
  int iterations = 0;
  bool converged = false;
  std::optional<double> beta_used;
};

CellOutcome run_estimator(const Matrix& X, const EstimatorVariant& method) {
  CellOutcome out;
  if (const auto* m = std::get_if<MEstimatorSpec>(&method)) {
    double beta;
    if (m->beta) {
      beta = *m->beta;
    } else {
      beta = select_beta(X, m->kind, m->tune).beta_hat;
    }
    const ScoreFamily f = make_family(m->kind, beta, m->p);
    EstimatorConfig cfg{f, m->tol, m->max_iter};
    const EstimateResult fit = irls_estimate(X, cfg);
    out.estimate = fit.estimate;
    out.iterations = fit.iterations;
    out.converged = fit.converged;
    out.beta_used = beta;
  } else if (std::holds_alternative<EmpiricalMeanSpec>(method)) {
    out.estimate = empirical_mean(X);
    out.converged = true;
  } else if (const auto* g = std::get_if<GeometricMedianSpec>(&method)) {
    const GeometricMedianResult fit = geometric_median(X, g->tol, g->max_iter);
    out.estimate = fit.point;
    out.iterations = fit.iterations;
    out.converged = fit.converged;
  } else {
    const auto& mom = std::get<GmomSpec>(method);
    const GeometricMedianResult fit =
        geometric_median_of_means(X, mom.blocks, mom.tol, mom.max_iter);
    out.estimate = fit.point;
    out.iterations = fit.iterations;
    out.converged = fit.converged;
  }
  return out;
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchConfig& config) {
  if (config.datasets.empty() || config.estimators.empty()) {
    throw std::invalid_argument("benchmark needs datasets and estimators");
  }
  if (config.replicates < 1) {
    throw std::invalid_argument("replicates must be >= 1");
  }
  for (size_t a = 0; a < config.estimators.size(); ++a) {
    for (size_t b = a + 1; b < config.estimators.size(); ++b) {
      if (config.estimators[a].label == config.estimators[b].label) {
        throw std::invalid_argument("duplicate estimator label: " +
                                    config.estimators[a].label);
      }
    }
  }

  const size_t n_datasets = config.datasets.size();
  const size_t n_estimators = config.estimators.size();
  const size_t reps = static_cast<size_t>(config.replicates);
  const size_t cells = n_datasets * reps;
  std::vector<BenchRecord> records(cells * n_estimators);

  const auto work = [&](size_t cell) {
    const size_t d_idx = cell / reps;
    const size_t r_idx = cell % reps;
    DatasetSpec spec = config.datasets[d_idx].spec;
    spec.seed = mix_seed(mix_seed(config.master_seed, d_idx), r_idx);
    const Dataset data = generate(spec);
    for (size_t e_idx = 0; e_idx < n_estimators; ++e_idx) {
      BenchRecord& rec =
          records[(d_idx * n_estimators + e_idx) * reps + r_idx];
      rec.dataset_label = config.datasets[d_idx].label;
      rec.estimator_label = config.estimators[e_idx].label;
      rec.replicate = static_cast<int>(r_idx);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const CellOutcome out =
            run_estimator(data.X, config.estimators[e_idx].method);
        rec.error = (out.estimate - data.true_mean).norm();
        rec.iterations = out.iterations;
        rec.converged = out.converged;
        rec.beta_used = out.beta_used;
      } catch (const std::exception&) {
        rec.error = std::numeric_limits<double>::quiet_NaN();
        rec.converged = false;
      }
      const auto t1 = std::chrono::steady_clock::now();
      rec.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    }
  };

  const int jobs = std::max(1, config.jobs);
  if (jobs == 1 || cells == 1) {
    for (size_t cell = 0; cell < cells; ++cell) work(cell);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const size_t workers = std::min(static_cast<size_t>(jobs), cells);
    pool.reserve(workers);
    for (size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const size_t cell = next.fetch_add(1);
          if (cell >= cells) break;
          work(cell);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  if (!config.output_path.empty()) {
    write_records_csv(config.output_path, records, config.timing_in_csv);
  }
  return records;
}

void write_records_csv(const std::string& path,
                       const std::vector<BenchRecord>& records,
                       bool timing_in_csv) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open for writing: " + path);
  file << "dataset_label,estimator_label,replicate,error,wall_time_s,"
          "iterations,converged,beta_used\n";
  for (const BenchRecord& rec : records) {
    file << rec.dataset_label << ',' << rec.estimator_label << ','
         << rec.replicate << ',' << format_double(rec.error) << ',';
    if (timing_in_csv) file << format_double(rec.wall_time_s);
    file << ',' << rec.iterations << ','
         << (rec.converged ? "true" : "false") << ',';
    if (rec.beta_used) file << format_double(*rec.beta_used);
    file << '\n';
  }
  file << "# complete\n";
  if (!file.flush()) throw IoError("write failed: " + path);
}

double midpoint_quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw std::invalid_argument("quantile of empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile level must lie in [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const size_t m = values.size();
  // With h = q * m: integer h averages order statistics h and h + 1,
  // fractional h takes order statistic ceil(h).
  const double h = q * static_cast<double>(m);
  if (h == std::floor(h)) {
    const size_t k = static_cast<size_t>(h);
    if (k < 1) return values.front();
    if (k >= m) return values.back();
    return 0.5 * (values[k - 1] + values[k]);
  }
  const size_t k = static_cast<size_t>(std::ceil(h));
  return values[std::min(k, m) - 1];
}

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("summarize needs at least one record");
  }
  std::vector<SummaryRow> rows;
  std::map<std::pair<std::string, std::string>, size_t> index;
  std::vector<std::vector<double>> errors;
  std::vector<std::vector<double>> times;
  for (const BenchRecord& rec : records) {
    const auto key = std::make_pair(rec.dataset_label, rec.estimator_label);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      rows.push_back(SummaryRow{rec.dataset_label, rec.estimator_label});
      errors.emplace_back();
      times.emplace_back();
    }
    errors[it->second].push_back(rec.error);
    times[it->second].push_back(rec.wall_time_s);
  }
  for (size_t g = 0; g < rows.size(); ++g) {
    SummaryRow& row = rows[g];
    row.count = static_cast<int>(errors[g].size());
    row.median = midpoint_quantile(errors[g], 0.5);
    row.q25 = midpoint_quantile(errors[g], 0.25);
    row.q75 = midpoint_quantile(errors[g], 0.75);
    double sum = 0.0;
    double mx = errors[g].front();
    for (double e : errors[g]) {
      sum += e;
      mx = std::max(mx, e);
    }
    row.mean = sum / static_cast<double>(errors[g].size());
    row.max = mx;
    double tsum = 0.0;
    for (double t : times[g]) tsum += t;
    row.mean_wall_time_s = tsum / static_cast<double>(times[g].size());
  }
  return rows;
}

BenchConfig paper_figure_config(int replicates, std::uint64_t master_seed) {
  BenchConfig config;
  const std::vector<DatasetSpec> presets = dataset_presets();
  for (size_t i = 0; i < presets.size(); ++i) {
    config.datasets.push_back(
        {"dataset" + std::to_string(i + 1), presets[i]});
  }
  MEstimatorSpec huber;
  huber.kind = FamilyKind::Huber;
  MEstimatorSpec catoni;
  catoni.kind = FamilyKind::Catoni;
  MEstimatorSpec poly;
  poly.kind = FamilyKind::Polynomial;
  poly.p = 5;
  config.estimators.push_back({"huber", huber});
  config.estimators.push_back({"catoni", catoni});
  config.estimators.push_back({"poly", poly});
  config.estimators.push_back({"gmed", GeometricMedianSpec{}});
  config.estimators.push_back({"gmom", GmomSpec{}});
  config.replicates = replicates;
  config.master_seed = master_seed;
  return config;
}

std::vector<TailRow> tail_experiment(const TailConfig& config,
                                     const ScoreFamily& score) {
  if (config.spec.corruption) {
    throw std::invalid_argument("tail experiment expects a clean spec");
  }
  if (config.replicates < 1) {
    throw std::invalid_argument("replicates must be >= 1");
  }
  if (config.lambdas.empty()) {
    throw std::invalid_argument("lambda grid must be nonempty");
  }
  const double half_beta = score.beta() / 2.0;
  for (double lam : config.lambdas) {
    if (!(lam > 0.0) || !(lam < half_beta)) {
      throw std::invalid_argument(
          "each lambda must lie strictly inside (0, beta / 2)");
    }
  }

  Vector theta;
  if (config.theta) {
    if (config.theta->size() != config.spec.d) {
      throw std::invalid_argument("theta dimension mismatch");
    }
    theta = *config.theta;
  } else if (const auto* mix =
                 std::get_if<StudentMixture>(&config.spec.generator);
             mix && mix->components.size() == 1) {
    theta = mix->components.front().mean;  // symmetric law: mean is exact
  } else {
    DatasetSpec plug = config.spec;
    plug.n = std::max<Index>(100000, 1000000 / config.spec.d);
    plug.seed = mix_seed(config.spec.seed, ~0ull);
    const Dataset big = generate(plug);
    EstimatorConfig cfg{score, config.solver_tol, config.solver_max_iter};
    theta = irls_estimate(big.X, cfg).estimate;
  }

  std::vector<double> est_err(static_cast<size_t>(config.replicates));
  std::vector<double> infl(static_cast<size_t>(config.replicates));
  for (int r = 0; r < config.replicates; ++r) {
    DatasetSpec spec = config.spec;
    spec.seed = mix_seed(config.spec.seed, static_cast<std::uint64_t>(r));
    const Dataset data = generate(spec);
    EstimatorConfig cfg{score, config.solver_tol, config.solver_max_iter};
    const EstimateResult fit = irls_estimate(data.X, cfg);
    est_err[static_cast<size_t>(r)] = (fit.estimate - theta).norm();
    infl[static_cast<size_t>(r)] = influence_statistic(data.X, theta, score);
  }

  const double gamma = score.gamma();
  const double n = static_cast<double>(config.spec.n);
  const double exp_term = std::exp(-n * gamma * gamma / 32.0);
  const double R = static_cast<double>(config.replicates);

  std::vector<TailRow> rows;
  rows.reserve(config.lambdas.size());
  for (double lam : config.lambdas) {
    TailRow row;
    row.lambda = lam;
    const double infl_cut = lam * gamma / 4.0;
    size_t hits_est = 0;
    size_t hits_infl = 0;
    for (int r = 0; r < config.replicates; ++r) {
      if (est_err[static_cast<size_t>(r)] >= lam) ++hits_est;
      if (infl[static_cast<size_t>(r)] >= infl_cut) ++hits_infl;
    }
    row.t_estimator = static_cast<double>(hits_est) / R;
    row.t_influence = static_cast<double>(hits_infl) / R;
    const double se = std::sqrt(row.t_estimator * (1.0 - row.t_estimator) / R +
                                row.t_influence * (1.0 - row.t_influence) / R);
    row.bound_ok = row.t_estimator <= row.t_influence + exp_term + 3.0 * se;
    rows.push_back(row);
  }
  return rows;
}

void write_tail_csv(const std::string& path,
                    const std::vector<TailRow>& rows) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open for writing: " + path);
  file << "lambda,t_estimator,t_influence,bound_ok\n";
  for (const TailRow& row : rows) {
    file << format_double(row.lambda) << ',' << format_double(row.t_estimator)
         << ',' << format_double(row.t_influence) << ','
         << (row.bound_ok ? "true" : "false") << '\n';
  }
  if (!file.flush()) throw IoError("write failed: " + path);
}

}  // namespace robustmean
