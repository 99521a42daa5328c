#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "robustmean/data.hpp"
#include "robustmean/score.hpp"
#include "robustmean/tuning.hpp"
#include "robustmean/types.hpp"

namespace robustmean {

struct MEstimatorSpec {
  FamilyKind kind = FamilyKind::Huber;
  int p = 5;
  /// Fixed threshold; empty selects beta per replicate via select_beta.
  std::optional<double> beta;
  SelectBetaOptions tune;
  double tol = 1e-10;
  int max_iter = 200;
};

struct EmpiricalMeanSpec {};

struct GeometricMedianSpec {
  double tol = 1e-8;
  int max_iter = 1000;
};

struct GmomSpec {
  Index blocks = 9;
  double tol = 1e-8;
  int max_iter = 1000;
};

using EstimatorVariant = std::variant<MEstimatorSpec, EmpiricalMeanSpec,
                                      GeometricMedianSpec, GmomSpec>;

struct EstimatorSpec {
  std::string label;
  EstimatorVariant method;
};

struct LabeledDataset {
  std::string label;
  DatasetSpec spec;
};

struct BenchConfig {
  std::vector<LabeledDataset> datasets;
  std::vector<EstimatorSpec> estimators;
  int replicates = 1;
  std::uint64_t master_seed = 0;
  /// Empty: no file output.
  std::string output_path;
  int jobs = 1;
  /// Measured wall times go to the records CSV only on request; the default
  /// keeps identical configs byte-identical on disk.
  bool timing_in_csv = false;
};

struct BenchRecord {
  std::string dataset_label;
  std::string estimator_label;
  int replicate = 0;
  double error = 0.0;
  double wall_time_s = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<double> beta_used;
};

/// Runs every (dataset, estimator, replicate) cell; replicate r of dataset i
/// draws its data with seed mix_seed(mix_seed(master_seed, i), r), so the
/// data never depends on the estimator list, the replicate count, or the
/// worker schedule. Records come back sorted by (dataset, estimator,
/// replicate) and, when output_path is set, are written as CSV with a
/// trailing "# complete" marker.
std::vector<BenchRecord> run_benchmark(const BenchConfig& config);

void write_records_csv(const std::string& path,
                       const std::vector<BenchRecord>& records,
                       bool timing_in_csv);

struct SummaryRow {
  std::string dataset_label;
  std::string estimator_label;
  int count = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double mean = 0.0;
  double max = 0.0;
  double mean_wall_time_s = 0.0;
};

/// Error quantiles per (dataset, estimator) in first-appearance order;
/// quantiles use the midpoint convention (even counts average the two
/// adjacent order statistics).
std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records);

/// Midpoint empirical quantile of q in [0, 1].
double midpoint_quantile(std::vector<double> values, double q);

/// The benchmark grid: the four preset datasets against Huber, Catoni and
/// Polynomial(p=5) with per-replicate beta selection, the geometric median,
/// and the geometric median of 9 block means.
BenchConfig paper_figure_config(int replicates, std::uint64_t master_seed);

struct TailConfig {
  /// Must carry no corruption.
  DatasetSpec spec;
  int replicates = 1000;
  std::vector<double> lambdas;
  /// Reference location; defaults to the analytic mean for one-component
  /// mixtures and to a large plug-in run otherwise.
  std::optional<Vector> theta;
  double solver_tol = 1e-10;
  int solver_max_iter = 300;
};

struct TailRow {
  double lambda = 0.0;
  /// Frequency of ||T(X) - theta|| >= lambda.
  double t_estimator = 0.0;
  /// Frequency of the influence statistic at theta >= lambda * gamma / 4.
  double t_influence = 0.0;
  bool bound_ok = false;
};

/// Empirical check that the estimator tail is dominated by the influence
/// tail plus exp(-n gamma^2 / 32), with a three-standard-error Monte Carlo
/// allowance; lambdas must lie in the open interval (0, beta / 2).
std::vector<TailRow> tail_experiment(const TailConfig& config,
                                     const ScoreFamily& score);

void write_tail_csv(const std::string& path, const std::vector<TailRow>& rows);

}  // namespace robustmean
