#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "robustmean/bench.hpp"
#include "robustmean/comparators.hpp"
#include "robustmean/data.hpp"
#include "robustmean/diagnostics.hpp"
#include "robustmean/errors.hpp"
#include "robustmean/estimator.hpp"
#include "robustmean/score.hpp"
#include "robustmean/tuning.hpp"

namespace {

using json = nlohmann::json;
using namespace robustmean;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

int classify(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e) != nullptr) return kExitIo;
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr ||
      dynamic_cast<const std::domain_error*>(&e) != nullptr) {
    return kExitUsage;
  }
  return kExitNumerical;
}

int fail(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return classify(e);
}

/// ROBUSTMEAN_SEED supplies the seed when the flag was not given.
std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value) {
  if (opt != nullptr && opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("ROBUSTMEAN_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw std::invalid_argument("ROBUSTMEAN_SEED is not an integer");
    }
    return static_cast<std::uint64_t>(v);
  }
  return flag_value;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(what);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse " + what + ": '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(what + " list is empty");
  return out;
}

/// "w,mu,dof;w,mu,dof" with scalar mu replicated across all d coordinates.
StudentMixture parse_components(const std::string& text, Index d) {
  StudentMixture mix;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    const std::vector<double> v = parse_double_list(part, "component");
    if (v.size() != 3) {
      throw std::invalid_argument(
          "each component must be weight,mean,dof; got '" + part + "'");
    }
    mix.components.push_back({v[0], Vector::Constant(d, v[1]), v[2]});
  }
  return mix;
}

void atomic_write_text(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open for writing: " + tmp);
    file.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!file.flush()) throw IoError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw IoError("cannot move " + tmp + " into place");
  }
}

ScoreFamily build_family(const std::string& name, double beta, int p) {
  const FamilyKind kind = family_from_name(name);
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

json spec_to_json(const DatasetSpec& spec) {
  json j;
  if (const auto* pareto = std::get_if<ParetoCoords>(&spec.generator)) {
    j["generator"] = "pareto";
    j["alpha"] = pareto->alpha;
    j["scale"] = pareto->scale;
  } else {
    const auto& mix = std::get<StudentMixture>(spec.generator);
    j["generator"] = "student";
    json comps = json::array();
    for (const auto& c : mix.components) {
      json cj;
      cj["weight"] = c.weight;
      cj["mean"] = std::vector<double>(c.mean.data(),
                                       c.mean.data() + c.mean.size());
      cj["dof"] = c.dof;
      comps.push_back(cj);
    }
    j["components"] = comps;
  }
  j["n"] = spec.n;
  j["d"] = spec.d;
  j["seed"] = spec.seed;
  if (spec.corruption) {
    json cj;
    cj["count"] = spec.corruption->count;
    if (const auto* cv = std::get_if<ConstantVector>(&spec.corruption->strategy)) {
      cj["strategy"] = "constant_vector";
      cj["value"] = std::vector<double>(cv->value.data(),
                                        cv->value.data() + cv->value.size());
    } else {
      cj["strategy"] = "scaled_ones";
      cj["scale"] = std::get<ScaledOnes>(spec.corruption->strategy).scale;
    }
    j["corruption"] = cj;
  }
  return j;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
  std::string input;
  std::string estimator = "huber";
  double beta = 0.0;
  bool auto_beta = false;
  int p = 5;
  double tol = 1e-10;
  int max_iter = 200;
  int grid_size = 40;
  double budget = 0.05;
  std::string output = "json";
};

int run_estimate(const EstimateArgs& args, const CLI::Option* beta_opt) {
  if (args.auto_beta && beta_opt->count() > 0) {
    std::cerr << "error: --beta and --auto-beta are mutually exclusive\n";
    return kExitUsage;
  }
  if (!args.auto_beta && beta_opt->count() == 0) {
    std::cerr << "error: either --beta or --auto-beta is required\n";
    return kExitUsage;
  }

  Matrix X;
  try {
    X = read_matrix_csv(args.input);
  } catch (const std::exception& e) {
    return fail(e);
  }

  try {
    double beta = args.beta;
    if (args.auto_beta) {
      SelectBetaOptions opts;
      opts.grid_size = args.grid_size;
      opts.corruption_budget = args.budget;
      opts.p = args.p;
      opts.solver_tol = args.tol;
      opts.solver_max_iter = args.max_iter;
      beta = select_beta(X, family_from_name(args.estimator), opts).beta_hat;
    }
    const ScoreFamily f = build_family(args.estimator, beta, args.p);
    EstimatorConfig cfg{f, args.tol, args.max_iter};
    const EstimateResult fit = irls_estimate(X, cfg);

    if (args.output == "csv") {
      Matrix row(1, fit.estimate.size());
      row.row(0) = fit.estimate.transpose();
      std::cout << matrix_to_csv(row);
    } else {
      json j;
      j["estimate"] = std::vector<double>(
          fit.estimate.data(), fit.estimate.data() + fit.estimate.size());
      j["iterations"] = fit.iterations;
      j["converged"] = fit.converged;
      j["residual"] = fit.residual;
      j["beta_used"] = beta;
      j["estimator"] = args.estimator;
      if (family_from_name(args.estimator) == FamilyKind::Polynomial) {
        j["p"] = args.p;
      }
      std::cout << j.dump(2) << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

// ---------------------------------------------------------------------------
// tune

struct TuneArgs {
  std::string input;
  std::string estimator = "huber";
  int p = 5;
  int grid_size = 40;
  double budget = 0.05;
  double tol = 1e-10;
  int max_iter = 200;
  std::string output = "json";
};

int run_tune(const TuneArgs& args) {
  Matrix X;
  try {
    X = read_matrix_csv(args.input);
  } catch (const std::exception& e) {
    return fail(e);
  }
  try {
    SelectBetaOptions opts;
    opts.grid_size = args.grid_size;
    opts.corruption_budget = args.budget;
    opts.p = args.p;
    opts.solver_tol = args.tol;
    opts.solver_max_iter = args.max_iter;
    const BetaSelection sel =
        select_beta(X, family_from_name(args.estimator), opts);
    if (args.output == "csv") {
      std::cout << "beta,criterion,converged,selected\n";
      for (const GridPoint& g : sel.grid) {
        std::cout << g.beta << ',' << g.criterion << ','
                  << (g.converged ? "true" : "false") << ','
                  << (g.beta == sel.beta_hat ? "true" : "false") << '\n';
      }
    } else {
      json j;
      j["beta_hat"] = sel.beta_hat;
      j["mad"] = sel.mad;
      j["c_psi"] = sel.c_psi;
      json grid = json::array();
      for (const GridPoint& g : sel.grid) {
        json gj;
        gj["beta"] = g.beta;
        gj["converged"] = g.converged;
        if (g.converged) {
          gj["criterion"] = g.criterion;
        } else {
          gj["criterion"] = nullptr;
        }
        grid.push_back(gj);
      }
      j["grid"] = grid;
      std::cout << j.dump(2) << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  int preset = 0;
  std::string generator;
  double alpha = 2.0;
  double scale = 1.0;
  std::string components;
  Index n = 1000;
  Index d = 100;
  Index corrupt_count = 0;
  double corrupt_scale = 0.0;
  std::string corrupt_vector;
  std::uint64_t seed = 0;
  std::string out = "data.csv";
};

int run_generate(const GenerateArgs& args, const CLI::App* cmd) {
  try {
    DatasetSpec spec;
    if (args.preset > 0) {
      const auto presets = dataset_presets();
      if (args.preset > static_cast<int>(presets.size())) {
        throw std::invalid_argument("preset must be between 1 and 4");
      }
      spec = presets[static_cast<size_t>(args.preset - 1)];
    } else {
      if (args.generator.empty()) {
        throw std::invalid_argument("need --preset or --generator");
      }
      spec.n = args.n;
      spec.d = args.d;
      if (args.generator == "pareto") {
        spec.generator = ParetoCoords{args.alpha, args.scale};
      } else if (args.generator == "student") {
        if (args.components.empty()) {
          throw std::invalid_argument(
              "--generator student needs --components");
        }
        spec.generator = parse_components(args.components, args.d);
      } else {
        throw std::invalid_argument("unknown generator: " + args.generator);
      }
      if (args.corrupt_count > 0) {
        CorruptionSpec corr;
        corr.count = args.corrupt_count;
        if (!args.corrupt_vector.empty()) {
          const std::vector<double> v =
              parse_double_list(args.corrupt_vector, "corrupt vector");
          corr.strategy = ConstantVector{
              Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()))};
        } else {
          corr.strategy = ScaledOnes{args.corrupt_scale};
        }
        spec.corruption = corr;
      }
    }
    spec.seed = resolve_seed(cmd->get_option("--seed"), args.seed);

    const Dataset data = generate(spec);
    atomic_write_text(args.out, matrix_to_csv(data.X));
    json meta;
    meta["true_mean"] = std::vector<double>(
        data.true_mean.data(), data.true_mean.data() + data.true_mean.size());
    meta["outlier_indices"] = data.outlier_indices;
    meta["spec"] = spec_to_json(data.spec);
    atomic_write_text(args.out + ".json", meta.dump(2) + "\n");
    std::cout << "wrote " << data.X.rows() << "x" << data.X.cols() << " to "
              << args.out << " (+ .json sidecar)\n";
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

// ---------------------------------------------------------------------------
// bench

DatasetSpec dataset_from_json(const json& j) {
  if (j.contains("preset")) {
    const int preset = j["preset"].get<int>();
    const auto presets = dataset_presets();
    if (preset < 1 || preset > static_cast<int>(presets.size())) {
      throw std::invalid_argument("preset must be between 1 and 4");
    }
    return presets[static_cast<size_t>(preset - 1)];
  }
  DatasetSpec spec;
  spec.n = j.at("n").get<Index>();
  spec.d = j.at("d").get<Index>();
  const std::string gen = j.at("generator").get<std::string>();
  if (gen == "pareto") {
    spec.generator =
        ParetoCoords{j.at("alpha").get<double>(),
                     j.value("scale", 1.0)};
  } else if (gen == "student") {
    StudentMixture mix;
    for (const json& cj : j.at("components")) {
      StudentComponent c;
      c.weight = cj.at("weight").get<double>();
      c.dof = cj.at("dof").get<double>();
      if (cj.at("mean").is_array()) {
        const auto v = cj.at("mean").get<std::vector<double>>();
        c.mean = Eigen::Map<const Vector>(v.data(),
                                          static_cast<Index>(v.size()));
      } else {
        c.mean = Vector::Constant(spec.d, cj.at("mean").get<double>());
      }
      mix.components.push_back(c);
    }
    spec.generator = mix;
  } else {
    throw std::invalid_argument("unknown generator: " + gen);
  }
  if (j.contains("corruption")) {
    const json& cj = j["corruption"];
    CorruptionSpec corr;
    corr.count = cj.at("count").get<Index>();
    const std::string strat = cj.value("strategy", "scaled_ones");
    if (strat == "scaled_ones") {
      corr.strategy = ScaledOnes{cj.at("scale").get<double>()};
    } else if (strat == "constant_vector") {
      const auto v = cj.at("value").get<std::vector<double>>();
      corr.strategy = ConstantVector{
          Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()))};
    } else {
      throw std::invalid_argument("unknown corruption strategy: " + strat);
    }
    spec.corruption = corr;
  }
  return spec;
}

EstimatorSpec estimator_from_json(const json& j) {
  EstimatorSpec spec;
  const std::string method = j.at("method").get<std::string>();
  spec.label = j.value("label", method);
  if (method == "mean") {
    spec.method = EmpiricalMeanSpec{};
  } else if (method == "gmed") {
    GeometricMedianSpec g;
    g.tol = j.value("tol", g.tol);
    g.max_iter = j.value("max_iter", g.max_iter);
    spec.method = g;
  } else if (method == "gmom") {
    GmomSpec g;
    g.blocks = j.value("blocks", g.blocks);
    g.tol = j.value("tol", g.tol);
    g.max_iter = j.value("max_iter", g.max_iter);
    spec.method = g;
  } else {
    MEstimatorSpec m;
    m.kind = family_from_name(method);
    m.p = j.value("p", m.p);
    if (j.contains("beta") && !j["beta"].is_null()) {
      m.beta = j["beta"].get<double>();
    }
    m.tune.grid_size = j.value("grid_size", m.tune.grid_size);
    m.tune.corruption_budget = j.value("budget", m.tune.corruption_budget);
    m.tune.p = m.p;
    m.tol = j.value("tol", m.tol);
    m.max_iter = j.value("max_iter", m.max_iter);
    spec.method = m;
  }
  return spec;
}

struct BenchArgs {
  std::string config_path;
  bool paper_figure = false;
  int replicates = 100;
  std::uint64_t seed = 0;
  std::string out = "bench.csv";
  int jobs = 1;
  bool timing = false;
};

void print_summary_table(const std::vector<SummaryRow>& rows) {
  std::printf("%-10s %-9s %6s %12s %12s %12s %12s %12s %10s\n", "dataset",
              "estimator", "count", "median", "q25", "q75", "mean", "max",
              "mean_s");
  for (const SummaryRow& row : rows) {
    std::printf("%-10s %-9s %6d %12.6g %12.6g %12.6g %12.6g %12.6g %10.3f\n",
                row.dataset_label.c_str(), row.estimator_label.c_str(),
                row.count, row.median, row.q25, row.q75, row.mean, row.max,
                row.mean_wall_time_s);
  }
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open for writing: " + path);
  file << "dataset_label,estimator_label,count,median,q25,q75,mean,max\n";
  for (const SummaryRow& row : rows) {
    file << row.dataset_label << ',' << row.estimator_label << ','
         << row.count << ',' << row.median << ',' << row.q25 << ','
         << row.q75 << ',' << row.mean << ',' << row.max << '\n';
  }
  if (!file.flush()) throw IoError("write failed: " + path);
}

int run_bench(const BenchArgs& args, const CLI::App* cmd) {
  try {
    BenchConfig config;
    if (args.paper_figure) {
      config = paper_figure_config(args.replicates, 0);
    } else if (!args.config_path.empty()) {
      std::ifstream file(args.config_path);
      if (!file) throw IoError("cannot open for reading: " + args.config_path);
      json j;
      try {
        file >> j;
      } catch (const json::exception& e) {
        throw IoError("malformed JSON config: " + std::string(e.what()));
      }
      for (const json& dj : j.at("datasets")) {
        config.datasets.push_back(
            {dj.at("label").get<std::string>(), dataset_from_json(dj)});
      }
      for (const json& ej : j.at("estimators")) {
        config.estimators.push_back(estimator_from_json(ej));
      }
      config.replicates = j.value("replicates", args.replicates);
      config.master_seed = j.value("seed", std::uint64_t{0});
    } else {
      throw std::invalid_argument("need --paper-figure or --config");
    }
    if (cmd->get_option("--replicates")->count() > 0) {
      config.replicates = args.replicates;
    }
    config.master_seed = resolve_seed(cmd->get_option("--seed"),
                                      cmd->get_option("--seed")->count() > 0
                                          ? args.seed
                                          : config.master_seed);
    config.output_path = args.out;
    config.jobs = args.jobs;
    config.timing_in_csv = args.timing;

    const std::vector<BenchRecord> records = run_benchmark(config);
    const std::vector<SummaryRow> summary = summarize(records);
    print_summary_table(summary);
    write_summary_csv(args.out + ".summary.csv", summary);
    std::cout << "records: " << args.out << "\nsummary: " << args.out
              << ".summary.csv\n";

    // A cell counts as errored when the estimator threw (error is NaN).
    for (const SummaryRow& row : summary) {
      int failures = 0;
      for (const BenchRecord& rec : records) {
        if (rec.dataset_label == row.dataset_label &&
            rec.estimator_label == row.estimator_label &&
            std::isnan(rec.error)) {
          ++failures;
        }
      }
      if (failures * 10 > row.count) {
        std::cerr << "error: estimator '" << row.estimator_label
                  << "' failed on " << failures << "/" << row.count
                  << " replicates of " << row.dataset_label << "\n";
        return kExitNumerical;
      }
    }
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

// ---------------------------------------------------------------------------
// tails

struct TailsArgs {
  std::string family = "huber";
  double beta = 0.0;
  int p = 5;
  Index n = 200;
  Index d = 1;
  int replicates = 1000;
  std::string lambdas;
  int lambda_count = 10;
  std::string generator = "student";
  double alpha = 3.0;
  double scale = 1.0;
  std::string components = "1,0,3";
  std::string theta;
  std::uint64_t seed = 0;
  std::string out;
};

int run_tails(const TailsArgs& args, const CLI::App* cmd) {
  try {
    const ScoreFamily f = build_family(args.family, args.beta, args.p);
    TailConfig config;
    config.spec.n = args.n;
    config.spec.d = args.d;
    if (args.generator == "pareto") {
      config.spec.generator = ParetoCoords{args.alpha, args.scale};
    } else if (args.generator == "student") {
      config.spec.generator = parse_components(args.components, args.d);
    } else {
      throw std::invalid_argument("unknown generator: " + args.generator);
    }
    config.spec.seed = resolve_seed(cmd->get_option("--seed"), args.seed);
    config.replicates = args.replicates;
    if (!args.lambdas.empty()) {
      config.lambdas = parse_double_list(args.lambdas, "lambda");
    } else {
      if (args.lambda_count < 1) {
        throw std::invalid_argument("--lambda-count must be >= 1");
      }
      const double half = args.beta / 2.0;
      for (int k = 1; k <= args.lambda_count; ++k) {
        config.lambdas.push_back(half * static_cast<double>(k) /
                                 static_cast<double>(args.lambda_count + 1));
      }
    }
    if (!args.theta.empty()) {
      const std::vector<double> v = parse_double_list(args.theta, "theta");
      config.theta = Eigen::Map<const Vector>(v.data(),
                                              static_cast<Index>(v.size()));
    }

    const std::vector<TailRow> rows = tail_experiment(config, f);
    std::printf("%12s %14s %14s %9s\n", "lambda", "t_estimator",
                "t_influence", "bound_ok");
    for (const TailRow& row : rows) {
      std::printf("%12.6g %14.6g %14.6g %9s\n", row.lambda, row.t_estimator,
                  row.t_influence, row.bound_ok ? "true" : "false");
    }
    if (!args.out.empty()) write_tail_csv(args.out, rows);
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust multivariate mean estimation"};
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* est_cmd =
      app.add_subcommand("estimate", "Estimate the mean of a CSV dataset");
  est_cmd->add_option("input", est.input, "headerless CSV, one row per point")
      ->required();
  est_cmd->add_option("--estimator", est.estimator,
                      "huber | catoni | poly (default huber)");
  CLI::Option* beta_opt =
      est_cmd->add_option("--beta", est.beta, "score threshold");
  est_cmd->add_flag("--auto-beta", est.auto_beta,
                    "select beta by criterion minimization");
  est_cmd->add_option("--p", est.p, "polynomial exponent (default 5)");
  est_cmd->add_option("--tol", est.tol, "stopping tolerance (default 1e-10)");
  est_cmd->add_option("--max-iter", est.max_iter,
                      "iteration cap (default 200)");
  est_cmd->add_option("--grid-size", est.grid_size,
                      "beta grid size for --auto-beta (default 40)");
  est_cmd->add_option("--budget", est.budget,
                      "assumed corruption fraction (default 0.05)");
  est_cmd->add_option("--output", est.output, "json | csv (default json)")
      ->check(CLI::IsMember({"json", "csv"}));

  TuneArgs tune;
  CLI::App* tune_cmd =
      app.add_subcommand("tune", "Select beta for a CSV dataset");
  tune_cmd->add_option("input", tune.input, "headerless CSV")->required();
  tune_cmd->add_option("--estimator", tune.estimator, "huber | catoni | poly");
  tune_cmd->add_option("--p", tune.p, "polynomial exponent (default 5)");
  tune_cmd->add_option("--grid-size", tune.grid_size,
                       "grid size (default 40)");
  tune_cmd->add_option("--budget", tune.budget,
                       "assumed corruption fraction (default 0.05)");
  tune_cmd->add_option("--tol", tune.tol, "inner solver tolerance");
  tune_cmd->add_option("--max-iter", tune.max_iter, "inner iteration cap");
  tune_cmd->add_option("--output", tune.output, "json | csv (default json)")
      ->check(CLI::IsMember({"json", "csv"}));

  GenerateArgs gen;
  CLI::App* gen_cmd =
      app.add_subcommand("generate", "Write a synthetic dataset to CSV");
  gen_cmd->add_option("--preset", gen.preset, "benchmark dataset 1..4");
  gen_cmd->add_option("--generator", gen.generator, "pareto | student");
  gen_cmd->add_option("--alpha", gen.alpha, "pareto tail index (> 1)");
  gen_cmd->add_option("--scale", gen.scale, "pareto scale (> 0)");
  gen_cmd->add_option("--components", gen.components,
                      "student mixture 'w,mu,dof;w,mu,dof'");
  gen_cmd->add_option("--n", gen.n, "rows (default 1000)");
  gen_cmd->add_option("--d", gen.d, "columns (default 100)");
  gen_cmd->add_option("--corrupt-count", gen.corrupt_count,
                      "rows to replace from the top");
  gen_cmd->add_option("--corrupt-scale", gen.corrupt_scale,
                      "replacement row = scale * ones");
  gen_cmd->add_option("--corrupt-vector", gen.corrupt_vector,
                      "replacement row as comma list (overrides scale)");
  gen_cmd->add_option("--seed", gen.seed, "master seed (default 0)");
  gen_cmd->add_option("--out", gen.out, "output CSV path (default data.csv)");

  BenchArgs bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Run the estimator benchmark");
  bench_cmd->add_option("--config", bench.config_path, "JSON bench config");
  bench_cmd->add_flag("--paper-figure", bench.paper_figure,
                      "four preset datasets x five estimators");
  bench_cmd->add_option("--replicates", bench.replicates,
                        "replicates per dataset (default 100)");
  bench_cmd->add_option("--seed", bench.seed, "master seed (default 0)");
  bench_cmd->add_option("--out", bench.out,
                        "records CSV path (default bench.csv)");
  bench_cmd->add_option("--jobs", bench.jobs, "parallel workers (default 1)");
  bench_cmd->add_flag("--timing", bench.timing,
                      "write measured wall times into the records CSV "
                      "(forfeits byte-identical reruns)");

  TailsArgs tails;
  CLI::App* tails_cmd = app.add_subcommand(
      "tails", "Compare estimator and influence tail frequencies");
  tails_cmd->add_option("--family", tails.family, "huber | catoni | poly");
  tails_cmd->add_option("--beta", tails.beta, "score threshold")->required();
  tails_cmd->add_option("--p", tails.p, "polynomial exponent (default 5)");
  tails_cmd->add_option("--n", tails.n, "sample size per replicate");
  tails_cmd->add_option("--d", tails.d, "dimension (default 1)");
  tails_cmd->add_option("--replicates", tails.replicates,
                        "Monte Carlo replicates (default 1000)");
  tails_cmd->add_option("--lambdas", tails.lambdas,
                        "comma list of thresholds in (0, beta/2)");
  tails_cmd->add_option("--lambda-count", tails.lambda_count,
                        "equispaced grid size when --lambdas absent");
  tails_cmd->add_option("--generator", tails.generator, "pareto | student");
  tails_cmd->add_option("--alpha", tails.alpha, "pareto tail index");
  tails_cmd->add_option("--scale", tails.scale, "pareto scale");
  tails_cmd->add_option("--components", tails.components,
                        "student mixture (default '1,0,3')");
  tails_cmd->add_option("--theta", tails.theta,
                        "reference location (comma list)");
  tails_cmd->add_option("--seed", tails.seed, "master seed (default 0)");
  tails_cmd->add_option("--out", tails.out, "optional CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (est_cmd->parsed()) return run_estimate(est, beta_opt);
  if (tune_cmd->parsed()) return run_tune(tune);
  if (gen_cmd->parsed()) return run_generate(gen, gen_cmd);
  if (bench_cmd->parsed()) return run_bench(bench, bench_cmd);
  if (tails_cmd->parsed()) return run_tails(tails, tails_cmd);
  return kExitUsage;
}
