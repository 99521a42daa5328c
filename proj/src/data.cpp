#include "robustmean/data.hpp"

#include "robustmean/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace robustmean {
namespace {

void validate(const DatasetSpec& spec) {
  if (spec.n < 1 || spec.d < 1) {
    throw std::invalid_argument("dataset dimensions must be positive");
  }
  if (const auto* pareto = std::get_if<ParetoCoords>(&spec.generator)) {
    if (!(pareto->alpha > 1.0)) {
      throw std::invalid_argument("pareto alpha must exceed 1");
    }
    if (!(pareto->scale > 0.0)) {
      throw std::invalid_argument("pareto scale must be positive");
    }
  } else {
    const auto& mix = std::get<StudentMixture>(spec.generator);
    if (mix.components.empty()) {
      throw std::invalid_argument("mixture needs at least one component");
    }
    double wsum = 0.0;
    for (const auto& c : mix.components) {
      if (!(c.weight > 0.0)) {
        throw std::invalid_argument("mixture weights must be positive");
      }
      if (!(c.dof > 1.0)) {
        throw std::invalid_argument(
            "student dof must exceed 1 for the mean to exist");
      }
      if (c.mean.size() != spec.d) {
        throw std::invalid_argument("component mean dimension mismatch");
      }
      wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-12) {
      throw std::invalid_argument("mixture weights must sum to 1");
    }
  }
  if (spec.corruption) {
    const CorruptionSpec& c = *spec.corruption;
    if (c.count < 0) {
      throw std::invalid_argument("corruption count must be nonnegative");
    }
    if (2 * c.count >= spec.n) {
      throw std::invalid_argument(
          "corruption count must stay below half the sample");
    }
    if (const auto* cv = std::get_if<ConstantVector>(&c.strategy)) {
      if (cv->value.size() != spec.d) {
        throw std::invalid_argument("corruption vector dimension mismatch");
      }
    }
  }
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over the combined state; one golden-ratio step
  // separates the index from the master before avalanching.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Dataset generate(const DatasetSpec& spec) {
  validate(spec);
  Dataset data;
  data.spec = spec;
  data.X.resize(spec.n, spec.d);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  if (const auto* pareto = std::get_if<ParetoCoords>(&spec.generator)) {
    const double inv_alpha = 1.0 / pareto->alpha;
    for (Index i = 0; i < spec.n; ++i) {
      for (Index j = 0; j < spec.d; ++j) {
        const double u = 1.0 - unif(rng);  // in (0, 1]
        data.X(i, j) = pareto->scale * std::pow(u, -inv_alpha);
      }
    }
    data.true_mean =
        Vector::Constant(spec.d, pareto->scale * pareto->alpha /
                                     (pareto->alpha - 1.0));
  } else {
    const auto& mix = std::get<StudentMixture>(spec.generator);
    std::normal_distribution<double> normal(0.0, 1.0);
    data.true_mean = Vector::Zero(spec.d);
    for (const auto& c : mix.components) data.true_mean += c.weight * c.mean;
    for (Index i = 0; i < spec.n; ++i) {
      const double u = unif(rng);
      size_t pick = mix.components.size() - 1;
      double cum = 0.0;
      for (size_t c = 0; c < mix.components.size(); ++c) {
        cum += mix.components[c].weight;
        if (u < cum) {
          pick = c;
          break;
        }
      }
      const StudentComponent& comp = mix.components[pick];
      for (Index j = 0; j < spec.d; ++j) data.X(i, j) = normal(rng);
      std::chi_squared_distribution<double> chi2(comp.dof);
      const double w = chi2(rng);
      const double factor = std::sqrt(comp.dof / w);
      data.X.row(i) = comp.mean.transpose() + data.X.row(i) * factor;
    }
  }

  if (spec.corruption && spec.corruption->count > 0) {
    Vector bad;
    if (const auto* cv = std::get_if<ConstantVector>(&spec.corruption->strategy)) {
      bad = cv->value;
    } else {
      bad = Vector::Constant(
          spec.d, std::get<ScaledOnes>(spec.corruption->strategy).scale);
    }
    for (Index i = 0; i < spec.corruption->count; ++i) {
      data.X.row(i) = bad.transpose();
      data.outlier_indices.push_back(i);
    }
  }
  return data;
}

std::vector<DatasetSpec> dataset_presets() {
  constexpr Index n = 1000;
  constexpr Index d = 100;
  const CorruptionSpec two_far{2, ScaledOnes{300.0}};

  DatasetSpec ds1{ParetoCoords{2.1, 1.0}, n, d, two_far, 0};
  DatasetSpec ds2{ParetoCoords{3.0, 1.0}, n, d, std::nullopt, 0};

  StudentMixture mix1{{{0.4, Vector::Zero(d), 2.1},
                       {0.6, Vector::Constant(d, 2.0), 2.1}}};
  StudentMixture mix2{{{0.4, Vector::Zero(d), 3.0},
                       {0.6, Vector::Constant(d, 2.0), 3.0}}};
  DatasetSpec ds3{mix1, n, d, two_far, 0};
  DatasetSpec ds4{mix2, n, d, std::nullopt, 0};
  return {ds1, ds2, ds3, ds4};
}

std::string matrix_to_csv(const Matrix& X) {
  std::ostringstream out;
  char buf[64];
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof buf, X(i, j));
      out.write(buf, res.ptr - buf);
      out.put(j + 1 == X.cols() ? '\n' : ',');
    }
  }
  return out.str();
}

void write_matrix_csv(const std::string& path, const Matrix& X) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open for writing: " + path);
  const std::string body = matrix_to_csv(X);
  file.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!file.flush()) throw IoError("write failed: " + path);
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open for reading: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t lineno = 0;
  Index width = -1;
  while (std::getline(file, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      double value = 0.0;
      const auto res = std::from_chars(ptr, end, value);
      if (res.ec != std::errc() || !std::isfinite(value)) {
        throw IoError("malformed CSV at line " +
                                 std::to_string(lineno) + " in " + path);
      }
      row.push_back(value);
      ptr = res.ptr;
      if (ptr == end) break;
      if (*ptr != ',') {
        throw IoError("malformed CSV at line " +
                                 std::to_string(lineno) + " in " + path);
      }
      ++ptr;
    }
    if (width < 0) {
      width = static_cast<Index>(row.size());
    } else if (static_cast<Index>(row.size()) != width) {
      throw IoError("malformed CSV at line " +
                               std::to_string(lineno) + " in " + path +
                               ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw IoError("empty CSV: " + path);
  }
  Matrix X(static_cast<Index>(rows.size()), width);
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < width; ++j) {
      X(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }
  return X;
}

}  // namespace robustmean
