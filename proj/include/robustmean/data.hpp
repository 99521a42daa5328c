#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "robustmean/types.hpp"

namespace robustmean {

/// Coordinates drawn iid Pareto via inverse CDF: scale * U^(-1/alpha) with
/// U uniform on (0, 1]. Coordinate mean is scale * alpha / (alpha - 1).
struct ParetoCoords {
  double alpha = 2.0;
  double scale = 1.0;
};

struct StudentComponent {
  double weight = 1.0;
  Vector mean;
  double dof = 3.0;
};

/// Mixture of multivariate Student components with identity shape:
/// X = mu + Z * sqrt(dof / W), Z standard normal, W chi-squared(dof).
struct StudentMixture {
  std::vector<StudentComponent> components;
};

using GeneratorSpec = std::variant<ParetoCoords, StudentMixture>;

struct ConstantVector {
  Vector value;
};

struct ScaledOnes {
  double scale = 0.0;
};

/// Replaces the first `count` rows; count must stay below n / 2.
struct CorruptionSpec {
  Index count = 0;
  std::variant<ConstantVector, ScaledOnes> strategy;
};

struct DatasetSpec {
  GeneratorSpec generator;
  Index n = 0;
  Index d = 0;
  std::optional<CorruptionSpec> corruption;
  std::uint64_t seed = 0;
};

struct Dataset {
  Matrix X;
  Vector true_mean;
  std::vector<Index> outlier_indices;
  DatasetSpec spec;
};

/// Deterministic: the same spec yields bit-identical matrices.
Dataset generate(const DatasetSpec& spec);

/// The four n=1000, d=100 benchmark configurations: heavy-tail Pareto with
/// two far outliers, clean lighter Pareto, a two-component Student mixture
/// with the same outliers, and the clean mixture.
std::vector<DatasetSpec> dataset_presets();

/// splitmix64 avalanche of (master, index); derives independent per-replicate
/// streams from one master seed.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

/// Headerless CSV, one row per observation, shortest round-trip formatting.
std::string matrix_to_csv(const Matrix& X);

void write_matrix_csv(const std::string& path, const Matrix& X);

/// Throws std::runtime_error naming the 1-based line of the first malformed
/// record.
Matrix read_matrix_csv(const std::string& path);

}  // namespace robustmean
