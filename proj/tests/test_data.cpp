#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "robustmean/data.hpp"

using robustmean::ConstantVector;
using robustmean::CorruptionSpec;
using robustmean::Dataset;
using robustmean::DatasetSpec;
using robustmean::Matrix;
using robustmean::ParetoCoords;
using robustmean::ScaledOnes;
using robustmean::StudentMixture;
using robustmean::Vector;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("seed mixing matches the frozen avalanche values") {
  CHECK(robustmean::mix_seed(0, 0) == 16294208416658607535ull);
  CHECK(robustmean::mix_seed(0, 1) == 7960286522194355700ull);
  CHECK(robustmean::mix_seed(42, 7) == 14769051326987775908ull);
  CHECK(robustmean::mix_seed(~0ull, 1ull << 32) == 14243228784026351428ull);
  CHECK(robustmean::mix_seed(0, 0) != robustmean::mix_seed(1, 0));
}

TEST_CASE("pareto sample obeys its support and mean") {
  DatasetSpec spec{ParetoCoords{3.0, 1.0}, 100000, 5, std::nullopt, 2024};
  const Dataset data = robustmean::generate(spec);
  CHECK(data.X.minCoeff() >= 1.0);
  CHECK(data.X.maxCoeff() > 2.0);
  CHECK(data.true_mean.isApproxToConstant(1.5));
  const Vector mean = data.X.colwise().mean().transpose();
  CHECK((mean - data.true_mean).norm() <= 0.1);
  CHECK(data.outlier_indices.empty());
}

TEST_CASE("pareto scale multiplies the sample") {
  DatasetSpec unit{ParetoCoords{2.5, 1.0}, 50, 3, std::nullopt, 99};
  DatasetSpec scaled{ParetoCoords{2.5, 7.0}, 50, 3, std::nullopt, 99};
  const Matrix a = robustmean::generate(unit).X;
  const Matrix b = robustmean::generate(scaled).X;
  CHECK((b - 7.0 * a).cwiseAbs().maxCoeff() <= 1e-12 * b.maxCoeff());
}

TEST_CASE("student mixture recovers component means and weights") {
  StudentMixture mix{{{0.25, Vector::Zero(2), 50.0},
                      {0.75, Vector::Constant(2, 100.0), 50.0}}};
  DatasetSpec spec{mix, 20000, 2, std::nullopt, 31};
  const Dataset data = robustmean::generate(spec);
  CHECK(data.true_mean.isApproxToConstant(75.0));
  int high = 0;
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    if (data.X(i, 0) > 50.0) ++high;
  }
  CHECK(std::abs(high / 20000.0 - 0.75) <= 0.02);
  const Vector mean = data.X.colwise().mean().transpose();
  CHECK((mean - data.true_mean).norm() <= 1.5);
}

TEST_CASE("single student component concentrates at its mean") {
  Vector mu(3);
  mu << -2.0, 0.0, 4.0;
  StudentMixture mix{{{1.0, mu, 5.0}}};
  DatasetSpec spec{mix, 100000, 3, std::nullopt, 77};
  const Dataset data = robustmean::generate(spec);
  CHECK((data.true_mean - mu).norm() == 0.0);
  const Vector mean = data.X.colwise().mean().transpose();
  CHECK((mean - mu).norm() <= 0.1);
}

TEST_CASE("generation is bit-identical for a fixed spec") {
  DatasetSpec spec{ParetoCoords{2.1, 1.0}, 500, 20, std::nullopt, 5};
  const Matrix a = robustmean::generate(spec).X;
  const Matrix b = robustmean::generate(spec).X;
  CHECK(std::memcmp(a.data(), b.data(),
                    sizeof(double) * a.size()) == 0);
  spec.seed = 6;
  const Matrix c = robustmean::generate(spec).X;
  CHECK(std::memcmp(a.data(), c.data(),
                    sizeof(double) * a.size()) != 0);
}

TEST_CASE("corruption replaces the leading rows only") {
  CorruptionSpec corrupt{3, ScaledOnes{1e6}};
  DatasetSpec spec{ParetoCoords{3.0, 1.0}, 10, 4, corrupt, 17};
  const Dataset data = robustmean::generate(spec);
  REQUIRE(data.outlier_indices == std::vector<Eigen::Index>{0, 1, 2});
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(data.X.row(i).isApproxToConstant(1e6));
  }
  CHECK(data.X.row(3).maxCoeff() < 1e6);

  // The clean rows are the same draws as in the uncorrupted dataset.
  DatasetSpec clean = spec;
  clean.corruption.reset();
  const Dataset base = robustmean::generate(clean);
  CHECK((data.X.bottomRows(7) - base.X.bottomRows(7)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("constant vector corruption uses the given row") {
  Vector bad(3);
  bad << 1.0, -2.0, 3.0;
  CorruptionSpec corrupt{2, ConstantVector{bad}};
  DatasetSpec spec{ParetoCoords{2.5, 1.0}, 9, 3, corrupt, 23};
  const Dataset data = robustmean::generate(spec);
  CHECK((data.X.row(0).transpose() - bad).norm() == 0.0);
  CHECK((data.X.row(1).transpose() - bad).norm() == 0.0);
}

TEST_CASE("spec validation rejects bad inputs") {
  CHECK_THROWS_AS(
      robustmean::generate({ParetoCoords{1.0, 1.0}, 10, 2, std::nullopt, 0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      robustmean::generate({ParetoCoords{2.0, 0.0}, 10, 2, std::nullopt, 0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      robustmean::generate({ParetoCoords{2.0, 1.0}, 0, 2, std::nullopt, 0}),
      std::invalid_argument);
  // Corrupting half the sample or more is rejected.
  CHECK_THROWS_AS(
      robustmean::generate(
          {ParetoCoords{2.0, 1.0}, 10, 2, CorruptionSpec{5, ScaledOnes{1.0}}, 0}),
      std::invalid_argument);
  CHECK_NOTHROW(robustmean::generate(
      {ParetoCoords{2.0, 1.0}, 10, 2, CorruptionSpec{4, ScaledOnes{1.0}}, 0}));
  // Mixture weights must sum to one and dimensions must agree.
  StudentMixture badw{{{0.5, Vector::Zero(2), 3.0}}};
  CHECK_THROWS_AS(robustmean::generate({badw, 10, 2, std::nullopt, 0}),
                  std::invalid_argument);
  StudentMixture badd{{{1.0, Vector::Zero(3), 3.0}}};
  CHECK_THROWS_AS(robustmean::generate({badd, 10, 2, std::nullopt, 0}),
                  std::invalid_argument);
  StudentMixture baddof{{{1.0, Vector::Zero(2), 1.0}}};
  CHECK_THROWS_AS(robustmean::generate({baddof, 10, 2, std::nullopt, 0}),
                  std::invalid_argument);
  Vector wrong(5);
  wrong.setZero();
  CHECK_THROWS_AS(
      robustmean::generate({ParetoCoords{2.0, 1.0}, 10, 2,
                            CorruptionSpec{1, ConstantVector{wrong}}, 0}),
      std::invalid_argument);
}

TEST_CASE("the four benchmark presets have the documented shapes") {
  const auto presets = robustmean::dataset_presets();
  REQUIRE(presets.size() == 4);
  for (const auto& p : presets) {
    CHECK(p.n == 1000);
    CHECK(p.d == 100);
  }
  CHECK(std::holds_alternative<ParetoCoords>(presets[0].generator));
  CHECK(std::holds_alternative<ParetoCoords>(presets[1].generator));
  CHECK(std::holds_alternative<StudentMixture>(presets[2].generator));
  CHECK(std::holds_alternative<StudentMixture>(presets[3].generator));
  CHECK(presets[0].corruption.has_value());
  CHECK_FALSE(presets[1].corruption.has_value());
  CHECK(presets[2].corruption.has_value());
  CHECK_FALSE(presets[3].corruption.has_value());
  CHECK(presets[0].corruption->count == 2);
  CHECK(std::get<ParetoCoords>(presets[0].generator).alpha ==
        doctest::Approx(2.1));
  CHECK(std::get<ParetoCoords>(presets[1].generator).alpha ==
        doctest::Approx(3.0));
  const auto& mix = std::get<StudentMixture>(presets[2].generator);
  REQUIRE(mix.components.size() == 2);
  CHECK(mix.components[0].weight == doctest::Approx(0.4));
  CHECK(mix.components[1].mean.isApproxToConstant(2.0));
  CHECK(mix.components[0].dof == doctest::Approx(2.1));
  CHECK(std::get<StudentMixture>(presets[3].generator).components[0].dof ==
        doctest::Approx(3.0));
  // Preset generation sanity: corrupted rows are flagged.
  Dataset d1 = robustmean::generate(presets[0]);
  CHECK(d1.outlier_indices.size() == 2);
  CHECK(d1.X.row(0).isApproxToConstant(300.0));
}

TEST_CASE("csv round trip is bit exact") {
  const Dataset data = robustmean::generate(
      {ParetoCoords{2.1, 1.0}, 50, 7, std::nullopt, 12345});
  TempFile tmp("robustmean_test_roundtrip.csv");
  robustmean::write_matrix_csv(tmp.path, data.X);
  const Matrix back = robustmean::read_matrix_csv(tmp.path);
  REQUIRE(back.rows() == data.X.rows());
  REQUIRE(back.cols() == data.X.cols());
  CHECK(std::memcmp(back.data(), data.X.data(),
                    sizeof(double) * back.size()) == 0);
}

TEST_CASE("csv writer emits shortest round-trip decimals") {
  Matrix x(2, 2);
  x << 0.1, 2.0, -3.25, 1e300;
  CHECK(robustmean::matrix_to_csv(x) == "0.1,2\n-3.25,1e+300\n");
}

TEST_CASE("csv reader reports malformed lines by number") {
  TempFile tmp("robustmean_test_bad.csv");
  {
    std::ofstream out(tmp.path);
    out << "1,2\n3,oops\n";
  }
  try {
    robustmean::read_matrix_csv(tmp.path);
    FAIL("expected a parse failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("csv reader rejects ragged and empty input") {
  TempFile ragged("robustmean_test_ragged.csv");
  {
    std::ofstream out(ragged.path);
    out << "1,2\n3\n";
  }
  CHECK_THROWS_AS(robustmean::read_matrix_csv(ragged.path),
                  std::runtime_error);
  TempFile empty("robustmean_test_empty.csv");
  { std::ofstream out(empty.path); }
  CHECK_THROWS_AS(robustmean::read_matrix_csv(empty.path), std::runtime_error);
  CHECK_THROWS_AS(robustmean::read_matrix_csv("/nonexistent/nope.csv"),
                  std::runtime_error);
}

TEST_CASE("csv reader accepts crlf and blank trailing lines") {
  TempFile tmp("robustmean_test_crlf.csv");
  {
    std::ofstream out(tmp.path);
    out << "1.5,2\r\n3,4\r\n\n";
  }
  const Matrix x = robustmean::read_matrix_csv(tmp.path);
  REQUIRE(x.rows() == 2);
  CHECK(x(0, 0) == 1.5);
  CHECK(x(1, 1) == 4.0);
}

TEST_CASE("csv reader rejects non-finite values") {
  TempFile tmp("robustmean_test_inf.csv");
  {
    std::ofstream out(tmp.path);
    out << "1,2\ninf,4\n";
  }
  CHECK_THROWS_AS(robustmean::read_matrix_csv(tmp.path), std::runtime_error);
}
