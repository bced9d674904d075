#include <gtest/gtest.h>

#include <cmath>

#include "facecue/pca.hpp"
#include "oracles/pca_oracle.hpp"
#include "support.hpp"

using namespace facecue;

namespace {

double sq_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

void expect_orthonormal(const Matrix& c, double tol) {
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.rows(); ++j)
      EXPECT_NEAR(dot(c.row(i), c.row(j)), i == j ? 1.0 : 0.0, tol);
}

}  // namespace

TEST(Jacobi, TwoByTwo) {
  const auto e = jacobi_eigen(Matrix::from_rows({{2, 1}, {1, 2}}));
  const double hi = std::max(e.values[0], e.values[1]);
  const double lo = std::min(e.values[0], e.values[1]);
  EXPECT_NEAR(hi, 3.0, 1e-14);
  EXPECT_NEAR(lo, 1.0, 1e-14);
}

TEST(FitPca, IdenticalRowsGiveZeroVariance) {
  Matrix m(2, 67, 0.5);
  const auto model = fit_pca(m, 1);
  EXPECT_EQ(model.explained_variance, std::vector<double>{0.0});
  expect_orthonormal(model.components, 1e-12);
  EXPECT_EQ(model, fit_pca(m, 1));
}

TEST(FitPca, RankOneData) {
  Matrix m(0, 67);
  for (double t : {-2.0, -0.5, 0.0, 1.0, 3.0, 4.5}) {
    std::vector<double> row(67, 0.0);
    row[0] = t;
    row[1] = 2 * t;
    m.append_row(row);
  }
  const auto model = fit_pca(m, 4);
  const double s5 = std::sqrt(5.0);
  EXPECT_NEAR(model.components(0, 0), 1 / s5, 1e-12);
  EXPECT_NEAR(model.components(0, 1), 2 / s5, 1e-12);
  for (std::size_t i = 2; i < 67; ++i) EXPECT_NEAR(model.components(0, i), 0.0, 1e-12);
  EXPECT_GT(model.explained_variance[0], 0.0);
  for (std::size_t j = 1; j < 4; ++j) EXPECT_NEAR(model.explained_variance[j], 0.0, 1e-12);
}

TEST(FitPca, MatchesDenseOracleOnRandomMatrix) {
  Rng rng(31);
  const auto m = fixtures::random_matrix(rng, 10, 67, 0.0, 3.14);
  const auto model = fit_pca(m, 4);
  const auto ref = oracle::dense_pca(m);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(model.explained_variance[j], ref.eigenvalues[j], 1e-6);
    for (std::size_t i = 0; i < 67; ++i) EXPECT_NEAR(model.components(j, i), ref.vectors[j][i], 1e-6);
  }
  expect_orthonormal(model.components, 1e-8);
  for (std::size_t j = 1; j < 4; ++j) {
    EXPECT_GE(model.explained_variance[j - 1], model.explained_variance[j]);
  }
}

TEST(FitPca, FullSpectrumSumsToTrace) {
  Rng rng(32);
  const auto m = fixtures::random_matrix(rng, 80, 67, 0.0, 3.14);
  const auto model = fit_pca(m, 67);
  double sum = 0;
  for (double v : model.explained_variance) sum += v;
  EXPECT_NEAR(sum, oracle::dense_pca(m).covariance_trace, 1e-6);
  expect_orthonormal(model.components, 1e-8);
}

TEST(FitPca, Errors) {
  try {
    fit_pca(Matrix(1, 67), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewSamples);
  }
  try {
    fit_pca(Matrix(5, 67), 5);  // k <= n - 1
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KTooLarge);
  }
  EXPECT_THROW(fit_pca(Matrix(100, 67), 68), Error);
  EXPECT_THROW(fit_pca(Matrix(100, 67), 0), Error);
}

TEST(FitPca, Deterministic) {
  Rng rng(33);
  const auto m = fixtures::random_matrix(rng, 40, 67, 0.0, 3.14);
  EXPECT_EQ(fit_pca(m, 4), fit_pca(m, 4));
}

class PcaProjection : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(34);
    data_ = fixtures::random_matrix(rng, 50, 67, 0.0, 3.14);
    model_ = fit_pca(data_, 4);
  }
  Matrix data_;
  PcaModel model_;
};

TEST_F(PcaProjection, MeanMapsToZero) {
  for (double z : transform(model_, model_.mean)) EXPECT_NEAR(z, 0.0, 1e-12);
}

TEST_F(PcaProjection, MeanPlusFirstAxis) {
  auto v = model_.mean;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += model_.components(0, i);
  const auto z = transform(model_, v);
  EXPECT_NEAR(z[0], 1.0, 1e-9);
  for (std::size_t j = 1; j < 4; ++j) EXPECT_NEAR(z[j], 0.0, 1e-9);
}

TEST_F(PcaProjection, MatchesExplicitDotProducts) {
  Rng rng(35);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v(67);
    for (double& x : v) x = rng.uniform(0, 3.14);
    const auto z = transform(model_, v);
    for (std::size_t j = 0; j < 4; ++j) {
      long double s = 0;
      for (std::size_t i = 0; i < 67; ++i)
        s += static_cast<long double>(model_.components(j, i)) * (v[i] - model_.mean[i]);
      EXPECT_NEAR(z[j], static_cast<double>(s), 1e-12);
    }
  }
}

TEST_F(PcaProjection, InverseOfZeroIsMean) {
  EXPECT_EQ(inverse_transform(model_, std::vector<double>(4, 0.0)), model_.mean);
}

TEST_F(PcaProjection, SpanVectorsRoundTrip) {
  const std::vector<double> z{0.3, -1.2, 2.0, 0.7};
  const auto v = inverse_transform(model_, z);
  const auto back = inverse_transform(model_, transform(model_, v));
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(back[i], v[i], 1e-12);
  const auto z2 = transform(model_, v);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(z2[j], z[j], 1e-9);
}

TEST_F(PcaProjection, ResidualIsOrthogonalAndNoLargerThanCentredNorm) {
  Rng rng(36);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(67);
    for (double& x : v) x = rng.uniform(-1, 4);
    const auto rec = inverse_transform(model_, transform(model_, v));
    std::vector<double> residual(67), centred(67);
    for (std::size_t i = 0; i < 67; ++i) {
      residual[i] = v[i] - rec[i];
      centred[i] = v[i] - model_.mean[i];
    }
    EXPECT_LE(sq_norm(residual), sq_norm(centred) + 1e-12);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(dot(model_.components.row(j), residual), 0.0, 1e-8);
  }
}

TEST_F(PcaProjection, DimensionChecks) {
  EXPECT_THROW(transform(model_, std::vector<double>(66)), Error);
  EXPECT_THROW(inverse_transform(model_, std::vector<double>(3)), Error);
}
