#include <gtest/gtest.h>

#include <cmath>

#include "litgraph/error.hpp"
#include "litgraph/rng.hpp"
#include "litgraph/tensor.hpp"

namespace litgraph {
namespace {

DenseMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  DenseMatrix m(r, c);
  for (auto& x : m.values()) x = rng.uniform(-2.0, 2.0);
  return m;
}

TEST(Matmul, Examples) {
  const auto a = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(matmul(a, DenseMatrix::identity(2)), a);
  EXPECT_EQ(matmul(a, DenseMatrix::from_rows({{1}, {1}})), DenseMatrix::from_rows({{3}, {7}}));
  EXPECT_THROW(matmul(a, DenseMatrix(3, 1)), InputError);
}

TEST(Matmul, TransposedVariantsAgree) {
  Rng rng(47);
  const auto a = random_matrix(rng, 4, 3);
  const auto b = random_matrix(rng, 4, 5);
  const auto c = random_matrix(rng, 6, 3);
  const auto atb = matmul_at_b(a, b);
  const auto abt = matmul_a_bt(a, c);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 4; ++k) s += a(k, i) * b(k, j);
      EXPECT_NEAR(atb(i, j), s, 1e-12);
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_NEAR(abt(i, j), dot(a.row(i), c.row(j)), 1e-12);
    }
  }
  EXPECT_THROW(matmul_at_b(a, c), InputError);
  EXPECT_THROW(matmul_a_bt(a, b), InputError);
}

TEST(Matmul, Associative) {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 1 + rng.below(5), m = 1 + rng.below(5), p = 1 + rng.below(5), q = 1 + rng.below(5);
    const auto a = random_matrix(rng, n, m), b = random_matrix(rng, m, p), c = random_matrix(rng, p, q);
    const auto left = matmul(matmul(a, b), c);
    const auto right = matmul(a, matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) EXPECT_NEAR(left.values()[i], right.values()[i], 1e-10);
  }
}

TEST(Elementwise, ReluAndSigmoid) {
  const auto r = elementwise(Activation::relu, DenseMatrix::from_rows({{-1, 0, 2}}));
  EXPECT_EQ(r, DenseMatrix::from_rows({{0, 0, 2}}));
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  for (const double x : {50.0, -50.0, 800.0, -800.0}) {
    const double s = sigmoid(x);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
  const auto s = elementwise(Activation::sigmoid, DenseMatrix::from_rows({{0}}));
  EXPECT_DOUBLE_EQ(s(0, 0), 0.5);
}

TEST(Elementwise, SigmoidSymmetry) {
  Rng rng(59);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(-30.0, 30.0);
    EXPECT_NEAR(sigmoid(x) + sigmoid(-x), 1.0, 1e-12);
  }
}

TEST(Softplus, StableAtExtremes) {
  EXPECT_NEAR(softplus(0.0), std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(softplus(1000.0), 1000.0);
  EXPECT_GE(softplus(-1000.0), 0.0);
  EXPECT_LT(softplus(-1000.0), 1e-300);
}

TEST(FiniteDifference, Examples) {
  const std::vector<double> x{3.0};
  const auto square = [](std::span<const double> v) { return v[0] * v[0]; };
  const std::vector<double> good{6.0};
  EXPECT_LT(finite_difference_check(square, x, good, 1e-5).max_relative_error, 1e-8);

  // |6.1 - 6| / max(6.1, 6, 1e-8)
  const std::vector<double> wrong{6.1};
  const auto report = finite_difference_check(square, x, wrong, 1e-5);
  EXPECT_NEAR(report.max_relative_error, 0.1 / 6.1, 1e-8);
  EXPECT_EQ(report.worst_index, 0u);
  EXPECT_DOUBLE_EQ(report.epsilon, 1e-5);

  const std::vector<double> zero{0.0};
  const auto constant = finite_difference_check([](std::span<const double>) { return 4.0; }, x, zero, 1e-5);
  EXPECT_EQ(constant.max_relative_error, 0.0);
}

TEST(FiniteDifference, ErrorsAndCoordinates) {
  const std::vector<double> x{1.0, 2.0};
  const std::vector<double> g{0.0, 0.0};
  EXPECT_THROW(finite_difference_check([](std::span<const double>) { return std::nan(""); }, x, g, 1e-5),
               NumericError);
  EXPECT_THROW(finite_difference_check([](std::span<const double>) { return 1.0; }, x, g, 0.0), InputError);
  const auto f = [](std::span<const double> v) { return v[0] + 10 * v[1]; };
  const std::vector<double> half_wrong{1.0, 0.0};
  const std::vector<std::size_t> only_first{0};
  EXPECT_LT(finite_difference_check(f, x, half_wrong, 1e-5, only_first).max_relative_error, 1e-8);
  EXPECT_EQ(finite_difference_check(f, x, half_wrong, 1e-5).worst_index, 1u);
}

TEST(DenseMatrix, Helpers) {
  DenseMatrix m(2, 2, 1.0);
  m.add_scaled(DenseMatrix::identity(2), 2.0);
  EXPECT_EQ(m, DenseMatrix::from_rows({{3, 1}, {1, 3}}));
  EXPECT_TRUE(m.all_finite());
  m(0, 1) = INFINITY;
  EXPECT_FALSE(m.all_finite());
  EXPECT_THROW(m.add_scaled(DenseMatrix(1, 2), 1.0), InputError);
  EXPECT_DOUBLE_EQ(l2_norm(DenseMatrix::from_rows({{3, 4}}).row(0)), 5.0);
}

}  // namespace
}  // namespace litgraph
