#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace litgraph {

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  void fill(double v);
  bool all_finite() const noexcept;
  // this += alpha * other; shapes must match.
  void add_scaled(const DenseMatrix& other, double alpha);

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Throws InputError on shape mismatch.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);  // aᵀ·b
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);  // a·bᵀ

enum class Activation { identity, relu, sigmoid };

DenseMatrix elementwise(Activation op, const DenseMatrix& x);

double relu(double x) noexcept;
// Clamped into the open interval (0, 1) so that saturated inputs stay usable.
double sigmoid(double x) noexcept;
// log(1 + e^x) without overflow.
double softplus(double x) noexcept;
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double l2_norm(std::span<const double> a) noexcept;

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double epsilon = 0.0;
};

// Central differences of `f` at `x`, compared coordinate-wise against
// `analytic`. Relative error is |a - n| / max(|a|, |n|, 1e-8). When
// `coordinates` is non-empty only those indices are probed. Throws NumericError
// if f is not finite at a probe point.
GradCheckReport finite_difference_check(const std::function<double(std::span<const double>)>& f,
                                        std::span<const double> x, std::span<const double> analytic,
                                        double epsilon, std::span<const std::size_t> coordinates = {});

}  // namespace litgraph
