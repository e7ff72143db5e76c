#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fairvec {

// Dense row-major double matrix.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::vector<double> col(std::size_t c) const;

  const std::vector<double> &data() const noexcept { return data_; }

  Matrix transposed() const;
  double frobenius_norm() const noexcept;

  friend Matrix operator*(const Matrix &a, const Matrix &b);
  friend Matrix operator-(const Matrix &a, const Matrix &b);

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

struct SymEigResult {
  std::vector<double> eigenvalues; // descending
  Matrix eigenvectors;             // column i pairs with eigenvalues[i]
  int sweeps = 0;
};

// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// The input is symmetrized as (A + A^T)/2. Each eigenvector is signed so its
// largest-magnitude component (first on ties) is positive.
SymEigResult sym_eig(const Matrix &a);

enum class Centering { Mean, None };

// Top-k principal directions (D x k, orthonormal columns) of the rows of
// `rows`, from the covariance (1/N) Xc^T Xc. Throws DegenerateError when
// the covariance is zero or its k-th eigenvalue vanishes.
Matrix pca(const Matrix &rows, std::size_t k, Centering centering = Centering::Mean);

// W = (X^T X + alpha I)^{-1} X^T Y through a Cholesky factorization.
Matrix ridge_solve(const Matrix &x, const Matrix &y, double alpha);

// Objective value at x; writes the analytic gradient into `grad`.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

enum class Projection { None, UnitSphere };

struct OptimizerConfig {
  double learning_rate = 0.01;
  int max_iterations = 300;
  double tolerance = 1e-6; // on |F_t - F_{t-1}|
  Projection projection = Projection::None;

  void validate() const;
};

struct MinimizeResult {
  std::vector<double> x;     // lowest-objective iterate visited
  std::vector<double> trace; // F at every iterate, starting with x0
  double value = 0.0;        // F(x)
};

// Plain gradient descent with optional renormalization onto the unit sphere
// after every step (x0 is projected too). Stops after max_iterations steps
// or when successive objective values differ by less than the tolerance.
// Throws NumericalError on a non-finite value or gradient.
MinimizeResult minimize(const Objective &f, std::span<const double> x0, const OptimizerConfig &cfg = {});

// Largest component-wise relative error between the analytic gradient and
// central differences with step h; denominator max(1e-8, |a| + |n|).
double grad_check(const Objective &f, std::span<const double> x, double h = 1e-5);

} // namespace fairvec
