#include "fairvec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fairvec/error.hpp"

namespace fairvec {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw PreconditionError("matrix data size does not match " + std::to_string(rows) + "x" + std::to_string(cols));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

std::vector<double> Matrix::col(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::frobenius_norm() const noexcept {
  double acc = 0.0;
  for (double x : data_)
    acc += x * x;
  return std::sqrt(acc);
}

Matrix operator*(const Matrix &a, const Matrix &b) {
  if (a.cols_ != b.rows_)
    throw PreconditionError("matrix product shape mismatch");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0)
        continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix operator-(const Matrix &a, const Matrix &b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw PreconditionError("matrix difference shape mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i)
    out.data_[i] -= b.data_[i];
  return out;
}

namespace {

double off_diagonal_norm(const Matrix &a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j)
        acc += a(i, j) * a(i, j);
  return std::sqrt(acc);
}

void canonicalize_sign(Matrix &vectors, std::size_t c) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < vectors.rows(); ++r)
    if (std::abs(vectors(r, c)) > std::abs(vectors(best, c)))
      best = r;
  if (vectors(best, c) < 0.0)
    for (std::size_t r = 0; r < vectors.rows(); ++r)
      vectors(r, c) = -vectors(r, c);
}

constexpr int kMaxSweeps = 100;
constexpr double kConvergedOffDiagonal = 1e-10;

} // namespace

SymEigResult sym_eig(const Matrix &input) {
  if (input.rows() != input.cols())
    throw PreconditionError("sym_eig needs a square matrix, got " + std::to_string(input.rows()) + "x" +
                            std::to_string(input.cols()));
  const std::size_t n = input.rows();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (input(i, j) + input(j, i));
  Matrix v = Matrix::identity(n);
  const double scale = a.frobenius_norm();

  int sweeps = 0;
  bool converged = false;
  // Once the off-diagonal mass is below the convergence bound, one more
  // sweep drives it to rounding level (quadratic convergence).
  bool polishing = false;
  for (; sweeps < kMaxSweeps; ++sweeps) {
    const double off = off_diagonal_norm(a);
    if (off == 0.0 || polishing) {
      converged = off <= kConvergedOffDiagonal * scale;
      if (converged)
        break;
    }
    if (off <= kConvergedOffDiagonal * scale)
      polishing = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0)
          continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > kConvergedOffDiagonal * scale)
    throw NumericalError("Jacobi eigensolver did not converge in " + std::to_string(kMaxSweeps) + " sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymEigResult result;
  result.sweeps = sweeps;
  result.eigenvalues.resize(n);
  result.eigenvectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    result.eigenvalues[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r)
      result.eigenvectors(r, c) = v(r, order[c]);
    canonicalize_sign(result.eigenvectors, c);
  }
  return result;
}

Matrix pca(const Matrix &rows, std::size_t k, Centering centering) {
  const std::size_t n = rows.rows(), d = rows.cols();
  if (n < 2)
    throw PreconditionError("pca needs at least 2 rows, got " + std::to_string(n));
  if (k < 1 || k > std::min(n, d))
    throw PreconditionError("pca component count " + std::to_string(k) + " outside [1, " +
                            std::to_string(std::min(n, d)) + "]");
  std::vector<double> mean(d, 0.0);
  if (centering == Centering::Mean) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j)
        mean[j] += rows(i, j);
    for (double &m : mean)
      m /= static_cast<double>(n);
  }
  Matrix cov(d, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < d; ++p) {
      const double xp = rows(i, p) - mean[p];
      if (xp == 0.0)
        continue;
      for (std::size_t q = p; q < d; ++q)
        cov(p, q) += xp * (rows(i, q) - mean[q]);
    }
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = p; q < d; ++q) {
      cov(p, q) /= static_cast<double>(n);
      cov(q, p) = cov(p, q);
    }
  if (cov.frobenius_norm() == 0.0)
    throw DegenerateError("pca: covariance is zero (all rows identical)");
  const auto eig = sym_eig(cov);
  const double leading = eig.eigenvalues.front();
  if (!(eig.eigenvalues[k - 1] > 1e-12 * leading))
    throw DegenerateError("pca: component " + std::to_string(k) + " is degenerate (eigenvalue " +
                          std::to_string(eig.eigenvalues[k - 1]) + ")");
  Matrix basis(d, k);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < k; ++c)
      basis(r, c) = eig.eigenvectors(r, c);
  return basis;
}

Matrix ridge_solve(const Matrix &x, const Matrix &y, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw PreconditionError("ridge alpha must be finite and non-negative");
  if (x.rows() != y.rows())
    throw PreconditionError("ridge: X has " + std::to_string(x.rows()) + " rows, Y has " + std::to_string(y.rows()));
  const std::size_t n = x.rows(), p = x.cols(), q = y.cols();
  // Gram matrix and right-hand side.
  Matrix a(p, p), b(p, q);
  for (std::size_t s = 0; s < n; ++s) {
    auto xr = x.row(s);
    auto yr = y.row(s);
    for (std::size_t i = 0; i < p; ++i) {
      if (xr[i] == 0.0)
        continue;
      for (std::size_t j = i; j < p; ++j)
        a(i, j) += xr[i] * xr[j];
      for (std::size_t j = 0; j < q; ++j)
        b(i, j) += xr[i] * yr[j];
    }
  }
  double max_diag = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      a(i, j) = a(j, i);
    a(i, i) += alpha;
    max_diag = std::max(max_diag, a(i, i));
  }
  // Cholesky: a = L L^T, L stored in the lower triangle.
  Matrix l(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k)
      diag -= l(j, k) * l(j, k);
    if (!(diag > 1e-13 * max_diag))
      throw DegenerateError("ridge system is singular (alpha = " + std::to_string(alpha) + ")");
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < p; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k)
        s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  Matrix w(p, q);
  for (std::size_t c = 0; c < q; ++c) {
    std::vector<double> z(p);
    for (std::size_t i = 0; i < p; ++i) {
      double s = b(i, c);
      for (std::size_t k = 0; k < i; ++k)
        s -= l(i, k) * z[k];
      z[i] = s / l(i, i);
    }
    for (std::size_t i = p; i-- > 0;) {
      double s = z[i];
      for (std::size_t k = i + 1; k < p; ++k)
        s -= l(k, i) * w(k, c);
      w(i, c) = s / l(i, i);
    }
  }
  return w;
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0) || max_iterations <= 0 || !(tolerance > 0.0))
    throw UsageError("optimizer learning rate, iteration budget and tolerance must be positive");
}

namespace {

void project_unit(std::vector<double> &x) {
  double n = 0.0;
  for (double v : x)
    n += v * v;
  n = std::sqrt(n);
  if (n == 0.0)
    throw NumericalError("cannot project the zero vector onto the unit sphere");
  for (double &v : x)
    v /= n;
}

double evaluate(const Objective &f, const std::vector<double> &x, std::vector<double> &grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  const double value = f(x, grad);
  if (!std::isfinite(value))
    throw NumericalError("objective is not finite");
  for (double g : grad)
    if (!std::isfinite(g))
      throw NumericalError("gradient is not finite");
  return value;
}

} // namespace

MinimizeResult minimize(const Objective &f, std::span<const double> x0, const OptimizerConfig &cfg) {
  cfg.validate();
  std::vector<double> x(x0.begin(), x0.end());
  if (cfg.projection == Projection::UnitSphere)
    project_unit(x);
  std::vector<double> grad(x.size());
  MinimizeResult result;
  double value = evaluate(f, x, grad);
  result.trace.push_back(value);
  result.x = x;
  result.value = value;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] -= cfg.learning_rate * grad[i];
    if (cfg.projection == Projection::UnitSphere)
      project_unit(x);
    const double next = evaluate(f, x, grad);
    result.trace.push_back(next);
    if (next < result.value) {
      result.value = next;
      result.x = x;
    }
    if (std::abs(next - value) < cfg.tolerance)
      break;
    value = next;
  }
  return result;
}

double grad_check(const Objective &f, std::span<const double> x, double h) {
  if (!(h > 0.0))
    throw PreconditionError("grad_check step must be positive");
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> analytic(point.size()), scratch(point.size());
  f(point, analytic);
  double worst = 0.0;
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double saved = point[i];
    // Divide by the representable step, not the nominal 2h.
    const double hi = saved + h, lo = saved - h;
    point[i] = hi;
    const double up = f(point, scratch);
    point[i] = lo;
    const double down = f(point, scratch);
    point[i] = saved;
    const double numeric = (up - down) / (hi - lo);
    const double denom = std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

} // namespace fairvec
