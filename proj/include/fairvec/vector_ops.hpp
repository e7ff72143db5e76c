#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

// Small dense-vector helpers. Inputs may be float (embedding rows) or double
// (directions, intermediates); accumulation is always double.
namespace fairvec::vec {

// Four interleaved partial sums in a fixed order: deterministic, and short
// enough dependency chains for the compiler to pipeline.
template <class A, class B>
double dot(std::span<const A> a, std::span<const B> b) noexcept {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    acc1 += static_cast<double>(a[i + 1]) * static_cast<double>(b[i + 1]);
    acc2 += static_cast<double>(a[i + 2]) * static_cast<double>(b[i + 2]);
    acc3 += static_cast<double>(a[i + 3]) * static_cast<double>(b[i + 3]);
  }
  for (; i < n; ++i)
    acc0 += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return (acc0 + acc1) + (acc2 + acc3);
}

template <class A> double norm(std::span<const A> a) noexcept {
  return std::sqrt(dot(a, a));
}

template <class A> std::vector<double> to_double(std::span<const A> a) {
  return std::vector<double>(a.begin(), a.end());
}

inline std::span<const double> view(const std::vector<double> &v) noexcept { return {v.data(), v.size()}; }
inline std::span<const float> view(const std::vector<float> &v) noexcept { return {v.data(), v.size()}; }

template <class A, class B>
std::vector<double> sub(std::span<const A> a, std::span<const B> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = static_cast<double>(a[i]) - static_cast<double>(b[i]);
  return out;
}

inline void scale(std::vector<double> &v, double s) noexcept {
  for (double &x : v)
    x *= s;
}

} // namespace fairvec::vec
