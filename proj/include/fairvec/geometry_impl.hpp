#pragma once

#include <algorithm>
#include <cmath>

#include "fairvec/error.hpp"
#include "fairvec/vector_ops.hpp"

namespace fairvec {

template <class A, class B> double cosine(std::span<const A> u, std::span<const B> v) {
  if (u.size() != v.size())
    throw PreconditionError("cosine of vectors with different lengths");
  const double nu = vec::norm(u), nv = vec::norm(v);
  if (nu == 0.0 || nv == 0.0)
    throw DegenerateError("cosine with a zero vector");
  return std::clamp(vec::dot(u, v) / (nu * nv), -1.0, 1.0);
}

template <class A> std::vector<double> reject(std::span<const A> w, const BiasDirection &g) {
  if (w.size() != g.dim())
    throw PreconditionError("reject: vector and direction lengths differ");
  const double proj = vec::dot(w, g.view());
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    out[i] = static_cast<double>(w[i]) - proj * g.values[i];
  return out;
}

} // namespace fairvec
