#include "fairvec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fairvec/error.hpp"
#include "fairvec/log.hpp"
#include "fairvec/numerics.hpp"
#include "fairvec/vector_ops.hpp"

namespace fairvec {
namespace {

thread_local std::size_t projections = 0;

void normalize_in_place(std::vector<double> &v, const char *what) {
  const double n = vec::norm(vec::view(v));
  if (!(n > 0.0) || !std::isfinite(n))
    throw DegenerateError(std::string(what) + ": zero direction");
  vec::scale(v, 1.0 / n);
}

// Flips g so that cos(g, she - he) >= 0, or against the fallback pair when
// the anchors are missing.
void orient(BiasDirection &g, const Embedding &e, const WordPair *fallback) {
  std::vector<double> reference;
  if (e.contains("she") && e.contains("he"))
    reference = vec::sub(e.row("she"), e.row("he"));
  else if (fallback)
    reference = vec::sub(e.row(fallback->first), e.row(fallback->second));
  else
    return;
  if (vec::dot(g.view(), vec::view(reference)) < 0.0)
    for (double &x : g.values)
      x = -x;
}

} // namespace

std::string_view to_string(DirectionMethod m) noexcept {
  return m == DirectionMethod::PairDiff ? "pair-diff" : "pca-pairs";
}

DirectionMethod parse_direction_method(std::string_view name) {
  if (name == "pair-diff")
    return DirectionMethod::PairDiff;
  if (name == "pca-pairs" || name == "pca")
    return DirectionMethod::PcaPairs;
  throw UsageError("unknown direction method '" + std::string(name) + "' (expected pca-pairs or pair-diff)");
}

BiasDirection make_direction(std::vector<double> values, DirectionMethod method) {
  BiasDirection g{std::move(values), method};
  normalize_in_place(g.values, "make_direction");
  return g;
}

BiasDirection direction_pair_diff(const Embedding &e, std::string_view a, std::string_view b) {
  BiasDirection g{vec::sub(e.row(a), e.row(b)), DirectionMethod::PairDiff};
  const double n = vec::norm(g.view());
  if (n < 1e-12)
    throw DegenerateError("direction from '" + std::string(a) + "' and '" + std::string(b) +
                          "': vectors are identical");
  vec::scale(g.values, 1.0 / n);
  orient(g, e, nullptr);
  return g;
}

BiasDirection direction_pca(const Embedding &e, std::span<const WordPair> pairs) {
  std::vector<const WordPair *> usable;
  for (const auto &p : pairs) {
    if (e.contains(p.first) && e.contains(p.second))
      usable.push_back(&p);
    else
      warn("definitional pair (" + p.first + ", " + p.second + ") skipped: out of vocabulary");
  }
  if (usable.size() < 2)
    throw DegenerateError("gender direction needs at least 2 in-vocabulary definitional pairs, found " +
                          std::to_string(usable.size()));
  const std::size_t d = e.dim();
  Matrix stacked(2 * usable.size(), d);
  for (std::size_t i = 0; i < usable.size(); ++i) {
    auto f = e.row(usable[i]->first);
    auto m = e.row(usable[i]->second);
    for (std::size_t j = 0; j < d; ++j) {
      const double mu = 0.5 * (static_cast<double>(f[j]) + static_cast<double>(m[j]));
      stacked(2 * i, j) = f[j] - mu;
      stacked(2 * i + 1, j) = m[j] - mu;
    }
  }
  BiasDirection g{pca(stacked, 1, Centering::None).col(0), DirectionMethod::PcaPairs};
  normalize_in_place(g.values, "direction_pca");
  orient(g, e, usable.front());
  return g;
}

double cosine_to_direction(const Embedding &e, std::size_t i, const BiasDirection &g) {
  ++projections;
  const double n = e.row_norm(i);
  if (n == 0.0)
    return 0.0;
  return std::clamp(vec::dot(e.row(i), g.view()) / n, -1.0, 1.0);
}

std::size_t projection_count() noexcept { return projections; }
void reset_projection_count() noexcept { projections = 0; }

namespace {

NeighborList scan(const Embedding &e, std::span<const double> query, std::size_t k, std::vector<char> blocked,
                  std::string query_word) {
  if (k < 1)
    throw PreconditionError("knn needs k >= 1");
  if (query.size() != e.dim())
    throw PreconditionError("knn query has dimension " + std::to_string(query.size()) + ", embedding has " +
                            std::to_string(e.dim()));
  const double qn = vec::norm(query);
  if (qn == 0.0)
    throw DegenerateError("knn query is the zero vector");
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (blocked[i] || e.row_norm(i) == 0.0)
      continue;
    const double c = std::clamp(vec::dot(e.row(i), query) / (e.row_norm(i) * qn), -1.0, 1.0);
    scored.emplace_back(c, i);
  }
  auto better = [](const auto &x, const auto &y) {
    return x.first > y.first || (x.first == y.first && x.second < y.second);
  };
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);
  NeighborList out;
  out.query = std::move(query_word);
  out.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.entries.push_back(Neighbor{scored[i].second, e.word(scored[i].second), scored[i].first});
  return out;
}

std::vector<char> block_list(const Embedding &e, std::span<const std::string> exclude) {
  std::vector<char> blocked(e.size(), 0);
  for (const auto &w : exclude)
    if (auto i = e.find(w))
      blocked[*i] = 1;
  return blocked;
}

} // namespace

NeighborList knn(const Embedding &e, std::string_view query, std::size_t k, std::span<const std::string> exclude) {
  const std::size_t qi = e.index_of(query);
  auto blocked = block_list(e, exclude);
  blocked[qi] = 1;
  const auto q = vec::to_double(e.row(qi));
  return scan(e, q, k, std::move(blocked), std::string(query));
}

NeighborList knn(const Embedding &e, std::span<const double> query, std::size_t k,
                 std::span<const std::string> exclude) {
  return scan(e, query, k, block_list(e, exclude), {});
}

std::string analogy(const Embedding &e, std::string_view a, std::string_view b, std::string_view a2) {
  auto va = e.row(a), vb = e.row(b), va2 = e.row(a2);
  std::vector<double> target(e.dim());
  for (std::size_t j = 0; j < e.dim(); ++j)
    target[j] = static_cast<double>(vb[j]) - static_cast<double>(va[j]) + static_cast<double>(va2[j]);
  std::vector<std::string> exclude{std::string(a), std::string(a2)};
  if (a != a2)
    exclude.emplace_back(b);
  auto best = knn(e, vec::view(target), 1, exclude);
  if (best.entries.empty())
    throw DegenerateError("analogy has no candidate words");
  return best.entries.front().word;
}

} // namespace fairvec
