#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairvec/embedding.hpp"

namespace fairvec {

enum class DirectionMethod { PairDiff, PcaPairs };

std::string_view to_string(DirectionMethod m) noexcept;
// Accepts "pair-diff" and "pca-pairs"; throws UsageError.
DirectionMethod parse_direction_method(std::string_view name);

// Unit gender direction, oriented female-positive: cos(g, she - he) >= 0
// whenever both anchors are in the vocabulary.
struct BiasDirection {
  std::vector<double> values;
  DirectionMethod method = DirectionMethod::PcaPairs;

  std::span<const double> view() const noexcept { return {values.data(), values.size()}; }
  std::size_t dim() const noexcept { return values.size(); }
};

// Wraps an explicit vector as a direction (normalized; no orientation).
BiasDirection make_direction(std::vector<double> values, DirectionMethod method = DirectionMethod::PairDiff);

struct WordPair {
  std::string first;  // female member for definitional pairs
  std::string second; // male member

  friend bool operator==(const WordPair &, const WordPair &) = default;
};

// g = (v(a) - v(b)) / |v(a) - v(b)|, then oriented by the she/he anchors.
BiasDirection direction_pair_diff(const Embedding &e, std::string_view a, std::string_view b);

// First principal component of the per-pair centered vectors of all
// in-vocabulary pairs. Out-of-vocabulary pairs are skipped with a warning.
// Oriented by she/he, falling back to the first usable pair.
BiasDirection direction_pca(const Embedding &e, std::span<const WordPair> pairs);

// Cosine clamped to [-1, 1]; throws DegenerateError on a zero vector.
template <class A, class B> double cosine(std::span<const A> u, std::span<const B> v);

// w - (w.g) g
template <class A> std::vector<double> reject(std::span<const A> w, const BiasDirection &g);

// Cosine between row i and the direction; zero for a zero row. Every metric
// and report path that scores a word against g goes through this function.
double cosine_to_direction(const Embedding &e, std::size_t i, const BiasDirection &g);

// Number of row-direction projections performed by the calling thread
// (instrumentation for complexity tests).
std::size_t projection_count() noexcept;
void reset_projection_count() noexcept;

struct Neighbor {
  std::size_t index = 0;
  std::string word;
  double cosine = 0.0;
};

struct NeighborList {
  std::string query; // empty for vector queries
  std::vector<Neighbor> entries;
};

// Exact top-k by cosine with ties broken by ascending vocabulary index. The
// query word and every word in `exclude` are never returned; rows with zero
// norm are skipped. k larger than the candidate pool truncates.
NeighborList knn(const Embedding &e, std::string_view query, std::size_t k,
                 std::span<const std::string> exclude = {});
NeighborList knn(const Embedding &e, std::span<const double> query, std::size_t k,
                 std::span<const std::string> exclude = {});

// Answers "a is to b as a2 is to ?" by the word maximizing
// cos(w, v(b) - v(a) + v(a2)). The query words a and a2 are excluded, and so
// is b unless a == a2 (the identity analogy, whose answer is b).
std::string analogy(const Embedding &e, std::string_view a, std::string_view b, std::string_view a2);

} // namespace fairvec

#include "fairvec/geometry_impl.hpp"
