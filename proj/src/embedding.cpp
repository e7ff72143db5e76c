#include "fairvec/embedding.hpp"

#include <cmath>
#include <cstring>
#include <unordered_set>

#include "fairvec/error.hpp"
#include "fairvec/vector_ops.hpp"

namespace fairvec {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i].empty())
      throw FormatError("empty word at vocabulary position " + std::to_string(i));
    if (!index_.emplace(words_[i], i).second)
      throw FormatError("duplicate word in vocabulary: '" + words_[i] + "'");
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

Embedding::Embedding(std::vector<std::string> words, std::vector<float> matrix, std::size_t dim)
    : Embedding(std::make_shared<const Vocabulary>(std::move(words)), std::move(matrix), dim) {}

Embedding::Embedding(std::shared_ptr<const Vocabulary> vocab, std::vector<float> matrix, std::size_t dim)
    : vocab_(std::move(vocab)), matrix_(std::move(matrix)), dim_(dim) {
  if (!vocab_)
    vocab_ = std::make_shared<const Vocabulary>();
  const std::size_t rows = vocab_->size();
  if (rows > 0 && dim_ == 0)
    throw FormatError("embedding dimension must be positive");
  if (matrix_.size() != rows * dim_)
    throw FormatError("matrix holds " + std::to_string(matrix_.size()) + " values, expected " +
                      std::to_string(rows) + " x " + std::to_string(dim_));
  norms_.resize(rows);
  normalized_ = true;
  for (std::size_t i = 0; i < rows; ++i) {
    auto r = row(i);
    for (float x : r)
      if (!std::isfinite(x))
        throw FormatError("non-finite value in vector of '" + (*vocab_)[i] + "'");
    norms_[i] = vec::norm(r);
    if (std::abs(norms_[i] - 1.0) > kNormalizedTolerance)
      normalized_ = false;
  }
}

const Vocabulary &Embedding::vocab() const noexcept {
  static const Vocabulary empty;
  return vocab_ ? *vocab_ : empty;
}

std::size_t Embedding::index_of(std::string_view word) const {
  if (auto i = find(word))
    return *i;
  throw OovError(std::string(word));
}

WordVector Embedding::v(std::string_view word) const {
  auto r = row(word);
  return WordVector{std::string(word), std::vector<float>(r.begin(), r.end())};
}

Embedding Embedding::with_matrix(std::vector<float> matrix) const {
  return Embedding(vocab_, std::move(matrix), dim_);
}

bool operator==(const Embedding &a, const Embedding &b) {
  if (a.dim_ != b.dim_ || a.size() != b.size())
    return false;
  if (a.vocab().words() != b.vocab().words())
    return false;
  return a.matrix_.empty() ||
         std::memcmp(a.matrix_.data(), b.matrix_.data(), a.matrix_.size() * sizeof(float)) == 0;
}

Embedding normalize(const Embedding &e) {
  std::vector<float> out(e.matrix().size());
  const std::size_t d = e.dim();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double n = e.row_norm(i);
    if (n == 0.0)
      throw DegenerateError("cannot normalize zero vector of '" + e.word(i) + "'");
    auto r = e.row(i);
    for (std::size_t j = 0; j < d; ++j)
      out[i * d + j] = static_cast<float>(static_cast<double>(r[j]) / n);
  }
  return e.with_matrix(std::move(out));
}

void require_normalized(const Embedding &e, std::string_view operation) {
  if (!e.normalized())
    throw PreconditionError(std::string(operation) + " requires a normalized embedding");
}

Subset subset(const Embedding &e, std::span<const std::string> words) {
  std::vector<char> wanted(e.size(), 0);
  Subset result;
  for (const auto &w : words) {
    if (auto i = e.find(w))
      wanted[*i] = 1;
    else
      result.skipped.push_back(w);
  }
  std::vector<std::string> kept;
  std::vector<float> matrix;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!wanted[i])
      continue;
    kept.push_back(e.word(i));
    auto r = e.row(i);
    matrix.insert(matrix.end(), r.begin(), r.end());
  }
  result.embedding = Embedding(std::move(kept), std::move(matrix), e.dim());
  return result;
}

} // namespace fairvec
