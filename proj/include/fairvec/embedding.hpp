#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fairvec {

// Ordered list of unique words with O(1) reverse lookup.
class Vocabulary {
public:
  Vocabulary() = default;
  // Throws FormatError on duplicates or empty words.
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::string &operator[](std::size_t i) const { return words_[i]; }
  const std::vector<std::string> &words() const noexcept { return words_; }

  std::optional<std::size_t> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }

  auto begin() const noexcept { return words_.begin(); }
  auto end() const noexcept { return words_.end(); }

private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

struct WordVector {
  std::string word;
  std::vector<float> values;
};

// Immutable word embedding: vocabulary plus a V x D row-major float32
// matrix. Copies share the vocabulary; the matrix is owned by value.
class Embedding {
public:
  Embedding() = default;

  // Validates shape and finiteness. The `normalized` flag is derived: it is
  // true iff every row has Euclidean norm within 1e-5 of 1.
  Embedding(std::vector<std::string> words, std::vector<float> matrix, std::size_t dim);
  Embedding(std::shared_ptr<const Vocabulary> vocab, std::vector<float> matrix, std::size_t dim);

  std::size_t size() const noexcept { return vocab_ ? vocab_->size() : 0; }
  std::size_t dim() const noexcept { return dim_; }
  bool normalized() const noexcept { return normalized_; }
  bool empty() const noexcept { return size() == 0; }

  const Vocabulary &vocab() const noexcept;
  const std::shared_ptr<const Vocabulary> &shared_vocab() const noexcept { return vocab_; }
  const std::string &word(std::size_t i) const { return vocab()[i]; }

  std::optional<std::size_t> find(std::string_view word) const { return vocab().find(word); }
  bool contains(std::string_view word) const { return vocab().contains(word); }
  // Throws OovError.
  std::size_t index_of(std::string_view word) const;

  std::span<const float> row(std::size_t i) const noexcept { return {matrix_.data() + i * dim_, dim_}; }
  std::span<const float> row(std::string_view word) const { return row(index_of(word)); }
  // Euclidean norm of row i, computed once at construction.
  double row_norm(std::size_t i) const noexcept { return norms_[i]; }

  // Copy of the vector for `word`; throws OovError.
  WordVector v(std::string_view word) const;

  const std::vector<float> &matrix() const noexcept { return matrix_; }

  // Same vocabulary, different matrix (used by debiasers).
  Embedding with_matrix(std::vector<float> matrix) const;

  friend bool operator==(const Embedding &a, const Embedding &b);

private:
  std::shared_ptr<const Vocabulary> vocab_;
  std::vector<float> matrix_;
  std::vector<double> norms_;
  std::size_t dim_ = 0;
  bool normalized_ = false;
};

inline constexpr double kNormalizedTolerance = 1e-5;

// Row-wise unit normalization; throws DegenerateError naming the first
// zero row.
Embedding normalize(const Embedding &e);

// Throws PreconditionError when `e` is not normalized.
void require_normalized(const Embedding &e, std::string_view operation);

struct Subset {
  Embedding embedding;
  std::vector<std::string> skipped;
};

// Restricts `e` to the in-vocabulary members of `words`, keeping the
// original relative order. Repeated requests for a word count once.
Subset subset(const Embedding &e, std::span<const std::string> words);

enum class Format { Auto, Text, Word2VecBin, VocabNpy };

std::string_view to_string(Format f) noexcept;
// Accepts "auto", "text", "word2vec-bin", "vocab-npy"; throws UsageError.
Format parse_format(std::string_view name);

// Resolves Format::Auto from the file extension: .txt/.vec -> text,
// .bin -> word2vec-bin, .npy/.vocab (or a stem with both siblings) ->
// vocab-npy. Throws FormatError when the extension is unknown.
Format sniff_format(const std::filesystem::path &path);

// For the vocab-npy format `path` may name the .npy file, the .vocab file,
// or their shared stem.
Embedding load(const std::filesystem::path &path, Format format = Format::Auto);
void save(const Embedding &e, const std::filesystem::path &path, Format format = Format::Auto);

} // namespace fairvec
