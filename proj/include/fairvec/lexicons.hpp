#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fairvec/embedding.hpp"
#include "fairvec/geometry.hpp"
#include "fairvec/metrics.hpp"

namespace fairvec {

enum class LexiconKind { WordList, PairList, WeatSpec, SemBiasSet };
enum class LexiconSource { Bundled, File };

std::string_view to_string(LexiconKind k) noexcept;
// Accepts "word-list", "pair-list", "weat-spec", "sembias-set".
LexiconKind parse_lexicon_kind(std::string_view name);

struct Lexicon {
  using Payload = std::variant<std::vector<std::string>, std::vector<WordPair>, fairvec::WeatSpec,
                               std::vector<SemBiasInstance>>;

  std::string name;
  LexiconKind kind = LexiconKind::WordList;
  LexiconSource source = LexiconSource::File;
  bool case_folded = false;
  Payload payload;
  // (original, folded) for every word changed by case folding.
  std::vector<std::pair<std::string, std::string>> folded;

  // Typed accessors; throw UsageError on a kind mismatch.
  const std::vector<std::string> &words() const;
  const std::vector<WordPair> &pairs() const;
  const fairvec::WeatSpec &weat() const;
  const std::vector<SemBiasInstance> &sembias() const;

  // Every word mentioned, first occurrence order, without repeats.
  std::vector<std::string> all_words() const;

  // Kind-specific invariants; throws FormatError.
  void validate() const;

  friend bool operator==(const Lexicon &a, const Lexicon &b);
};

inline constexpr std::string_view kBundledLexiconVersion = "1";

// definitional-pairs, equalize-pairs, gender-specific, weat-career-family,
// sembias-sample. Throws UsageError listing the names.
Lexicon bundled(std::string_view name);
std::vector<std::string> bundled_names();

struct LexiconOptions {
  bool case_fold = false;
};

// Word lists are newline-separated UTF-8; the other kinds are JSON.
Lexicon parse_lexicon(std::string_view text, LexiconKind kind, std::string name = {}, LexiconOptions options = {});
Lexicon load_lexicon(const std::filesystem::path &path, LexiconKind kind, LexiconOptions options = {});
// Inverse of parse_lexicon for the lexicon's kind.
std::string serialize(const Lexicon &lex);

struct Coverage {
  std::vector<std::string> in_vocabulary;
  std::vector<std::string> out_of_vocabulary;
};

Coverage coverage(const Lexicon &lex, const Embedding &e);

} // namespace fairvec
