#include "fairvec/lexicons.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "fairvec/error.hpp"
#include "lexicon_data.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace fairvec {

std::string_view to_string(LexiconKind k) noexcept {
  switch (k) {
  case LexiconKind::WordList:
    return "word-list";
  case LexiconKind::PairList:
    return "pair-list";
  case LexiconKind::WeatSpec:
    return "weat-spec";
  case LexiconKind::SemBiasSet:
    return "sembias-set";
  }
  return "word-list";
}

LexiconKind parse_lexicon_kind(std::string_view name) {
  for (auto k : {LexiconKind::WordList, LexiconKind::PairList, LexiconKind::WeatSpec, LexiconKind::SemBiasSet})
    if (to_string(k) == name)
      return k;
  throw UsageError("unknown lexicon kind '" + std::string(name) +
                   "' (expected word-list, pair-list, weat-spec or sembias-set)");
}

namespace {

template <class T> const T &expect(const Lexicon &lex, LexiconKind kind) {
  if (lex.kind != kind || !std::holds_alternative<T>(lex.payload))
    throw UsageError("lexicon '" + lex.name + "' is a " + std::string(to_string(lex.kind)) + ", not a " +
                     std::string(to_string(kind)));
  return std::get<T>(lex.payload);
}

} // namespace

const std::vector<std::string> &Lexicon::words() const {
  return expect<std::vector<std::string>>(*this, LexiconKind::WordList);
}
const std::vector<WordPair> &Lexicon::pairs() const { return expect<std::vector<WordPair>>(*this, LexiconKind::PairList); }
const WeatSpec &Lexicon::weat() const { return expect<WeatSpec>(*this, LexiconKind::WeatSpec); }
const std::vector<SemBiasInstance> &Lexicon::sembias() const {
  return expect<std::vector<SemBiasInstance>>(*this, LexiconKind::SemBiasSet);
}

std::vector<std::string> Lexicon::all_words() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  auto add = [&](const std::string &w) {
    if (seen.insert(w).second)
      out.push_back(w);
  };
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::vector<std::string>>) {
          for (const auto &w : p)
            add(w);
        } else if constexpr (std::is_same_v<T, std::vector<WordPair>>) {
          for (const auto &pair : p) {
            add(pair.first);
            add(pair.second);
          }
        } else if constexpr (std::is_same_v<T, WeatSpec>) {
          for (const auto *set : {&p.x, &p.y, &p.a, &p.b})
            for (const auto &w : *set)
              add(w);
        } else {
          for (const auto &inst : p)
            for (const auto &pair : inst.pairs) {
              add(pair.a);
              add(pair.b);
            }
        }
      },
      payload);
  return out;
}

void Lexicon::validate() const {
  switch (kind) {
  case LexiconKind::WordList:
    for (std::size_t i = 0; i < words().size(); ++i)
      if (words()[i].empty())
        throw FormatError("lexicon '" + name + "': empty word at entry " + std::to_string(i + 1));
    break;
  case LexiconKind::PairList:
    for (std::size_t i = 0; i < pairs().size(); ++i) {
      const auto &p = pairs()[i];
      if (p.first.empty() || p.second.empty())
        throw FormatError("lexicon '" + name + "': empty word in pair " + std::to_string(i));
      if (p.first == p.second)
        throw FormatError("lexicon '" + name + "': pair " + std::to_string(i) + " repeats '" + p.first + "'");
    }
    break;
  case LexiconKind::WeatSpec:
    weat().validate();
    break;
  case LexiconKind::SemBiasSet:
    for (std::size_t i = 0; i < sembias().size(); ++i) {
      try {
        sembias()[i].validate();
      } catch (const FormatError &e) {
        throw FormatError("lexicon '" + name + "' instance " + std::to_string(i) + ": " + e.what());
      }
    }
    break;
  }
}

bool operator==(const Lexicon &a, const Lexicon &b) { return a.kind == b.kind && a.payload == b.payload; }

// --- bundled ---------------------------------------------------------------

namespace {

std::vector<WordPair> to_pairs(const std::vector<std::pair<std::string_view, std::string_view>> &raw) {
  std::vector<WordPair> out;
  for (const auto &[f, m] : raw)
    out.push_back({std::string(f), std::string(m)});
  return out;
}

std::vector<std::string> to_strings(const std::vector<std::string_view> &raw) {
  return {raw.begin(), raw.end()};
}

Lexicon make_bundled(std::string_view name) {
  Lexicon lex;
  lex.name = std::string(name);
  lex.source = LexiconSource::Bundled;
  if (name == "definitional-pairs") {
    lex.kind = LexiconKind::PairList;
    lex.payload = to_pairs(data::definitional_pairs());
  } else if (name == "equalize-pairs") {
    lex.kind = LexiconKind::PairList;
    lex.payload = to_pairs(data::equalize_pairs());
  } else if (name == "gender-specific") {
    lex.kind = LexiconKind::WordList;
    lex.payload = to_strings(data::gender_specific());
  } else if (name == "weat-career-family") {
    const auto &w = data::weat_career_family();
    lex.kind = LexiconKind::WeatSpec;
    lex.payload = WeatSpec{std::string(w.name), to_strings(w.x), to_strings(w.y), to_strings(w.a), to_strings(w.b)};
  } else if (name == "sembias-sample") {
    lex.kind = LexiconKind::SemBiasSet;
    std::vector<SemBiasInstance> set;
    for (const auto &row : data::sembias_sample()) {
      SemBiasInstance inst;
      for (std::size_t i = 0; i < 4; ++i)
        inst.pairs[i] = {std::string(row.pairs[i].a), std::string(row.pairs[i].b),
                         parse_sembias_label(row.pairs[i].label)};
      set.push_back(std::move(inst));
    }
    lex.payload = std::move(set);
  } else {
    std::string known;
    for (const auto &n : bundled_names())
      known += (known.empty() ? "" : ", ") + n;
    throw UsageError("unknown bundled lexicon '" + std::string(name) + "'; available: " + known);
  }
  lex.validate();
  return lex;
}

} // namespace

std::vector<std::string> bundled_names() {
  return {"definitional-pairs", "equalize-pairs", "gender-specific", "weat-career-family", "sembias-sample"};
}

Lexicon bundled(std::string_view name) { return make_bundled(name); }

// --- parsing ---------------------------------------------------------------

namespace {

class Folder {
public:
  Folder(bool enabled, std::vector<std::pair<std::string, std::string>> &log) : enabled_(enabled), log_(log) {}

  std::string operator()(std::string word) {
    if (!enabled_)
      return word;
    std::string lowered = word;
    for (char &c : lowered)
      if (c >= 'A' && c <= 'Z')
        c = static_cast<char>(c - 'A' + 'a');
    if (lowered != word)
      log_.emplace_back(word, lowered);
    return lowered;
  }

private:
  bool enabled_;
  std::vector<std::pair<std::string, std::string>> &log_;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string string_field(const json &obj, const char *key, const std::string &where) {
  if (!obj.is_object() || !obj.contains(key))
    throw FormatError(where + ": missing field \"" + key + "\"");
  if (!obj[key].is_string())
    throw FormatError(where + ": field \"" + key + "\" must be a string");
  return obj[key].get<std::string>();
}

std::vector<std::string> word_array(const json &obj, const char *key, const std::string &where, Folder &fold) {
  if (!obj.contains(key))
    throw FormatError(where + ": missing field \"" + key + "\"");
  const auto &arr = obj[key];
  if (!arr.is_array())
    throw FormatError(where + ": field \"" + key + "\" must be an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string())
      throw FormatError(where + ": " + key + "[" + std::to_string(i) + "] is not a string");
    out.push_back(fold(arr[i].get<std::string>()));
  }
  return out;
}

json parse_json(std::string_view text, const std::string &name) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw FormatError("lexicon '" + name + "': invalid JSON: " + e.what());
  }
}

} // namespace

Lexicon parse_lexicon(std::string_view text, LexiconKind kind, std::string name, LexiconOptions options) {
  Lexicon lex;
  lex.name = std::move(name);
  lex.kind = kind;
  lex.source = LexiconSource::File;
  lex.case_folded = options.case_fold;
  Folder fold(options.case_fold, lex.folded);

  switch (kind) {
  case LexiconKind::WordList: {
    std::vector<std::string> words;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      auto w = trim(line);
      if (!w.empty())
        words.push_back(fold(std::move(w)));
    }
    lex.payload = std::move(words);
    break;
  }
  case LexiconKind::PairList: {
    const json doc = parse_json(text, lex.name);
    if (!doc.is_array())
      throw FormatError("lexicon '" + lex.name + "': pair list must be a JSON array of [a, b] arrays");
    std::vector<WordPair> pairs;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const auto &p = doc[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
        throw FormatError("lexicon '" + lex.name + "': entry " + std::to_string(i) + " is not a [word, word] pair");
      pairs.push_back({fold(p[0].get<std::string>()), fold(p[1].get<std::string>())});
    }
    lex.payload = std::move(pairs);
    break;
  }
  case LexiconKind::WeatSpec: {
    const json doc = parse_json(text, lex.name);
    const std::string where = "WEAT spec '" + lex.name + "'";
    if (!doc.is_object())
      throw FormatError(where + ": expected a JSON object {name, X, Y, A, B}");
    WeatSpec spec;
    spec.name = string_field(doc, "name", where);
    spec.x = word_array(doc, "X", where, fold);
    spec.y = word_array(doc, "Y", where, fold);
    spec.a = word_array(doc, "A", where, fold);
    spec.b = word_array(doc, "B", where, fold);
    if (lex.name.empty())
      lex.name = spec.name;
    lex.payload = std::move(spec);
    break;
  }
  case LexiconKind::SemBiasSet: {
    const json doc = parse_json(text, lex.name);
    if (!doc.is_array())
      throw FormatError("SemBias set '" + lex.name + "': expected a JSON array of instances");
    std::vector<SemBiasInstance> set;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const std::string where = "SemBias instance " + std::to_string(i);
      const auto &inst = doc[i];
      if (!inst.is_object() || !inst.contains("pairs") || !inst["pairs"].is_array())
        throw FormatError(where + ": missing field \"pairs\"");
      const auto &pairs = inst["pairs"];
      if (pairs.size() != 4)
        throw FormatError(where + ": expected 4 pairs, found " + std::to_string(pairs.size()));
      SemBiasInstance out;
      for (std::size_t p = 0; p < 4; ++p) {
        const std::string pw = where + " pair " + std::to_string(p);
        out.pairs[p].a = fold(string_field(pairs[p], "a", pw));
        out.pairs[p].b = fold(string_field(pairs[p], "b", pw));
        try {
          out.pairs[p].label = parse_sembias_label(string_field(pairs[p], "label", pw));
        } catch (const FormatError &e) {
          throw FormatError(pw + ": " + e.what());
        }
      }
      try {
        out.validate();
      } catch (const FormatError &e) {
        throw FormatError(where + ": " + e.what());
      }
      set.push_back(std::move(out));
    }
    lex.payload = std::move(set);
    break;
  }
  }
  lex.validate();
  return lex;
}

Lexicon load_lexicon(const fs::path &path, LexiconKind kind, LexiconOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open lexicon '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_lexicon(ss.str(), kind, path.stem().string(), options);
  } catch (const FormatError &e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string serialize(const Lexicon &lex) {
  switch (lex.kind) {
  case LexiconKind::WordList: {
    std::string out;
    for (const auto &w : lex.words())
      out += w + "\n";
    return out;
  }
  case LexiconKind::PairList: {
    json doc = json::array();
    for (const auto &p : lex.pairs())
      doc.push_back({p.first, p.second});
    return doc.dump(2) + "\n";
  }
  case LexiconKind::WeatSpec: {
    const auto &w = lex.weat();
    json doc{{"name", w.name}, {"X", w.x}, {"Y", w.y}, {"A", w.a}, {"B", w.b}};
    return doc.dump(2) + "\n";
  }
  case LexiconKind::SemBiasSet: {
    json doc = json::array();
    for (const auto &inst : lex.sembias()) {
      json pairs = json::array();
      for (const auto &p : inst.pairs)
        pairs.push_back({{"a", p.a}, {"b", p.b}, {"label", to_string(p.label)}});
      doc.push_back({{"pairs", pairs}});
    }
    return doc.dump(2) + "\n";
  }
  }
  return {};
}

Coverage coverage(const Lexicon &lex, const Embedding &e) {
  Coverage c;
  for (auto &w : lex.all_words())
    (e.contains(w) ? c.in_vocabulary : c.out_of_vocabulary).push_back(std::move(w));
  return c;
}

} // namespace fairvec
