#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "fairvec/embedding.hpp"
#include "fairvec/error.hpp"
#include "fairvec/log.hpp"

namespace fs = std::filesystem;

namespace fairvec {
namespace {

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad())
    throw IoError("read failure on '" + path.string() + "'");
  return std::move(ss).str();
}

void write_file(const fs::path &path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out)
    throw IoError("write failure on '" + path.string() + "'");
}

bool is_space(char c) { return c == ' ' || c == '\t'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i]))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j]))
      ++j;
    if (j > i)
      tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <class T> std::optional<T> parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    return std::nullopt;
  return value;
}

std::string location(const fs::path &path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

// Accumulates rows while enforcing keep-first duplicate handling.
class Builder {
public:
  explicit Builder(const fs::path &source) : source_(source) {}

  void set_dim(std::size_t d) { dim_ = d; }
  std::size_t dim() const { return dim_; }

  // Returns false when the word was a duplicate and its row was dropped.
  bool add(std::string word, std::span<const float> values) {
    if (!seen_.insert(word).second) {
      warn("duplicate word '" + word + "' in " + source_.string() + "; keeping first occurrence");
      return false;
    }
    words_.push_back(std::move(word));
    matrix_.insert(matrix_.end(), values.begin(), values.end());
    return true;
  }

  Embedding finish() && { return Embedding(std::move(words_), std::move(matrix_), dim_); }

private:
  fs::path source_;
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<float> matrix_;
  std::unordered_set<std::string> seen_;
};

void check_finite(float x, const std::string &where) {
  if (!std::isfinite(x))
    throw FormatError(where + ": non-finite value");
}

void check_word_serializable(const std::string &w) {
  if (w.empty() || w.find_first_of(" \t\r\n") != std::string::npos)
    throw FormatError("word '" + w + "' contains whitespace and cannot be serialized");
}

// --- text ------------------------------------------------------------------

Embedding load_text(const fs::path &path) {
  const std::string data = read_file(path);
  std::string_view rest = data;
  Builder builder(path);
  std::optional<std::size_t> declared_rows;
  std::size_t line_no = 0;
  std::size_t records = 0;
  std::vector<float> values;
  bool first = true;
  while (!rest.empty()) {
    auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    auto tokens = split_tokens(line);
    if (tokens.empty())
      continue;
    if (first) {
      first = false;
      if (tokens.size() == 2) {
        auto v = parse_number<std::size_t>(tokens[0]);
        auto d = parse_number<std::size_t>(tokens[1]);
        if (v && d) {
          if (*d == 0)
            throw FormatError(location(path, line_no) + ": header declares zero dimension");
          declared_rows = *v;
          builder.set_dim(*d);
          continue;
        }
      }
    }
    if (builder.dim() == 0) {
      if (tokens.size() < 2)
        throw FormatError(location(path, line_no) + ": record has no vector components");
      builder.set_dim(tokens.size() - 1);
    }
    if (tokens.size() != builder.dim() + 1)
      throw FormatError(location(path, line_no) + ": expected " + std::to_string(builder.dim()) +
                        " components, found " + std::to_string(tokens.size() - 1));
    values.resize(builder.dim());
    for (std::size_t j = 0; j < builder.dim(); ++j) {
      auto x = parse_number<float>(tokens[j + 1]);
      if (!x)
        throw FormatError(location(path, line_no) + ": malformed number '" + std::string(tokens[j + 1]) + "'");
      check_finite(*x, location(path, line_no));
      values[j] = *x;
    }
    builder.add(std::string(tokens[0]), values);
    ++records;
  }
  if (declared_rows && *declared_rows != records)
    throw FormatError(path.string() + ": header declares " + std::to_string(*declared_rows) + " rows, found " +
                      std::to_string(records));
  return std::move(builder).finish();
}

void append_float(std::string &out, float x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  out.append(buf.data(), ptr);
}

void save_text(const Embedding &e, const fs::path &path) {
  std::string out;
  out += std::to_string(e.size()) + " " + std::to_string(e.dim()) + "\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    check_word_serializable(e.word(i));
    out += e.word(i);
    for (float x : e.row(i)) {
      out += ' ';
      append_float(out, x);
    }
    out += '\n';
  }
  write_file(path, out);
}

// --- word2vec binary -------------------------------------------------------

float read_f32le(const char *p) {
  std::uint32_t bits;
  std::memcpy(&bits, p, 4);
  if constexpr (std::endian::native == std::endian::big)
    bits = __builtin_bswap32(bits);
  return std::bit_cast<float>(bits);
}

void append_f32le(std::string &out, float x) {
  auto bits = std::bit_cast<std::uint32_t>(x);
  if constexpr (std::endian::native == std::endian::big)
    bits = __builtin_bswap32(bits);
  char b[4];
  std::memcpy(b, &bits, 4);
  out.append(b, 4);
}

Embedding load_word2vec_bin(const fs::path &path) {
  const std::string data = read_file(path);
  auto nl = data.find('\n');
  if (nl == std::string::npos)
    throw FormatError(path.string() + ": missing header line");
  std::string_view header(data.data(), nl);
  if (!header.empty() && header.back() == '\r')
    header.remove_suffix(1);
  auto tokens = split_tokens(header);
  std::optional<std::size_t> rows, dim;
  if (tokens.size() == 2) {
    rows = parse_number<std::size_t>(tokens[0]);
    dim = parse_number<std::size_t>(tokens[1]);
  }
  if (!rows || !dim || *dim == 0)
    throw FormatError(path.string() + ": malformed header '" + std::string(header) + "'");

  Builder builder(path);
  builder.set_dim(*dim);
  std::size_t pos = nl + 1;
  std::vector<float> values(*dim);
  const std::size_t bytes = *dim * 4;
  for (std::size_t r = 0; r < *rows; ++r) {
    if (pos < data.size() && data[pos] == '\n')
      ++pos;
    auto sp = data.find(' ', pos);
    if (sp == std::string::npos)
      throw FormatError(path.string() + ": truncated record " + std::to_string(r));
    std::string word = data.substr(pos, sp - pos);
    if (word.empty() || word.find('\n') != std::string::npos)
      throw FormatError(path.string() + ": malformed word in record " + std::to_string(r));
    pos = sp + 1;
    if (data.size() - pos < bytes)
      throw FormatError(path.string() + ": truncated vector for '" + word + "'");
    for (std::size_t j = 0; j < *dim; ++j) {
      values[j] = read_f32le(data.data() + pos + 4 * j);
      check_finite(values[j], path.string() + ": vector of '" + word + "'");
    }
    pos += bytes;
    builder.add(std::move(word), values);
  }
  while (pos < data.size() && (data[pos] == '\n' || data[pos] == '\r' || data[pos] == ' '))
    ++pos;
  if (pos != data.size())
    throw FormatError(path.string() + ": trailing data after " + std::to_string(*rows) + " records");
  return std::move(builder).finish();
}

void save_word2vec_bin(const Embedding &e, const fs::path &path) {
  std::string out;
  out.reserve(32 + e.size() * (16 + 4 * e.dim()));
  out += std::to_string(e.size()) + " " + std::to_string(e.dim()) + "\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    check_word_serializable(e.word(i));
    out += e.word(i);
    out += ' ';
    for (float x : e.row(i))
      append_f32le(out, x);
    out += '\n';
  }
  write_file(path, out);
}

// --- .vocab + .npy ---------------------------------------------------------

struct NpyPaths {
  fs::path vocab;
  fs::path npy;
};

NpyPaths npy_paths(const fs::path &path) {
  fs::path stem = path;
  if (path.extension() == ".npy" || path.extension() == ".vocab")
    stem.replace_extension();
  fs::path v = stem, n = stem;
  v += ".vocab";
  n += ".npy";
  return {v, n};
}

constexpr std::string_view kNpyMagic = "\x93NUMPY";

// Extracts the value text following `'key':` in a NPY header dictionary.
std::string_view header_value(std::string_view header, std::string_view key, const fs::path &path) {
  const std::string quoted = "'" + std::string(key) + "'";
  auto k = header.find(quoted);
  if (k == std::string_view::npos)
    throw FormatError(path.string() + ": NPY header lacks '" + std::string(key) + "'");
  auto colon = header.find(':', k + quoted.size());
  if (colon == std::string_view::npos)
    throw FormatError(path.string() + ": malformed NPY header");
  std::size_t start = colon + 1;
  while (start < header.size() && header[start] == ' ')
    ++start;
  std::size_t end = start;
  if (start < header.size() && header[start] == '(') {
    end = header.find(')', start);
    if (end == std::string_view::npos)
      throw FormatError(path.string() + ": malformed NPY shape");
    ++end;
  } else {
    while (end < header.size() && header[end] != ',' && header[end] != '}')
      ++end;
  }
  auto value = header.substr(start, end - start);
  while (!value.empty() && value.back() == ' ')
    value.remove_suffix(1);
  return value;
}

std::vector<std::size_t> parse_shape(std::string_view text, const fs::path &path) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    throw FormatError(path.string() + ": malformed NPY shape " + std::string(text));
  text = text.substr(1, text.size() - 2);
  std::vector<std::size_t> dims;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == ','))
      ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ',' && text[j] != ' ')
      ++j;
    if (j > i) {
      auto n = parse_number<std::size_t>(text.substr(i, j - i));
      if (!n)
        throw FormatError(path.string() + ": malformed NPY shape entry");
      dims.push_back(*n);
    }
    i = j;
  }
  return dims;
}

std::vector<std::string> load_vocab_lines(const fs::path &path) {
  const std::string data = read_file(path);
  std::vector<std::string> words;
  std::string_view rest = data;
  std::size_t line_no = 0;
  while (!rest.empty()) {
    auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty())
      throw FormatError(location(path, line_no) + ": empty vocabulary entry");
    words.emplace_back(line);
  }
  return words;
}

Embedding load_vocab_npy(const fs::path &path) {
  const auto paths = npy_paths(path);
  auto words = load_vocab_lines(paths.vocab);
  const std::string data = read_file(paths.npy);
  const auto &npy = paths.npy;
  if (data.size() < 10 || std::string_view(data).substr(0, 6) != kNpyMagic)
    throw FormatError(npy.string() + ": not a NPY file");
  const auto major = static_cast<unsigned char>(data[6]);
  const auto minor = static_cast<unsigned char>(data[7]);
  if (major != 1 || minor != 0)
    throw FormatError(npy.string() + ": unsupported NPY version " + std::to_string(major) + "." +
                      std::to_string(minor) + " (only 1.0)");
  const std::size_t header_len =
      static_cast<unsigned char>(data[8]) | (static_cast<std::size_t>(static_cast<unsigned char>(data[9])) << 8);
  if (data.size() < 10 + header_len)
    throw FormatError(npy.string() + ": truncated NPY header");
  std::string_view header(data.data() + 10, header_len);

  const auto descr = header_value(header, "descr", npy);
  std::size_t item = 0;
  if (descr == "'<f4'")
    item = 4;
  else if (descr == "'<f8'")
    item = 8;
  else
    throw FormatError(npy.string() + ": unsupported dtype " + std::string(descr) +
                      " (need little-endian float32 or float64)");
  if (header_value(header, "fortran_order", npy) != "False")
    throw FormatError(npy.string() + ": Fortran-order arrays are not supported");
  const auto shape = parse_shape(header_value(header, "shape", npy), npy);
  if (shape.size() != 2)
    throw FormatError(npy.string() + ": expected a 2-D array");
  const std::size_t rows = shape[0], dim = shape[1];
  if (rows != words.size())
    throw FormatError(npy.string() + ": " + std::to_string(rows) + " rows but " + paths.vocab.string() + " has " +
                      std::to_string(words.size()) + " words");
  if (rows > 0 && dim == 0)
    throw FormatError(npy.string() + ": zero embedding dimension");
  const std::size_t offset = 10 + header_len;
  if (data.size() - offset != rows * dim * item)
    throw FormatError(npy.string() + ": payload size does not match shape");
  if (item == 8)
    warn(npy.string() + ": float64 data down-cast to float32");

  Builder builder(paths.vocab);
  builder.set_dim(dim);
  std::vector<float> values(dim);
  const char *p = data.data() + offset;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < dim; ++j, p += item) {
      if (item == 4) {
        values[j] = read_f32le(p);
      } else {
        std::uint64_t bits;
        std::memcpy(&bits, p, 8);
        if constexpr (std::endian::native == std::endian::big)
          bits = __builtin_bswap64(bits);
        values[j] = static_cast<float>(std::bit_cast<double>(bits));
      }
      check_finite(values[j], npy.string() + ": row " + std::to_string(r));
    }
    builder.add(std::move(words[r]), values);
  }
  return std::move(builder).finish();
}

void save_vocab_npy(const Embedding &e, const fs::path &path) {
  const auto paths = npy_paths(path);
  std::string vocab;
  for (const auto &w : e.vocab()) {
    if (w.find_first_of("\r\n") != std::string::npos)
      throw FormatError("word '" + w + "' contains a line break and cannot be serialized");
    vocab += w;
    vocab += '\n';
  }
  std::string dict = "{'descr': '<f4', 'fortran_order': False, 'shape': (" + std::to_string(e.size()) + ", " +
                     std::to_string(e.dim()) + "), }";
  std::size_t total = 10 + dict.size() + 1;
  dict.append((64 - total % 64) % 64, ' ');
  dict += '\n';
  std::string npy(kNpyMagic);
  npy += '\x01';
  npy += '\x00';
  npy += static_cast<char>(dict.size() & 0xff);
  npy += static_cast<char>((dict.size() >> 8) & 0xff);
  npy += dict;
  npy.reserve(npy.size() + e.matrix().size() * 4);
  for (float x : e.matrix())
    append_f32le(npy, x);
  write_file(paths.vocab, vocab);
  write_file(paths.npy, npy);
}

} // namespace

std::string_view to_string(Format f) noexcept {
  switch (f) {
  case Format::Auto:
    return "auto";
  case Format::Text:
    return "text";
  case Format::Word2VecBin:
    return "word2vec-bin";
  case Format::VocabNpy:
    return "vocab-npy";
  }
  return "auto";
}

Format parse_format(std::string_view name) {
  for (Format f : {Format::Auto, Format::Text, Format::Word2VecBin, Format::VocabNpy})
    if (to_string(f) == name)
      return f;
  throw UsageError("unknown embedding format '" + std::string(name) +
                   "' (expected auto, text, word2vec-bin or vocab-npy)");
}

Format sniff_format(const fs::path &path) {
  const auto ext = path.extension().string();
  if (ext == ".txt" || ext == ".vec")
    return Format::Text;
  if (ext == ".bin")
    return Format::Word2VecBin;
  if (ext == ".npy" || ext == ".vocab")
    return Format::VocabNpy;
  const auto paths = npy_paths(path);
  if (fs::exists(paths.vocab) && fs::exists(paths.npy))
    return Format::VocabNpy;
  throw FormatError("cannot infer embedding format from '" + path.string() + "'");
}

Embedding load(const fs::path &path, Format format) {
  if (format == Format::Auto)
    format = sniff_format(path);
  switch (format) {
  case Format::Text:
    return load_text(path);
  case Format::Word2VecBin:
    return load_word2vec_bin(path);
  case Format::VocabNpy:
    return load_vocab_npy(path);
  case Format::Auto:
    break;
  }
  throw FormatError("unresolved format");
}

void save(const Embedding &e, const fs::path &path, Format format) {
  if (format == Format::Auto)
    format = sniff_format(path);
  switch (format) {
  case Format::Text:
    return save_text(e, path);
  case Format::Word2VecBin:
    return save_word2vec_bin(e, path);
  case Format::VocabNpy:
    return save_vocab_npy(e, path);
  case Format::Auto:
    break;
  }
  throw FormatError("unresolved format");
}

} // namespace fairvec
