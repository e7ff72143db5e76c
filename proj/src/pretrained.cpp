#include "fairvec/pretrained.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <curl/curl.h>
#include "json.hpp"
#include <openssl/evp.h>

#include "fairvec/error.hpp"
#include "fairvec/log.hpp"

namespace fs = std::filesystem;

namespace fairvec {
namespace {

std::string lowercase(std::string s) {
  for (char &c : s)
    if (c >= 'A' && c <= 'Z')
      c = static_cast<char>(c - 'A' + 'a');
  return s;
}

std::string extension_for(Format f) {
  switch (f) {
  case Format::Text:
    return ".txt";
  case Format::Word2VecBin:
    return ".bin";
  case Format::VocabNpy:
    return ".npy";
  case Format::Auto:
    break;
  }
  throw FormatError("registry entries need a concrete format");
}

std::size_t write_callback(char *data, std::size_t size, std::size_t count, void *user) {
  auto *out = static_cast<std::FILE *>(user);
  return std::fwrite(data, size, count, out) * size;
}

void download(const std::string &url, const fs::path &target) {
  static const bool initialized = [] { return curl_global_init(CURL_GLOBAL_DEFAULT) == CURLE_OK; }();
  if (!initialized)
    throw IoError("libcurl initialization failed");
  const fs::path partial = fs::path(target).concat(".part");
  std::FILE *out = std::fopen(partial.c_str(), "wb");
  if (!out)
    throw IoError("cannot write to cache file '" + partial.string() + "'");
  CURL *curl = curl_easy_init();
  if (!curl) {
    std::fclose(out);
    throw IoError("libcurl handle creation failed");
  }
  std::array<char, CURL_ERROR_SIZE> error{};
  curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, write_callback);
  curl_easy_setopt(curl, CURLOPT_WRITEDATA, out);
  curl_easy_setopt(curl, CURLOPT_ERRORBUFFER, error.data());
  const CURLcode rc = curl_easy_perform(curl);
  curl_easy_cleanup(curl);
  std::fclose(out);
  if (rc != CURLE_OK) {
    std::error_code ec;
    fs::remove(partial, ec);
    throw IoError("download of '" + url + "' failed: " + (error[0] ? error.data() : curl_easy_strerror(rc)));
  }
  fs::rename(partial, target);
}

// Ensures `target` holds content with the expected digest, downloading if
// absent or stale.
void ensure_file(const std::string &name, const std::string &url, const std::string &sha256, const fs::path &target) {
  const std::string expected = lowercase(sha256);
  if (fs::exists(target)) {
    if (sha256_file(target) == expected)
      return;
    warn("cached file '" + target.string() + "' has a stale checksum; downloading again");
    fs::remove(target);
  }
  download(url, target);
  const std::string actual = sha256_file(target);
  if (actual != expected) {
    fs::remove(target);
    throw ChecksumError("checksum mismatch for '" + name + "': expected " + expected + ", got " + actual);
  }
}

} // namespace

Registry parse_registry(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw FormatError(std::string("registry is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw FormatError("registry must be a JSON object mapping names to entries");
  Registry registry;
  for (const auto &[name, value] : doc.items()) {
    auto field = [&](const char *key, bool required) -> std::string {
      if (!value.is_object() || !value.contains(key)) {
        if (required)
          throw FormatError("registry entry '" + name + "' lacks field '" + key + "'");
        return {};
      }
      if (!value[key].is_string())
        throw FormatError("registry entry '" + name + "' field '" + key + "' must be a string");
      return value[key].get<std::string>();
    };
    RegistryEntry entry;
    entry.url = field("url", true);
    entry.sha256 = lowercase(field("sha256", true));
    entry.format = parse_format(field("format", true));
    if (entry.format == Format::Auto)
      throw FormatError("registry entry '" + name + "' needs a concrete format");
    entry.vocab_url = field("vocab_url", entry.format == Format::VocabNpy);
    entry.vocab_sha256 = lowercase(field("vocab_sha256", entry.format == Format::VocabNpy));
    registry.emplace(name, std::move(entry));
  }
  return registry;
}

Registry load_registry(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open registry '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_registry(ss.str());
}

fs::path default_cache_dir() {
  if (const char *dir = std::getenv("FAIRVEC_CACHE"); dir && *dir)
    return dir;
  if (const char *xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    return fs::path(xdg) / "fairvec";
  if (const char *home = std::getenv("HOME"); home && *home)
    return fs::path(home) / ".cache" / "fairvec";
  return fs::temp_directory_path() / "fairvec-cache";
}

std::string sha256_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 initialization failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0)
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

fs::path fetch_pretrained(const std::string &name, const Registry &registry, const fs::path &cache_dir) {
  auto it = registry.find(name);
  if (it == registry.end()) {
    std::string known;
    for (const auto &[key, _] : registry)
      known += (known.empty() ? "" : ", ") + key;
    throw DataError("unknown pretrained embedding '" + name + "'; registry has: " +
                    (known.empty() ? "(empty)" : known));
  }
  const RegistryEntry &entry = it->second;
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  if (ec)
    throw IoError("cannot create cache directory '" + cache_dir.string() + "': " + ec.message());
  const fs::path target = cache_dir / (name + extension_for(entry.format));
  if (entry.format == Format::VocabNpy)
    ensure_file(name, entry.vocab_url, entry.vocab_sha256, cache_dir / (name + ".vocab"));
  ensure_file(name, entry.url, entry.sha256, target);
  return target;
}

} // namespace fairvec
