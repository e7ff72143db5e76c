#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "fairvec/embedding.hpp"

namespace fairvec {

struct RegistryEntry {
  std::string url;
  std::string sha256; // lowercase hex
  Format format = Format::Text;
  // vocab-npy entries carry a second file for the word list.
  std::string vocab_url;
  std::string vocab_sha256;
};

// name -> entry, parsed from a JSON object {name: {url, sha256, format}}.
using Registry = std::map<std::string, RegistryEntry>;

Registry load_registry(const std::filesystem::path &path);
Registry parse_registry(std::string_view json_text);

// $FAIRVEC_CACHE, else $XDG_CACHE_HOME/fairvec, else $HOME/.cache/fairvec.
std::filesystem::path default_cache_dir();

std::string sha256_file(const std::filesystem::path &path);

// Downloads (or reuses) the named embedding into `cache_dir` after verifying
// its checksum, and returns a path suitable for `load`. A cached file whose
// checksum matches is returned without touching the network; a mismatching
// download is deleted before ChecksumError is thrown.
std::filesystem::path fetch_pretrained(const std::string &name, const Registry &registry,
                                       const std::filesystem::path &cache_dir = default_cache_dir());

} // namespace fairvec
