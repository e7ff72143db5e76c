#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fairvec/embedding.hpp"
#include "fairvec/geometry.hpp"

namespace fixtures {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path &p);
void write_file(const std::filesystem::path &p, const std::string &bytes);

using Rows = std::vector<std::pair<std::string, std::vector<float>>>;
fairvec::Embedding make(const Rows &rows);

// Gaussian rows named w0, w1, ...; unit rows when `unit` is set.
fairvec::Embedding random_embedding(std::size_t v, std::size_t d, std::uint64_t seed, bool unit = true);

// Random unit embedding whose vocabulary contains the bundled definitional
// and equalize words (with a planted gender axis) plus `neutral` filler words
// named n0, n1, ...
fairvec::Embedding gendered_embedding(std::size_t neutral, std::size_t d, std::uint64_t seed);

// Identity-like embedding: word i is the i-th standard basis vector.
fairvec::Embedding orthonormal(const std::vector<std::string> &words, std::size_t d);

fairvec::BiasDirection axis(std::size_t d, std::size_t i);

} // namespace fixtures
