#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "fairvec/lexicons.hpp"

namespace fs = std::filesystem;

namespace fixtures {

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("fairvec-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path &p, const std::string &bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
  if (!out)
    throw std::runtime_error("cannot write " + p.string());
}

fairvec::Embedding make(const Rows &rows) {
  std::vector<std::string> words;
  std::vector<float> matrix;
  const std::size_t d = rows.empty() ? 0 : rows.front().second.size();
  for (const auto &[w, v] : rows) {
    words.push_back(w);
    matrix.insert(matrix.end(), v.begin(), v.end());
  }
  return fairvec::Embedding(std::move(words), std::move(matrix), d);
}

namespace {

std::vector<float> gaussian_row(std::mt19937_64 &rng, std::size_t d, bool unit) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(d);
  double n2 = 0.0;
  for (auto &x : v) {
    x = normal(rng);
    n2 += x * x;
  }
  const double scale = unit ? 1.0 / std::sqrt(n2) : 1.0;
  std::vector<float> out(d);
  for (std::size_t j = 0; j < d; ++j)
    out[j] = static_cast<float>(v[j] * scale);
  return out;
}

} // namespace

fairvec::Embedding random_embedding(std::size_t v, std::size_t d, std::uint64_t seed, bool unit) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> words;
  std::vector<float> matrix;
  matrix.reserve(v * d);
  for (std::size_t i = 0; i < v; ++i) {
    words.push_back("w" + std::to_string(i));
    const auto row = gaussian_row(rng, d, unit);
    matrix.insert(matrix.end(), row.begin(), row.end());
  }
  auto e = fairvec::Embedding(std::move(words), std::move(matrix), d);
  return unit ? fairvec::normalize(e) : e;
}

fairvec::Embedding gendered_embedding(std::size_t neutral, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> words;
  std::set<std::string> seen;
  auto add = [&](const std::string &w) {
    if (seen.insert(w).second)
      words.push_back(w);
  };
  // Female members lean +axis 0, male members -axis 0.
  std::vector<double> lean;
  for (const char *name : {"definitional-pairs", "equalize-pairs"}) {
    const auto lexicon = fairvec::bundled(name);
    for (const auto &p : lexicon.pairs()) {
      if (!seen.contains(p.first) && !seen.contains(p.second)) {
        add(p.first);
        lean.push_back(1.0);
        add(p.second);
        lean.push_back(-1.0);
      }
    }
  }
  for (std::size_t i = 0; i < neutral; ++i) {
    add("n" + std::to_string(i));
    lean.push_back(0.0);
  }
  std::uniform_real_distribution<double> tilt(-0.3, 0.3);
  std::vector<float> matrix;
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto row = gaussian_row(rng, d, true);
    const double g = lean[i] != 0.0 ? 0.8 * lean[i] : tilt(rng);
    row[0] = static_cast<float>(row[0] * 0.5 + g);
    matrix.insert(matrix.end(), row.begin(), row.end());
  }
  return fairvec::normalize(fairvec::Embedding(std::move(words), std::move(matrix), d));
}

fairvec::Embedding orthonormal(const std::vector<std::string> &words, std::size_t d) {
  Rows rows;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::vector<float> v(d, 0.0f);
    v[i] = 1.0f;
    rows.emplace_back(words[i], v);
  }
  return make(rows);
}

fairvec::BiasDirection axis(std::size_t d, std::size_t i) {
  std::vector<double> g(d, 0.0);
  g[i] = 1.0;
  return fairvec::make_direction(g);
}

} // namespace fixtures
