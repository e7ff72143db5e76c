#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fairvec/embedding.hpp"
#include "fairvec/geometry.hpp"
#include "fairvec/numerics.hpp"

namespace fairvec {

// What a debiaser did, word by word.
struct DebiasSummary {
  std::string method;
  std::vector<std::string> processed;  // rows rewritten
  std::vector<std::string> skipped;    // requested but out of vocabulary
  std::vector<std::string> degenerate; // left unchanged: nothing sensible to write
  std::vector<std::string> reverted;   // optimization/regression failure, original restored
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

struct DebiasResult {
  Embedding embedding;
  DebiasSummary summary;
  std::optional<BiasDirection> direction; // the direction actually used
};

struct HardDebiasConfig {
  std::vector<WordPair> equalize_pairs;
  std::vector<std::string> gender_specific;
  DirectionMethod direction = DirectionMethod::PcaPairs;
  std::vector<WordPair> definitional_pairs; // pca-pairs source
  WordPair direction_pair{"she", "he"};     // pair-diff source

  // Bundled equalize pairs, gender-specific words and definitional pairs.
  static HardDebiasConfig defaults();
};

// Equalize step for one pair; writes the two replacement vectors.
// Returns false when the members have identical projections onto g.
bool equalize_pair(std::span<const double> first, std::span<const double> second, const BiasDirection &g,
                   std::vector<double> &first_out, std::vector<double> &second_out);

// Neutralize every requested word outside the gender-specific and equalize
// sets, then equalize the configured pairs. An empty word list targets the
// whole vocabulary.
DebiasResult hard_debias(const Embedding &e, std::span<const std::string> words, const HardDebiasConfig &cfg);

struct RanConfig {
  double lambda_repulsion = 1.0 / 3.0;
  double lambda_attraction = 1.0 / 3.0;
  double lambda_neutralization = 1.0 / 3.0;
  std::size_t k = 100;
  double theta = 0.05;
  OptimizerConfig optimizer{0.01, 300, 1e-6, Projection::UnitSphere};
  unsigned threads = 1;

  void validate() const;
};

// The per-word objective: its value and gradient at `x`.
class RanObjective {
public:
  RanObjective(std::vector<std::vector<double>> repel, std::vector<double> original, std::vector<double> direction,
               const RanConfig &cfg);

  double operator()(std::span<const double> x, std::span<double> grad) const;
  std::size_t repulsion_size() const noexcept { return repel_.size(); }

private:
  std::vector<std::vector<double>> repel_; // unit vectors
  std::vector<double> original_;           // unit
  std::vector<double> direction_;          // unit
  double l1_, l2_, l3_;
};

// Builds the objective for vocabulary row `index` from the original
// embedding: repulsion set = neighbours with |beta| >= theta.
RanObjective ran_objective(const Embedding &e, const BiasDirection &g, std::size_t index, const RanConfig &cfg);

DebiasResult ran_debias(const Embedding &e, std::span<const std::string> words, const BiasDirection &g,
                        const RanConfig &cfg);

struct HsrConfig {
  std::vector<std::string> definitional;
  double alpha = 1.0;

  static HsrConfig defaults();
};

DebiasResult hsr_debias(const Embedding &e, std::span<const std::string> words, const HsrConfig &cfg);

// Uniform run() contract shared by all debiasers.
class Debiaser {
public:
  virtual ~Debiaser() = default;
  virtual std::string_view name() const = 0;
  virtual DebiasResult run(const Embedding &e, std::span<const std::string> words) const = 0;
};

class HardDebias final : public Debiaser {
public:
  explicit HardDebias(HardDebiasConfig cfg = HardDebiasConfig::defaults()) : cfg_(std::move(cfg)) {}
  std::string_view name() const override { return "hard"; }
  DebiasResult run(const Embedding &e, std::span<const std::string> words) const override {
    return hard_debias(e, words, cfg_);
  }

private:
  HardDebiasConfig cfg_;
};

class RanDebias final : public Debiaser {
public:
  RanDebias(BiasDirection g, RanConfig cfg = {}) : g_(std::move(g)), cfg_(cfg) {}
  std::string_view name() const override { return "ran"; }
  DebiasResult run(const Embedding &e, std::span<const std::string> words) const override {
    return ran_debias(e, words, g_, cfg_);
  }

private:
  BiasDirection g_;
  RanConfig cfg_;
};

class HsrDebias final : public Debiaser {
public:
  explicit HsrDebias(HsrConfig cfg = HsrConfig::defaults()) : cfg_(std::move(cfg)) {}
  std::string_view name() const override { return "hsr"; }
  DebiasResult run(const Embedding &e, std::span<const std::string> words) const override {
    return hsr_debias(e, words, cfg_);
  }

private:
  HsrConfig cfg_;
};

} // namespace fairvec
