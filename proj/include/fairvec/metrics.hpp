#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fairvec/embedding.hpp"
#include "fairvec/error.hpp"
#include "fairvec/geometry.hpp"

namespace fairvec {

struct LabeledValue {
  std::string label;
  double value = 0.0;
};

struct NeighborAnnotation {
  std::string word;
  std::size_t index = 0;
  double cosine = 0.0;             // to the query word
  double cosine_to_direction = 0.0;
  std::optional<double> abs_indirect_bias; // empty when undefined for the pair
};

// Uniform outcome of every metric's compute().
struct MetricResult {
  std::string metric;
  std::vector<LabeledValue> values;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<LabeledValue> breakdown; // per-item scores, input order
  std::vector<std::string> skipped;    // out-of-vocabulary inputs
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<NeighborAnnotation> neighbors;

  // Throws std::out_of_range when the label is absent.
  double value(std::string_view label) const;
  nlohmann::json to_json() const;
};

struct WeatSpec {
  std::string name;
  std::vector<std::string> x, y; // targets
  std::vector<std::string> a, b; // attributes

  // Full schema invariants: |X| = |Y| >= 1, |A|, |B| >= 1, X and Y disjoint,
  // A and B disjoint. Throws FormatError.
  void validate() const;

  friend bool operator==(const WeatSpec &, const WeatSpec &) = default;
};

enum class SemBiasLabel { Definition, Stereotype, None };
std::string_view to_string(SemBiasLabel l) noexcept;
SemBiasLabel parse_sembias_label(std::string_view s);

struct SemBiasPair {
  std::string a, b;
  SemBiasLabel label = SemBiasLabel::None;

  friend bool operator==(const SemBiasPair &, const SemBiasPair &) = default;
};

struct SemBiasInstance {
  std::array<SemBiasPair, 4> pairs;
  // Exactly one definition, one stereotype, two none. Throws FormatError.
  void validate() const;

  friend bool operator==(const SemBiasInstance &, const SemBiasInstance &) = default;
};

// Raised when WEAT's pooled standard deviation is zero. The test statistic
// is still well defined and carried along.
class UndefinedEffectSizeError : public DegenerateError {
public:
  explicit UndefinedEffectSizeError(double statistic)
      : DegenerateError("WEAT effect size undefined: association scores have zero variance"), statistic_(statistic) {}
  double statistic() const noexcept { return statistic_; }

private:
  double statistic_;
};

// Words whose projection onto g is at most this (in cosine) carry no gender
// component; their pairwise indirect bias is defined as zero.
inline constexpr double kNeutralTolerance = 1e-7;

enum class BetaStatus { Ok, Undefined, Degenerate };

struct Beta {
  BetaStatus status = BetaStatus::Ok;
  double value = 0.0;
};

// Indirect bias between rows i and j; never throws on degenerate input.
Beta indirect_bias_between(const Embedding &e, const BiasDirection &g, std::size_t i, std::size_t j);

MetricResult direct_bias(const Embedding &e, const BiasDirection &g, std::span<const std::string> words,
                         double c = 1.0);
MetricResult indirect_bias(const Embedding &e, const BiasDirection &g, std::string_view w, std::string_view v);
// Exhaustive permutation enumeration is used up to this many partitions.
inline constexpr double kExhaustivePartitionLimit = 20000;

// Auto enumerates every bipartition up to kExhaustivePartitionLimit and
// samples beyond it; the other two force one strategy.
enum class WeatSampling { Auto, Exhaustive, MonteCarlo };

MetricResult weat(const Embedding &e, const WeatSpec &spec, std::size_t permutations = 10000,
                  std::uint64_t seed = 0, WeatSampling sampling = WeatSampling::Auto);
MetricResult pmn(const Embedding &e, const BiasDirection &g, std::string_view word, std::size_t k = 100);
MetricResult proximity_bias(const Embedding &e, const BiasDirection &g, std::string_view word, std::size_t k = 100,
                            double theta = 0.05);
MetricResult gipe(const Embedding &e, const BiasDirection &g, std::span<const std::string> words,
                  std::size_t k = 100, double theta = 0.05, unsigned threads = 1);
MetricResult sembias(const Embedding &e, std::span<const SemBiasInstance> dataset,
                     const WordPair &anchor = {"he", "she"});
MetricResult neighbours_analysis(const Embedding &e, const BiasDirection &g, std::string_view word, std::size_t k);


// --- uniform metric interface ----------------------------------------------

struct MetricParams {
  double c = 1.0;
  std::size_t k = 100;
  double theta = 0.05;
  std::size_t permutations = 10000;
  std::uint64_t seed = 0;
  WordPair sembias_anchor{"he", "she"};
  unsigned threads = 1;
};

// What a metric operates on: a word list (single-word metrics use the first
// entry, pairwise metrics the first two), a WEAT spec, or a SemBias set.
struct MetricInput {
  std::vector<std::string> words;
  std::optional<WeatSpec> weat;
  std::vector<SemBiasInstance> sembias;
};

class Metric {
public:
  virtual ~Metric() = default;
  virtual std::string_view name() const = 0;
  virtual MetricResult compute(const Embedding &e, const BiasDirection &g, const MetricInput &input) const = 0;
};

// Names: direct-bias, indirect-bias, weat, pmn, proximity-bias, gipe,
// sembias, neighbours.
std::vector<std::string> metric_names();
// Throws UsageError listing the known names.
std::unique_ptr<Metric> make_metric(std::string_view name, const MetricParams &params = {});

} // namespace fairvec
