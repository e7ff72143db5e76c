#include "fairvec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "fairvec/parallel.hpp"
#include "fairvec/vector_ops.hpp"

namespace fairvec {

double MetricResult::value(std::string_view label) const {
  for (const auto &v : values)
    if (v.label == label)
      return v.value;
  throw std::out_of_range("metric result has no value '" + std::string(label) + "'");
}

nlohmann::json MetricResult::to_json() const {
  nlohmann::json out;
  out["metric"] = metric;
  nlohmann::json vals = nlohmann::json::object();
  for (const auto &v : values)
    vals[v.label] = v.value;
  out["values"] = vals;
  out["parameters"] = parameters;
  nlohmann::json items = nlohmann::json::array();
  for (const auto &b : breakdown)
    items.push_back({{"item", b.label}, {"score", b.value}});
  out["breakdown"] = items;
  out["skipped"] = skipped;
  out["metadata"] = metadata;
  if (!neighbors.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &n : neighbors) {
      nlohmann::json row{{"word", n.word},
                         {"cosine", n.cosine},
                         {"cosine_to_direction", n.cosine_to_direction},
                         {"abs_indirect_bias", nullptr}};
      if (n.abs_indirect_bias)
        row["abs_indirect_bias"] = *n.abs_indirect_bias;
      rows.push_back(row);
    }
    out["neighbors"] = rows;
  }
  return out;
}

namespace {

void require_disjoint(const std::vector<std::string> &p, const std::vector<std::string> &q, const char *names) {
  std::unordered_set<std::string> seen(p.begin(), p.end());
  for (const auto &w : q)
    if (seen.count(w))
      throw FormatError(std::string("WEAT sets ") + names + " share the word '" + w + "'");
}

} // namespace

void WeatSpec::validate() const {
  if (x.empty() || x.size() != y.size())
    throw FormatError("WEAT target sets must be non-empty and of equal size (X has " + std::to_string(x.size()) +
                      ", Y has " + std::to_string(y.size()) + ")");
  if (a.empty() || b.empty())
    throw FormatError("WEAT attribute sets must be non-empty");
  require_disjoint(x, y, "X and Y");
  require_disjoint(a, b, "A and B");
}

std::string_view to_string(SemBiasLabel l) noexcept {
  switch (l) {
  case SemBiasLabel::Definition:
    return "definition";
  case SemBiasLabel::Stereotype:
    return "stereotype";
  case SemBiasLabel::None:
    return "none";
  }
  return "none";
}

SemBiasLabel parse_sembias_label(std::string_view s) {
  if (s == "definition")
    return SemBiasLabel::Definition;
  if (s == "stereotype")
    return SemBiasLabel::Stereotype;
  if (s == "none")
    return SemBiasLabel::None;
  throw FormatError("unknown SemBias label '" + std::string(s) + "'");
}

void SemBiasInstance::validate() const {
  int def = 0, stereo = 0, none = 0;
  for (const auto &p : pairs) {
    if (p.a.empty() || p.b.empty())
      throw FormatError("SemBias pair with an empty word");
    if (p.a == p.b)
      throw FormatError("SemBias pair (" + p.a + ", " + p.b + ") has identical members");
    def += p.label == SemBiasLabel::Definition;
    stereo += p.label == SemBiasLabel::Stereotype;
    none += p.label == SemBiasLabel::None;
  }
  if (def != 1 || stereo != 1 || none != 2)
    throw FormatError("SemBias instance needs exactly one definition, one stereotype and two none pairs (got " +
                      std::to_string(def) + "/" + std::to_string(stereo) + "/" + std::to_string(none) + ")");
}

Beta indirect_bias_between(const Embedding &e, const BiasDirection &g, std::size_t i, std::size_t j) {
  auto w = e.row(i), v = e.row(j);
  const double wg = vec::dot(w, g.view()), vg = vec::dot(v, g.view());
  if (std::abs(wg) <= kNeutralTolerance && std::abs(vg) <= kNeutralTolerance)
    return {BetaStatus::Ok, 0.0};
  const double wv = vec::dot(w, v);
  if (std::abs(wv) < 1e-12)
    return {BetaStatus::Undefined, 0.0};
  const auto wp = reject(w, g), vp = reject(v, g);
  const double nw = vec::norm(vec::view(wp)), nv = vec::norm(vec::view(vp));
  if (nw < 1e-12 || nv < 1e-12)
    return {BetaStatus::Degenerate, 0.0};
  const double cos_perp = std::clamp(vec::dot(vec::view(wp), vec::view(vp)) / (nw * nv), -1.0, 1.0);
  return {BetaStatus::Ok, (wv - cos_perp) / wv};
}

MetricResult direct_bias(const Embedding &e, const BiasDirection &g, std::span<const std::string> words, double c) {
  if (!(c >= 0.0))
    throw UsageError("direct bias strictness c must be non-negative");
  MetricResult r;
  r.metric = "direct-bias";
  r.parameters = {{"c", c}, {"direction", to_string(g.method)}};
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto &w : words) {
    auto i = e.find(w);
    if (!i) {
      r.skipped.push_back(w);
      continue;
    }
    const double term = std::pow(std::abs(cosine_to_direction(e, *i, g)), c);
    r.breakdown.push_back({w, term});
    sum += term;
    ++used;
  }
  if (used == 0)
    throw DataError("direct bias: every word is out of vocabulary");
  r.values.push_back({"direct_bias", sum / static_cast<double>(used)});
  r.metadata["words_used"] = used;
  return r;
}

MetricResult indirect_bias(const Embedding &e, const BiasDirection &g, std::string_view w, std::string_view v) {
  require_normalized(e, "indirect bias");
  const auto i = e.index_of(w), j = e.index_of(v);
  const Beta beta = indirect_bias_between(e, g, i, j);
  if (beta.status == BetaStatus::Undefined)
    throw DegenerateError("indirect bias undefined for ('" + std::string(w) + "', '" + std::string(v) +
                          "'): the vectors are orthogonal");
  if (beta.status == BetaStatus::Degenerate)
    throw DegenerateError("indirect bias degenerate for ('" + std::string(w) + "', '" + std::string(v) +
                          "'): a vector lies along the bias direction");
  MetricResult r;
  r.metric = "indirect-bias";
  r.parameters = {{"w", w}, {"v", v}, {"direction", to_string(g.method)}};
  r.values.push_back({"indirect_bias", beta.value});
  return r;
}

// --- WEAT ------------------------------------------------------------------

namespace {

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

// Sum of s over the members flagged in `in_x` minus the sum over the rest,
// each accumulated in index order.
double partition_statistic(const std::vector<double> &s, const std::vector<char> &in_x) {
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    (in_x[i] ? sx : sy) += s[i];
  return sx - sy;
}

// Unbiased integer in [0, bound) from raw 64-bit draws (portable, unlike
// std::uniform_int_distribution).
std::uint64_t bounded(std::mt19937_64 &rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do
    draw = rng();
  while (draw >= limit);
  return draw % bound;
}

double mean_cosine(const Embedding &e, std::size_t w, const std::vector<std::size_t> &set) {
  double acc = 0.0;
  for (std::size_t a : set)
    acc += cosine(e.row(w), e.row(a));
  return acc / static_cast<double>(set.size());
}

std::vector<std::size_t> indices(const Embedding &e, const std::vector<std::string> &words) {
  std::vector<std::size_t> out;
  out.reserve(words.size());
  for (const auto &w : words)
    out.push_back(e.index_of(w));
  return out;
}

} // namespace

MetricResult weat(const Embedding &e, const WeatSpec &spec, std::size_t permutations, std::uint64_t seed,
                  WeatSampling sampling) {
  if (spec.x.empty() || spec.x.size() != spec.y.size())
    throw PreconditionError("WEAT target sets must be non-empty and of equal size");
  if (spec.a.empty() || spec.b.empty())
    throw PreconditionError("WEAT attribute sets must be non-empty");
  const auto xi = indices(e, spec.x), yi = indices(e, spec.y);
  const auto ai = indices(e, spec.a), bi = indices(e, spec.b);
  const std::size_t n = xi.size();

  // s over X followed by Y.
  std::vector<double> s;
  s.reserve(2 * n);
  for (auto w : xi)
    s.push_back(mean_cosine(e, w, ai) - mean_cosine(e, w, bi));
  for (auto w : yi)
    s.push_back(mean_cosine(e, w, ai) - mean_cosine(e, w, bi));

  std::vector<char> observed(2 * n, 0);
  std::fill(observed.begin(), observed.begin() + static_cast<std::ptrdiff_t>(n), 1);
  const double statistic = partition_statistic(s, observed);

  double sum_x = 0.0, sum_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_x += s[i];
    sum_y += s[n + i];
  }
  const double pooled_mean = (sum_x + sum_y) / static_cast<double>(2 * n);
  double ss_x = 0.0, ss_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ss_x += (s[i] - pooled_mean) * (s[i] - pooled_mean);
    ss_y += (s[n + i] - pooled_mean) * (s[n + i] - pooled_mean);
  }
  const double sigma = std::sqrt((ss_x + ss_y) / static_cast<double>(2 * n));
  if (!(sigma > 0.0))
    throw UndefinedEffectSizeError(statistic);
  const double effect = (sum_x / static_cast<double>(n) - sum_y / static_cast<double>(n)) / sigma;

  const double partitions = binomial(2 * n, n);
  const bool exhaustive = sampling == WeatSampling::Exhaustive ||
                          (sampling == WeatSampling::Auto && partitions <= kExhaustivePartitionLimit);
  std::size_t exceed = 0, evaluated = 0;
  std::vector<char> mask(2 * n, 0);
  if (exhaustive) {
    // Enumerate n-subsets of {0..2n-1} in lexicographic order.
    std::vector<std::size_t> combo(n);
    for (std::size_t i = 0; i < n; ++i)
      combo[i] = i;
    while (true) {
      std::fill(mask.begin(), mask.end(), 0);
      for (auto c : combo)
        mask[c] = 1;
      exceed += partition_statistic(s, mask) > statistic;
      ++evaluated;
      std::size_t i = n;
      while (i > 0 && combo[i - 1] == 2 * n - n + (i - 1))
        --i;
      if (i == 0)
        break;
      ++combo[i - 1];
      for (std::size_t j = i; j < n; ++j)
        combo[j] = combo[j - 1] + 1;
    }
  } else {
    if (permutations == 0)
      throw UsageError("WEAT needs a positive permutation count for Monte-Carlo p-values");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(2 * n);
    for (std::size_t draw = 0; draw < permutations; ++draw) {
      for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
      for (std::size_t i = order.size() - 1; i > 0; --i)
        std::swap(order[i], order[bounded(rng, i + 1)]);
      std::fill(mask.begin(), mask.end(), 0);
      for (std::size_t i = 0; i < n; ++i)
        mask[order[i]] = 1;
      exceed += partition_statistic(s, mask) > statistic;
      ++evaluated;
    }
  }

  MetricResult r;
  r.metric = "weat";
  r.parameters = {{"name", spec.name},       {"permutations", permutations}, {"seed", seed},
                  {"sigma", "population"},   {"exhaustive_limit", kExhaustivePartitionLimit}};
  r.values = {{"statistic", statistic},
              {"effect_size", effect},
              {"p_value", static_cast<double>(exceed) / static_cast<double>(evaluated)}};
  r.metadata = {{"mode", exhaustive ? "exhaustive" : "monte-carlo"}, {"partitions_evaluated", evaluated},
                {"target_size", n}};
  for (std::size_t i = 0; i < n; ++i)
    r.breakdown.push_back({spec.x[i], s[i]});
  for (std::size_t i = 0; i < n; ++i)
    r.breakdown.push_back({spec.y[i], s[n + i]});
  return r;
}

// --- neighbourhood metrics -------------------------------------------------

MetricResult pmn(const Embedding &e, const BiasDirection &g, std::string_view word, std::size_t k) {
  const auto list = knn(e, word, k);
  if (list.entries.empty())
    throw DegenerateError("percent male neighbours: '" + std::string(word) + "' has no neighbours");
  std::size_t male = 0;
  MetricResult r;
  r.metric = "pmn";
  for (const auto &n : list.entries) {
    const double c = cosine_to_direction(e, n.index, g);
    male += c < 0.0;
    r.breakdown.push_back({n.word, c});
  }
  r.parameters = {{"word", word}, {"k", k}, {"k_effective", list.entries.size()}, {"direction", to_string(g.method)}};
  r.values.push_back({"pmn", static_cast<double>(male) / static_cast<double>(list.entries.size())});
  return r;
}

namespace {

struct Proximity {
  double eta = 0.0;
  std::size_t neighbours = 0;
  std::size_t usable = 0;
  std::size_t biased = 0;
  std::size_t excluded = 0;
};

// Throws DegenerateError when no neighbour pair has a defined beta.
Proximity proximity_of(const Embedding &e, const BiasDirection &g, std::size_t index, std::size_t k, double theta) {
  const auto list = knn(e, e.word(index), k);
  Proximity p;
  p.neighbours = list.entries.size();
  for (const auto &n : list.entries) {
    const Beta beta = indirect_bias_between(e, g, index, n.index);
    if (beta.status != BetaStatus::Ok) {
      ++p.excluded;
      continue;
    }
    ++p.usable;
    p.biased += std::abs(beta.value) >= theta;
  }
  if (p.usable == 0)
    throw DegenerateError("proximity bias of '" + e.word(index) + "': no neighbour has a defined indirect bias");
  p.eta = static_cast<double>(p.biased) / static_cast<double>(p.usable);
  return p;
}

void check_proximity_params(std::size_t k, double theta) {
  if (k < 1)
    throw UsageError("neighbour count k must be at least 1");
  if (!(theta >= 0.0))
    throw UsageError("threshold theta must be non-negative");
}

} // namespace

MetricResult proximity_bias(const Embedding &e, const BiasDirection &g, std::string_view word, std::size_t k,
                            double theta) {
  require_normalized(e, "proximity bias");
  check_proximity_params(k, theta);
  const auto p = proximity_of(e, g, e.index_of(word), k, theta);
  MetricResult r;
  r.metric = "proximity-bias";
  r.parameters = {{"word", word}, {"k", k}, {"theta", theta}, {"direction", to_string(g.method)}};
  r.values.push_back({"proximity_bias", p.eta});
  r.metadata = {{"neighbours", p.neighbours}, {"usable", p.usable}, {"biased", p.biased}, {"excluded", p.excluded}};
  return r;
}

MetricResult gipe(const Embedding &e, const BiasDirection &g, std::span<const std::string> words, std::size_t k,
                  double theta, unsigned threads) {
  require_normalized(e, "GIPE");
  check_proximity_params(k, theta);
  MetricResult r;
  r.metric = "gipe";
  std::vector<std::size_t> targets;
  std::vector<char> seen(e.size(), 0);
  for (const auto &w : words) {
    auto i = e.find(w);
    if (!i) {
      r.skipped.push_back(w);
      continue;
    }
    if (!seen[*i]) {
      seen[*i] = 1;
      targets.push_back(*i);
    }
  }
  if (targets.empty())
    throw DataError("GIPE: every word is out of vocabulary");
  std::vector<std::optional<Proximity>> per_word(targets.size());
  parallel_for(targets.size(), threads, [&](std::size_t t) {
    try {
      per_word[t] = proximity_of(e, g, targets[t], k, theta);
    } catch (const DegenerateError &) {
      per_word[t].reset();
    }
  });
  double sum = 0.0;
  std::size_t used = 0;
  nlohmann::json undefined = nlohmann::json::array();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (!per_word[t]) {
      undefined.push_back(e.word(targets[t]));
      continue;
    }
    r.breakdown.push_back({e.word(targets[t]), per_word[t]->eta});
    sum += per_word[t]->eta;
    ++used;
  }
  if (used == 0)
    throw DegenerateError("GIPE: no word has a usable neighbourhood");
  r.parameters = {{"k", k}, {"theta", theta}, {"aggregation", "unweighted-mean"}, {"direction", to_string(g.method)}};
  r.values.push_back({"gipe", sum / static_cast<double>(used)});
  r.metadata = {{"words_used", used}, {"undefined", undefined}};
  return r;
}

MetricResult sembias(const Embedding &e, std::span<const SemBiasInstance> dataset, const WordPair &anchor) {
  const auto direction = vec::sub(e.row(anchor.first), e.row(anchor.second));
  if (vec::norm(vec::view(direction)) == 0.0)
    throw DegenerateError("SemBias anchors '" + anchor.first + "' and '" + anchor.second + "' coincide");
  std::size_t counts[3] = {0, 0, 0};
  std::size_t used = 0, skipped_oov = 0, skipped_degenerate = 0, ties = 0;
  MetricResult r;
  r.metric = "sembias";
  for (std::size_t n = 0; n < dataset.size(); ++n) {
    const auto &inst = dataset[n];
    bool oov = false;
    for (const auto &p : inst.pairs)
      oov = oov || !e.contains(p.a) || !e.contains(p.b);
    if (oov) {
      ++skipped_oov;
      r.skipped.push_back("instance " + std::to_string(n));
      continue;
    }
    std::array<double, 4> score{};
    bool degenerate = false;
    for (std::size_t p = 0; p < 4; ++p) {
      const auto diff = vec::sub(e.row(inst.pairs[p].a), e.row(inst.pairs[p].b));
      if (vec::norm(vec::view(diff)) == 0.0) {
        degenerate = true;
        break;
      }
      score[p] = cosine(vec::view(diff), vec::view(direction));
    }
    if (degenerate) {
      ++skipped_degenerate;
      r.skipped.push_back("instance " + std::to_string(n));
      continue;
    }
    std::size_t best = 0;
    for (std::size_t p = 1; p < 4; ++p)
      if (score[p] > score[best])
        best = p;
    for (std::size_t p = 0; p < 4; ++p)
      if (p != best && score[p] == score[best]) {
        ++ties;
        break;
      }
    ++counts[static_cast<int>(inst.pairs[best].label)];
    ++used;
    r.breakdown.push_back({inst.pairs[best].a + ":" + inst.pairs[best].b, score[best]});
  }
  if (used == 0)
    throw DataError("SemBias: no usable instance (all skipped)");
  const double total = static_cast<double>(used);
  r.values = {{"definition", counts[0] / total}, {"stereotype", counts[1] / total}, {"none", counts[2] / total}};
  r.parameters = {{"anchor", {anchor.first, anchor.second}}};
  r.metadata = {{"instances_used", used},
                {"skipped_oov", skipped_oov},
                {"skipped_degenerate", skipped_degenerate},
                {"ties", ties}};
  return r;
}

MetricResult neighbours_analysis(const Embedding &e, const BiasDirection &g, std::string_view word, std::size_t k) {
  require_normalized(e, "neighbours analysis");
  const std::size_t qi = e.index_of(word);
  const auto list = knn(e, word, k);
  MetricResult r;
  r.metric = "neighbours";
  r.parameters = {{"word", word}, {"k", k}, {"k_effective", list.entries.size()}, {"direction", to_string(g.method)}};
  for (const auto &n : list.entries) {
    NeighborAnnotation a{n.word, n.index, n.cosine, cosine_to_direction(e, n.index, g), std::nullopt};
    const Beta beta = indirect_bias_between(e, g, qi, n.index);
    if (beta.status == BetaStatus::Ok)
      a.abs_indirect_bias = std::abs(beta.value);
    r.neighbors.push_back(std::move(a));
  }
  r.values.push_back({"neighbours", static_cast<double>(list.entries.size())});
  return r;
}

// --- registry --------------------------------------------------------------

namespace {

const std::string &first_word(const MetricInput &in, std::string_view metric) {
  if (in.words.empty())
    throw UsageError(std::string(metric) + " needs a word");
  return in.words.front();
}

class FunctionMetric final : public Metric {
public:
  using Fn = MetricResult (*)(const Embedding &, const BiasDirection &, const MetricInput &, const MetricParams &);
  FunctionMetric(std::string name, Fn fn, MetricParams params) : name_(std::move(name)), fn_(fn), params_(params) {}
  std::string_view name() const override { return name_; }
  MetricResult compute(const Embedding &e, const BiasDirection &g, const MetricInput &in) const override {
    return fn_(e, g, in, params_);
  }

private:
  std::string name_;
  Fn fn_;
  MetricParams params_;
};

struct Entry {
  const char *name;
  FunctionMetric::Fn fn;
};

const Entry kMetrics[] = {
    {"direct-bias",
     [](const Embedding &e, const BiasDirection &g, const MetricInput &in, const MetricParams &p) {
       return direct_bias(e, g, in.words, p.c);
     }},
    {"indirect-bias",
     [](const Embedding &e, const BiasDirection &g, const MetricInput &in, const MetricParams &) {
       if (in.words.size() != 2)
         throw UsageError("indirect-bias needs exactly two words");
       return indirect_bias(e, g, in.words[0], in.words[1]);
     }},
    {"weat",
     [](const Embedding &e, const BiasDirection &, const MetricInput &in, const MetricParams &p) {
       if (!in.weat)
         throw UsageError("weat needs a WEAT specification");
       return weat(e, *in.weat, p.permutations, p.seed);
     }},
    {"pmn",
     [](const Embedding &e, const BiasDirection &g, const MetricInput &in, const MetricParams &p) {
       return pmn(e, g, first_word(in, "pmn"), p.k);
     }},
    {"proximity-bias",
     [](const Embedding &e, const BiasDirection &g, const MetricInput &in, const MetricParams &p) {
       return proximity_bias(e, g, first_word(in, "proximity-bias"), p.k, p.theta);
     }},
    {"gipe",
     [](const Embedding &e, const BiasDirection &g, const MetricInput &in, const MetricParams &p) {
       return gipe(e, g, in.words, p.k, p.theta, p.threads);
     }},
    {"sembias",
     [](const Embedding &e, const BiasDirection &, const MetricInput &in, const MetricParams &p) {
       return sembias(e, in.sembias, p.sembias_anchor);
     }},
    {"neighbours",
     [](const Embedding &e, const BiasDirection &g, const MetricInput &in, const MetricParams &p) {
       return neighbours_analysis(e, g, first_word(in, "neighbours"), p.k);
     }},
};

} // namespace

std::vector<std::string> metric_names() {
  std::vector<std::string> names;
  for (const auto &m : kMetrics)
    names.emplace_back(m.name);
  return names;
}

std::unique_ptr<Metric> make_metric(std::string_view name, const MetricParams &params) {
  for (const auto &m : kMetrics)
    if (name == m.name)
      return std::make_unique<FunctionMetric>(m.name, m.fn, params);
  std::string known;
  for (const auto &m : kMetrics)
    known += std::string(known.empty() ? "" : ", ") + m.name;
  throw UsageError("unknown metric '" + std::string(name) + "'; available: " + known);
}

} // namespace fairvec
