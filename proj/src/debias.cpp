#include "fairvec/debias.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fairvec/error.hpp"
#include "fairvec/lexicons.hpp"
#include "fairvec/log.hpp"
#include "fairvec/metrics.hpp"
#include "fairvec/parallel.hpp"
#include "fairvec/vector_ops.hpp"

namespace fairvec {

nlohmann::json DebiasSummary::to_json() const {
  return {{"method", method},
          {"processed", processed.size()},
          {"skipped", skipped},
          {"degenerate", degenerate},
          {"reverted", reverted},
          {"details", details}};
}

namespace {

constexpr double kNearZero = 1e-7;

// Requested in-vocabulary rows in first-occurrence order, minus `exempt`.
// An empty request means the whole vocabulary.
std::vector<std::size_t> resolve_targets(const Embedding &e, std::span<const std::string> words,
                                         const std::unordered_set<std::string> &exempt, DebiasSummary &summary) {
  std::vector<std::size_t> out;
  std::vector<char> seen(e.size(), 0);
  auto consider = [&](std::size_t i) {
    if (seen[i] || exempt.count(e.word(i)))
      return;
    seen[i] = 1;
    out.push_back(i);
  };
  if (words.empty()) {
    for (std::size_t i = 0; i < e.size(); ++i)
      consider(i);
  } else {
    for (const auto &w : words) {
      if (auto i = e.find(w))
        consider(*i);
      else
        summary.skipped.push_back(w);
    }
  }
  return out;
}

void store_row(std::vector<float> &matrix, std::size_t dim, std::size_t row, std::span<const double> values) {
  for (std::size_t j = 0; j < dim; ++j)
    matrix[row * dim + j] = static_cast<float>(values[j]);
}

std::unordered_set<std::string> default_exemptions() {
  std::unordered_set<std::string> out;
  const Lexicon specific = bundled("gender-specific");
  const Lexicon definitional = bundled("definitional-pairs");
  for (const auto &w : specific.words())
    out.insert(w);
  for (const auto &p : definitional.pairs()) {
    out.insert(p.first);
    out.insert(p.second);
  }
  return out;
}

} // namespace

// --- Hard Debias -----------------------------------------------------------

HardDebiasConfig HardDebiasConfig::defaults() {
  HardDebiasConfig cfg;
  cfg.equalize_pairs = bundled("equalize-pairs").pairs();
  cfg.gender_specific = bundled("gender-specific").words();
  cfg.definitional_pairs = bundled("definitional-pairs").pairs();
  return cfg;
}

bool equalize_pair(std::span<const double> first, std::span<const double> second, const BiasDirection &g,
                   std::vector<double> &first_out, std::vector<double> &second_out) {
  const std::size_t d = g.dim();
  std::vector<double> mu(d);
  for (std::size_t j = 0; j < d; ++j)
    mu[j] = 0.5 * (first[j] + second[j]);
  const auto nu = reject(vec::view(mu), g);
  const double nu_sq = vec::dot(vec::view(nu), vec::view(nu));
  const double scale = std::sqrt(std::max(0.0, 1.0 - nu_sq));
  const double mu_g = vec::dot(vec::view(mu), g.view());
  // (w_g - mu_g) = ((w - mu).g) g, so its unit version is sign * g.
  auto place = [&](std::span<const double> w, std::vector<double> &out) {
    const double offset = vec::dot(w, g.view()) - mu_g;
    out.resize(d);
    const double sign = offset > 0.0 ? 1.0 : -1.0;
    for (std::size_t j = 0; j < d; ++j)
      out[j] = nu[j] + scale * sign * g.values[j];
    return std::abs(offset) > 1e-12;
  };
  const bool ok_first = place(first, first_out);
  const bool ok_second = place(second, second_out);
  return ok_first && ok_second;
}

DebiasResult hard_debias(const Embedding &e, std::span<const std::string> words, const HardDebiasConfig &cfg) {
  require_normalized(e, "hard debias");
  DebiasResult result;
  auto &summary = result.summary;
  summary.method = "hard";
  const BiasDirection g = cfg.direction == DirectionMethod::PcaPairs
                              ? direction_pca(e, cfg.definitional_pairs)
                              : direction_pair_diff(e, cfg.direction_pair.first, cfg.direction_pair.second);

  std::unordered_set<std::string> exempt(cfg.gender_specific.begin(), cfg.gender_specific.end());
  for (const auto &p : cfg.equalize_pairs) {
    exempt.insert(p.first);
    exempt.insert(p.second);
  }
  const auto targets = resolve_targets(e, words, exempt, summary);

  std::vector<float> matrix = e.matrix();
  const std::size_t d = e.dim();
  std::size_t neutralized = 0;
  for (std::size_t i : targets) {
    auto r = reject(e.row(i), g);
    const double n = vec::norm(vec::view(r));
    if (n < kNearZero) {
      summary.degenerate.push_back(e.word(i));
      continue;
    }
    vec::scale(r, 1.0 / n);
    store_row(matrix, d, i, r);
    summary.processed.push_back(e.word(i));
    ++neutralized;
  }

  nlohmann::json equalized = nlohmann::json::array();
  std::vector<double> out_first, out_second;
  for (const auto &p : cfg.equalize_pairs) {
    auto i = e.find(p.first), j = e.find(p.second);
    if (!i || !j)
      continue;
    const auto a = vec::to_double(e.row(*i)), b = vec::to_double(e.row(*j));
    if (!equalize_pair(a, b, g, out_first, out_second)) {
      warn("equalize pair (" + p.first + ", " + p.second + ") skipped: identical projections on the bias direction");
      summary.degenerate.push_back(p.first + "/" + p.second);
      continue;
    }
    store_row(matrix, d, *i, out_first);
    store_row(matrix, d, *j, out_second);
    summary.processed.push_back(p.first);
    summary.processed.push_back(p.second);
    equalized.push_back({p.first, p.second});
  }
  summary.details = {{"neutralized", neutralized},
                     {"equalized_pairs", equalized},
                     {"direction", to_string(g.method)}};
  result.embedding = e.with_matrix(std::move(matrix));
  result.direction = g;
  return result;
}

// --- RAN Debias ------------------------------------------------------------

void RanConfig::validate() const {
  if (!(lambda_repulsion >= 0.0) || !(lambda_attraction >= 0.0) || !(lambda_neutralization >= 0.0))
    throw UsageError("RAN weights must be non-negative");
  if (!(lambda_repulsion + lambda_attraction + lambda_neutralization > 0.0))
    throw UsageError("RAN weights must not all be zero");
  if (k < 1)
    throw UsageError("RAN neighbour count must be at least 1");
  if (!(theta >= 0.0))
    throw UsageError("RAN threshold must be non-negative");
  optimizer.validate();
}

RanObjective::RanObjective(std::vector<std::vector<double>> repel, std::vector<double> original,
                           std::vector<double> direction, const RanConfig &cfg)
    : repel_(std::move(repel)), original_(std::move(original)), direction_(std::move(direction)),
      l1_(cfg.lambda_repulsion), l2_(cfg.lambda_attraction), l3_(cfg.lambda_neutralization) {
  auto unit = [](std::vector<double> &v) {
    const double n = vec::norm(vec::view(v));
    if (n == 0.0)
      throw DegenerateError("RAN objective built from a zero vector");
    vec::scale(v, 1.0 / n);
  };
  for (auto &r : repel_)
    unit(r);
  unit(original_);
  unit(direction_);
}

double RanObjective::operator()(std::span<const double> x, std::span<double> grad) const {
  const double nx = vec::norm(x);
  if (nx == 0.0)
    throw NumericalError("RAN objective evaluated at the zero vector");
  std::fill(grad.begin(), grad.end(), 0.0);
  // d cos(x, u) / dx = (u - cos * x / |x|) / |x| for unit u.
  auto add_term = [&](const std::vector<double> &u, double weight, bool absolute) {
    const double c = vec::dot(x, vec::view(u)) / nx;
    double coeff = weight;
    if (absolute)
      coeff *= c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
    if (coeff != 0.0)
      for (std::size_t j = 0; j < grad.size(); ++j)
        grad[j] += coeff * (u[j] - c * x[j] / nx) / nx;
    return absolute ? std::abs(c) : c;
  };
  double value = 0.0;
  if (!repel_.empty()) {
    const double w = l1_ / static_cast<double>(repel_.size());
    double acc = 0.0;
    for (const auto &u : repel_)
      acc += add_term(u, w, true);
    value += w * acc;
  }
  value += l2_ * (1.0 - add_term(original_, -l2_, false));
  value += l3_ * add_term(direction_, l3_, true);
  return value;
}

RanObjective ran_objective(const Embedding &e, const BiasDirection &g, std::size_t index, const RanConfig &cfg) {
  const auto list = knn(e, e.word(index), cfg.k);
  std::vector<std::vector<double>> repel;
  for (const auto &n : list.entries) {
    const Beta beta = indirect_bias_between(e, g, index, n.index);
    if (beta.status == BetaStatus::Ok && std::abs(beta.value) >= cfg.theta)
      repel.push_back(vec::to_double(e.row(n.index)));
  }
  return RanObjective(std::move(repel), vec::to_double(e.row(index)), g.values, cfg);
}

DebiasResult ran_debias(const Embedding &e, std::span<const std::string> words, const BiasDirection &g,
                        const RanConfig &cfg) {
  require_normalized(e, "RAN debias");
  cfg.validate();
  if (g.dim() != e.dim())
    throw PreconditionError("bias direction dimension does not match the embedding");
  DebiasResult result;
  auto &summary = result.summary;
  summary.method = "ran";
  const auto targets = resolve_targets(e, words, words.empty() ? default_exemptions() : std::unordered_set<std::string>{},
                                       summary);

  struct Outcome {
    std::vector<float> row;
    double initial = 0.0, final = 0.0;
    std::size_t repulsion = 0, evaluations = 0;
    bool changed = false, reverted = false;
  };
  std::vector<Outcome> outcomes(targets.size());
  const std::size_t d = e.dim();
  parallel_for(targets.size(), cfg.threads, [&](std::size_t t) {
    const std::size_t i = targets[t];
    Outcome &out = outcomes[t];
    const auto w0 = vec::to_double(e.row(i));
    std::vector<double> scratch(d);
    try {
      const auto objective = ran_objective(e, g, i, cfg);
      out.repulsion = objective.repulsion_size();
      const Objective f = [&objective](std::span<const double> x, std::span<double> grad) { return objective(x, grad); };
      out.initial = f(w0, scratch);
      out.final = out.initial;
      const auto best = minimize(f, w0, cfg.optimizer);
      out.evaluations = best.trace.size();
      std::vector<float> candidate(d);
      for (std::size_t j = 0; j < d; ++j)
        candidate[j] = static_cast<float>(best.x[j]);
      // Score what will actually be stored; keep w0 unless it improves.
      const double stored = f(vec::to_double(std::span<const float>(candidate)), scratch);
      if (std::isfinite(stored) && stored < out.initial) {
        out.row = std::move(candidate);
        out.final = stored;
        out.changed = true;
      }
    } catch (const NumericalError &) {
      out.reverted = true;
    }
  });

  std::vector<float> matrix = e.matrix();
  nlohmann::json per_word = nlohmann::json::array();
  std::size_t unchanged = 0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto &out = outcomes[t];
    const auto &word = e.word(targets[t]);
    if (out.reverted) {
      summary.reverted.push_back(word);
      warn("RAN optimization diverged for '" + word + "'; original vector kept");
      continue;
    }
    if (out.changed)
      std::copy(out.row.begin(), out.row.end(), matrix.begin() + static_cast<std::ptrdiff_t>(targets[t] * d));
    else
      ++unchanged;
    summary.processed.push_back(word);
    per_word.push_back({{"word", word},
                        {"objective_initial", out.initial},
                        {"objective_final", out.final},
                        {"repulsion_set", out.repulsion},
                        {"evaluations", out.evaluations}});
  }
  summary.details = {{"lambda", {cfg.lambda_repulsion, cfg.lambda_attraction, cfg.lambda_neutralization}},
                     {"k", cfg.k},
                     {"theta", cfg.theta},
                     {"learning_rate", cfg.optimizer.learning_rate},
                     {"max_iterations", cfg.optimizer.max_iterations},
                     {"tolerance", cfg.optimizer.tolerance},
                     {"already_optimal", unchanged},
                     {"words", per_word}};
  result.embedding = e.with_matrix(std::move(matrix));
  result.direction = g;
  return result;
}

// --- HSR Debias ------------------------------------------------------------

HsrConfig HsrConfig::defaults() {
  HsrConfig cfg;
  const Lexicon definitional = bundled("definitional-pairs");
  for (const auto &p : definitional.pairs()) {
    cfg.definitional.push_back(p.first);
    cfg.definitional.push_back(p.second);
  }
  return cfg;
}

DebiasResult hsr_debias(const Embedding &e, std::span<const std::string> words, const HsrConfig &cfg) {
  require_normalized(e, "HSR debias");
  if (!(cfg.alpha >= 0.0))
    throw UsageError("HSR ridge alpha must be non-negative");
  DebiasResult result;
  auto &summary = result.summary;
  summary.method = "hsr";

  std::vector<std::size_t> regressors;
  std::unordered_set<std::string> definitional;
  for (const auto &w : cfg.definitional) {
    auto i = e.find(w);
    if (i && definitional.insert(w).second)
      regressors.push_back(*i);
  }
  if (regressors.size() < 2)
    throw DataError("HSR debias needs at least 2 in-vocabulary definitional words, found " +
                    std::to_string(regressors.size()));
  auto exempt = words.empty() ? default_exemptions() : std::unordered_set<std::string>{};
  exempt.insert(definitional.begin(), definitional.end());
  const auto targets = resolve_targets(e, words, exempt, summary);
  if (targets.empty())
    throw DataError("HSR debias: no in-vocabulary target words");

  const std::size_t d = e.dim(), nd = regressors.size();
  Matrix design(d, nd);
  for (std::size_t c = 0; c < nd; ++c) {
    auto r = e.row(regressors[c]);
    for (std::size_t j = 0; j < d; ++j)
      design(j, c) = r[j];
  }
  std::vector<float> matrix = e.matrix();
  constexpr std::size_t kBlock = 4096;
  for (std::size_t start = 0; start < targets.size(); start += kBlock) {
    const std::size_t count = std::min(kBlock, targets.size() - start);
    Matrix response(d, count);
    for (std::size_t c = 0; c < count; ++c) {
      auto r = e.row(targets[start + c]);
      for (std::size_t j = 0; j < d; ++j)
        response(j, c) = r[j];
    }
    const Matrix weights = ridge_solve(design, response, cfg.alpha);
    const Matrix fitted = design * weights;
    for (std::size_t c = 0; c < count; ++c) {
      const std::size_t i = targets[start + c];
      std::vector<double> residual(d);
      for (std::size_t j = 0; j < d; ++j)
        residual[j] = response(j, c) - fitted(j, c);
      const double n = vec::norm(vec::view(residual));
      if (n < kNearZero) {
        summary.degenerate.push_back(e.word(i));
        continue;
      }
      vec::scale(residual, 1.0 / n);
      store_row(matrix, d, i, residual);
      summary.processed.push_back(e.word(i));
    }
  }
  if (!summary.degenerate.empty())
    warn("HSR debias: " + std::to_string(summary.degenerate.size()) +
         " target(s) lie inside the definitional span and were left unchanged");
  nlohmann::json used = nlohmann::json::array();
  for (auto i : regressors)
    used.push_back(e.word(i));
  summary.details = {{"alpha", cfg.alpha}, {"definitional", used}};
  result.embedding = e.with_matrix(std::move(matrix));
  return result;
}

} // namespace fairvec
