#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairvec/debias.hpp"
#include "fairvec/embedding.hpp"
#include "fairvec/error.hpp"
#include "fairvec/geometry.hpp"
#include "fairvec/lexicons.hpp"
#include "fairvec/log.hpp"
#include "fairvec/metrics.hpp"
#include "fairvec/parallel.hpp"
#include "fairvec/pretrained.hpp"
#include "fairvec/report.hpp"
#include "fairvec/viz.hpp"

namespace fairvec::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Everything a run can be configured with. Defaults are overridden by the
// --config file, which is overridden by explicit flags.
struct RunConfig {
  std::string emb;
  std::string emb2;
  std::string emb_format = "auto";
  std::string pretrained;
  std::string registry;
  std::string direction = "pca-pairs";
  std::string pairs;
  std::vector<std::string> direction_pair{"she", "he"};
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t k = 100;
  std::size_t n = 10;
  double theta = 0.05;
  double c = 1.0;
  std::size_t permutations = 10000;
  double alpha = 1.0;
  std::vector<double> lambdas{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  double learning_rate = 0.01;
  int max_iterations = 300;
  double tolerance = 1e-6;
  std::vector<std::string> words;
  std::string words_file;
  std::string weat;
  std::string sembias;
  std::string equalize;
  std::string gender_specific;
  std::string definitional;
  std::vector<std::string> metrics{"direct-bias"};
  std::string word;
  std::string out;
  std::string out_format = "auto";
  std::string out_dir = ".";
  std::string format = "json";

  json to_json() const {
    return {{"emb", emb},
            {"emb2", emb2},
            {"emb_format", emb_format},
            {"pretrained", pretrained},
            {"registry", registry},
            {"direction", direction},
            {"pairs", pairs},
            {"direction_pair", direction_pair},
            {"seed", seed},
            {"threads", resolve_threads(threads)},
            {"k", k},
            {"n", n},
            {"theta", theta},
            {"c", c},
            {"permutations", permutations},
            {"alpha", alpha},
            {"lambdas", lambdas},
            {"learning_rate", learning_rate},
            {"max_iterations", max_iterations},
            {"tolerance", tolerance},
            {"words", words},
            {"words_file", words_file},
            {"weat", weat},
            {"sembias", sembias},
            {"equalize", equalize},
            {"gender_specific", gender_specific},
            {"definitional", definitional},
            {"metrics", metrics},
            {"word", word},
            {"out", out},
            {"out_format", out_format},
            {"out_dir", out_dir},
            {"format", format}};
  }

  void apply(const json &j) {
    if (!j.is_object())
      throw UsageError("config file must hold a JSON object");
    for (const auto &[key, value] : j.items()) {
      try {
        apply_key(key, value);
      } catch (const json::exception &e) {
        throw UsageError("config key '" + key + "': " + e.what());
      }
    }
  }

private:
  void apply_key(const std::string &key, const json &v) {
    if (key == "emb") emb = v.get<std::string>();
    else if (key == "emb2") emb2 = v.get<std::string>();
    else if (key == "emb_format") emb_format = v.get<std::string>();
    else if (key == "pretrained") pretrained = v.get<std::string>();
    else if (key == "registry") registry = v.get<std::string>();
    else if (key == "direction") direction = v.get<std::string>();
    else if (key == "pairs") pairs = v.get<std::string>();
    else if (key == "direction_pair") direction_pair = v.get<std::vector<std::string>>();
    else if (key == "seed") seed = v.get<std::uint64_t>();
    else if (key == "threads") threads = v.get<unsigned>();
    else if (key == "k") k = v.get<std::size_t>();
    else if (key == "n") n = v.get<std::size_t>();
    else if (key == "theta") theta = v.get<double>();
    else if (key == "c") c = v.get<double>();
    else if (key == "permutations") permutations = v.get<std::size_t>();
    else if (key == "alpha") alpha = v.get<double>();
    else if (key == "lambdas") lambdas = v.get<std::vector<double>>();
    else if (key == "learning_rate") learning_rate = v.get<double>();
    else if (key == "max_iterations") max_iterations = v.get<int>();
    else if (key == "tolerance") tolerance = v.get<double>();
    else if (key == "words") words = v.get<std::vector<std::string>>();
    else if (key == "words_file") words_file = v.get<std::string>();
    else if (key == "weat") weat = v.get<std::string>();
    else if (key == "sembias") sembias = v.get<std::string>();
    else if (key == "equalize") equalize = v.get<std::string>();
    else if (key == "gender_specific") gender_specific = v.get<std::string>();
    else if (key == "definitional") definitional = v.get<std::string>();
    else if (key == "metrics") metrics = v.get<std::vector<std::string>>();
    else if (key == "word") word = v.get<std::string>();
    else if (key == "out") out = v.get<std::string>();
    else if (key == "out_format") out_format = v.get<std::string>();
    else if (key == "out_dir") out_dir = v.get<std::string>();
    else if (key == "format") format = v.get<std::string>();
    else throw UsageError("unknown config key '" + key + "'");
  }
};

// Flag values as parsed; unset flags leave the config untouched.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> emb, emb2, emb_format, pretrained, registry, direction, pairs;
  std::optional<std::vector<std::string>> direction_pair;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::size_t> k, n, permutations;
  std::optional<double> theta, c, alpha, learning_rate, tolerance;
  std::optional<std::vector<double>> lambdas;
  std::optional<int> max_iterations;
  std::optional<std::vector<std::string>> words, metrics;
  std::optional<std::string> words_file, weat, sembias, equalize, gender_specific, definitional, word;
  std::optional<std::string> out, out_format, out_dir, format;
};

template <class T> void take(T &dst, const std::optional<T> &src) {
  if (src)
    dst = *src;
}

RunConfig resolve(const Flags &f) {
  RunConfig cfg;
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in)
      throw UsageError("cannot open config file '" + *f.config + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception &e) {
      throw UsageError("config file '" + *f.config + "' is not valid JSON: " + e.what());
    }
    cfg.apply(j);
  }
  take(cfg.emb, f.emb);
  take(cfg.emb2, f.emb2);
  take(cfg.emb_format, f.emb_format);
  take(cfg.pretrained, f.pretrained);
  take(cfg.registry, f.registry);
  take(cfg.direction, f.direction);
  take(cfg.pairs, f.pairs);
  take(cfg.direction_pair, f.direction_pair);
  take(cfg.seed, f.seed);
  take(cfg.threads, f.threads);
  take(cfg.k, f.k);
  take(cfg.n, f.n);
  take(cfg.permutations, f.permutations);
  take(cfg.theta, f.theta);
  take(cfg.c, f.c);
  take(cfg.alpha, f.alpha);
  take(cfg.learning_rate, f.learning_rate);
  take(cfg.tolerance, f.tolerance);
  take(cfg.lambdas, f.lambdas);
  take(cfg.max_iterations, f.max_iterations);
  take(cfg.words, f.words);
  take(cfg.metrics, f.metrics);
  take(cfg.words_file, f.words_file);
  take(cfg.weat, f.weat);
  take(cfg.sembias, f.sembias);
  take(cfg.equalize, f.equalize);
  take(cfg.gender_specific, f.gender_specific);
  take(cfg.definitional, f.definitional);
  take(cfg.word, f.word);
  take(cfg.out, f.out);
  take(cfg.out_format, f.out_format);
  take(cfg.out_dir, f.out_dir);
  take(cfg.format, f.format);
  if (cfg.format != "json" && cfg.format != "text")
    throw UsageError("--format must be json or text");
  if (cfg.direction_pair.size() != 2)
    throw UsageError("direction pair needs exactly two words");
  return cfg;
}

void add_input_flags(CLI::App *app, Flags &f) {
  app->add_option("--config", f.config, "JSON config file (flags take precedence)");
  app->add_option("--emb", f.emb, "embedding file");
  app->add_option("--emb-format", f.emb_format, "auto, text, word2vec-bin or vocab-npy");
  app->add_option("--pretrained", f.pretrained, "registry name of a pretrained embedding");
  app->add_option("--registry", f.registry, "pretrained registry JSON");
  app->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  app->add_option("--seed", f.seed, "random seed");
}

void add_direction_flags(CLI::App *app, Flags &f) {
  app->add_option("--direction", f.direction, "pca-pairs or pair-diff");
  app->add_option("--pairs", f.pairs, "definitional pair list (JSON) for pca-pairs");
  app->add_option("--direction-pair", f.direction_pair, "female,male anchor words for pair-diff")->delimiter(',');
}

void add_word_flags(CLI::App *app, Flags &f) {
  app->add_option("--words", f.words, "comma-separated words")->delimiter(',');
  app->add_option("--words-file", f.words_file, "newline-separated word list");
}

Embedding load_embedding(const RunConfig &cfg, const std::string &path_text) {
  Format format = parse_format(cfg.emb_format);
  fs::path path = path_text;
  if (path_text.empty()) {
    if (cfg.pretrained.empty())
      throw UsageError("an embedding is required (--emb or --pretrained)");
    if (cfg.registry.empty())
      throw UsageError("--pretrained needs --registry");
    const Registry registry = load_registry(cfg.registry);
    path = fetch_pretrained(cfg.pretrained, registry);
    format = registry.at(cfg.pretrained).format;
  }
  Embedding e = load(path, format);
  return e.normalized() ? e : normalize(e);
}

Embedding load_primary(const RunConfig &cfg) {
  if (!cfg.emb.empty() && !cfg.pretrained.empty())
    throw UsageError("--emb and --pretrained are mutually exclusive");
  return load_embedding(cfg, cfg.emb);
}

std::vector<WordPair> definitional_pairs(const RunConfig &cfg) {
  return cfg.pairs.empty() ? bundled("definitional-pairs").pairs() : load_lexicon(cfg.pairs, LexiconKind::PairList).pairs();
}

BiasDirection bias_direction(const Embedding &e, const RunConfig &cfg) {
  if (parse_direction_method(cfg.direction) == DirectionMethod::PairDiff)
    return direction_pair_diff(e, cfg.direction_pair[0], cfg.direction_pair[1]);
  const auto pairs = definitional_pairs(cfg);
  return direction_pca(e, pairs);
}

std::vector<std::string> word_list(const RunConfig &cfg) {
  std::vector<std::string> words = cfg.words;
  if (!cfg.words_file.empty()) {
    const auto lex = load_lexicon(cfg.words_file, LexiconKind::WordList);
    words.insert(words.end(), lex.words().begin(), lex.words().end());
  }
  return words;
}

void emit(std::ostream &out, json j, const RunConfig &cfg) {
  j["config"] = cfg.to_json();
  out << j.dump(2) << "\n";
}

// --- metric -------------------------------------------------------------------

int cmd_metric(const std::string &name, const RunConfig &cfg, std::ostream &out) {
  MetricParams params;
  params.c = cfg.c;
  params.k = cfg.k;
  params.theta = cfg.theta;
  params.permutations = cfg.permutations;
  params.seed = cfg.seed;
  params.threads = resolve_threads(cfg.threads);
  const auto metric = make_metric(name, params);

  MetricInput input;
  input.words = word_list(cfg);
  if (name == "weat")
    input.weat = cfg.weat.empty() ? bundled("weat-career-family").weat()
                                  : load_lexicon(cfg.weat, LexiconKind::WeatSpec).weat();
  if (name == "sembias")
    input.sembias = cfg.sembias.empty() ? bundled("sembias-sample").sembias()
                                        : load_lexicon(cfg.sembias, LexiconKind::SemBiasSet).sembias();
  else if (name != "weat" && input.words.empty())
    throw UsageError("metric " + name + " needs --words or --words-file");

  const Embedding e = load_primary(cfg);
  const bool uses_direction = name != "weat" && name != "sembias";
  const BiasDirection g = uses_direction ? bias_direction(e, cfg) : BiasDirection{};
  emit(out, metric->compute(e, g, input).to_json(), cfg);
  return 0;
}

// --- debias -------------------------------------------------------------------

int cmd_debias(const std::string &method, const RunConfig &cfg, std::ostream &out) {
  if (cfg.out.empty())
    throw UsageError("debias needs an output path (--out)");
  const Format out_format = parse_format(cfg.out_format);
  const Embedding e = load_primary(cfg);
  const auto words = word_list(cfg);

  DebiasResult result;
  if (method == "hard") {
    auto hc = HardDebiasConfig::defaults();
    hc.direction = parse_direction_method(cfg.direction);
    hc.definitional_pairs = definitional_pairs(cfg);
    hc.direction_pair = {cfg.direction_pair[0], cfg.direction_pair[1]};
    if (!cfg.equalize.empty())
      hc.equalize_pairs = load_lexicon(cfg.equalize, LexiconKind::PairList).pairs();
    if (!cfg.gender_specific.empty())
      hc.gender_specific = load_lexicon(cfg.gender_specific, LexiconKind::WordList).words();
    result = HardDebias(hc).run(e, words);
  } else if (method == "ran") {
    if (cfg.lambdas.size() != 3)
      throw UsageError("RAN needs three lambda weights");
    RanConfig rc;
    rc.lambda_repulsion = cfg.lambdas[0];
    rc.lambda_attraction = cfg.lambdas[1];
    rc.lambda_neutralization = cfg.lambdas[2];
    rc.k = cfg.k;
    rc.theta = cfg.theta;
    rc.optimizer = {cfg.learning_rate, cfg.max_iterations, cfg.tolerance, Projection::UnitSphere};
    rc.threads = resolve_threads(cfg.threads);
    rc.validate();
    result = RanDebias(bias_direction(e, cfg), rc).run(e, words);
  } else {
    auto hs = HsrConfig::defaults();
    hs.alpha = cfg.alpha;
    if (!cfg.definitional.empty())
      hs.definitional = load_lexicon(cfg.definitional, LexiconKind::WordList).words();
    result = HsrDebias(hs).run(e, words);
  }
  save(result.embedding, cfg.out, out_format);
  json j{{"summary", result.summary.to_json()}, {"output", cfg.out}};
  emit(out, std::move(j), cfg);
  return 0;
}

// --- report -------------------------------------------------------------------

std::string file_stem(std::string word) {
  for (char &ch : word)
    if (ch == '/' || ch == '\\' || ch == '\0')
      ch = '_';
  return word;
}

int cmd_report(const std::string &kind, const RunConfig &cfg, std::ostream &out) {
  if (kind == "word" && cfg.word.empty())
    throw UsageError("report word needs a word");
  const Embedding e = load_primary(cfg);
  const BiasDirection g = bias_direction(e, cfg);
  ReportDocument doc;
  fs::path text_path;
  if (kind == "word") {
    WordReportOptions opts;
    opts.theta = cfg.theta;
    opts.output_dir = cfg.out_dir;
    doc = word_report(e, g, cfg.word, cfg.k, opts);
    text_path = fs::path(cfg.out_dir) / (file_stem(cfg.word) + "-report.txt");
  } else {
    doc = global_report(e, g, cfg.n);
    fs::create_directories(cfg.out_dir);
    text_path = fs::path(cfg.out_dir) / "global-report.txt";
  }
  doc.metadata["config"] = cfg.to_json();
  doc.attachments.push_back(text_path.string());
  std::ofstream file(text_path, std::ios::binary);
  file << render(doc, ReportFormat::Text);
  if (!file)
    throw IoError("cannot write report '" + text_path.string() + "'");
  out << render(doc, cfg.format == "text" ? ReportFormat::Text : ReportFormat::Json);
  return 0;
}

// --- compare ------------------------------------------------------------------

std::vector<std::string> default_neutral_words(const Embedding &e) {
  std::set<std::string, std::less<>> exempt;
  for (const auto *name : {"gender-specific", "definitional-pairs", "equalize-pairs"})
    for (const auto &w : bundled(name).all_words())
      exempt.insert(w);
  std::vector<std::string> words;
  for (const auto &w : e.vocab())
    if (!exempt.contains(w))
      words.push_back(w);
  return words;
}

int cmd_compare(const RunConfig &cfg, std::ostream &out) {
  if (cfg.emb2.empty())
    throw UsageError("compare needs a second embedding (--against)");
  MetricParams params;
  params.c = cfg.c;
  params.k = cfg.k;
  params.theta = cfg.theta;
  params.permutations = cfg.permutations;
  params.seed = cfg.seed;
  params.threads = resolve_threads(cfg.threads);
  std::vector<std::unique_ptr<Metric>> suite;
  for (const auto &name : cfg.metrics)
    suite.push_back(make_metric(name, params));

  const Embedding before = load_primary(cfg);
  const Embedding after = load_embedding(cfg, cfg.emb2);
  if (before.dim() != after.dim())
    throw DataError("dimension mismatch: " + std::to_string(before.dim()) + " vs " + std::to_string(after.dim()));
  const BiasDirection g = bias_direction(before, cfg);

  MetricInput input;
  input.words = word_list(cfg);
  if (input.words.empty())
    input.words = default_neutral_words(before);
  input.weat = cfg.weat.empty() ? bundled("weat-career-family").weat()
                                : load_lexicon(cfg.weat, LexiconKind::WeatSpec).weat();
  input.sembias = cfg.sembias.empty() ? bundled("sembias-sample").sembias()
                                      : load_lexicon(cfg.sembias, LexiconKind::SemBiasSet).sembias();

  json rows = json::array();
  for (const auto &metric : suite) {
    const MetricResult a = metric->compute(before, g, input);
    const MetricResult b = metric->compute(after, g, input);
    for (const auto &v : a.values) {
      const double after_value = b.value(v.label);
      rows.push_back({{"metric", std::string(metric->name())},
                      {"label", v.label},
                      {"before", v.value},
                      {"after", after_value},
                      {"delta", after_value - v.value}});
    }
  }
  if (cfg.format == "text") {
    ReportDocument doc;
    doc.kind = ReportKind::Global;
    doc.subject = cfg.emb + " vs " + cfg.emb2;
    Table t{{"metric", "label", "before", "after", "delta"}, {}};
    for (const auto &r : rows)
      t.rows.push_back({r["metric"].get<std::string>(), r["label"].get<std::string>(), r["before"].get<double>(),
                        r["after"].get<double>(), r["delta"].get<double>()});
    doc.sections.push_back({"comparison", std::move(t)});
    out << render(doc, ReportFormat::Text);
    return 0;
  }
  emit(out, {{"comparison", rows}, {"before", cfg.emb}, {"after", cfg.emb2}}, cfg);
  return 0;
}

// --- viz ----------------------------------------------------------------------

int cmd_viz(const std::string &kind, const RunConfig &cfg, std::ostream &out) {
  if (cfg.out.empty())
    throw UsageError("viz needs an output path (--out)");
  const auto words = word_list(cfg);
  if (kind == "scatter" && cfg.word.empty())
    throw UsageError("viz scatter needs --word");
  if ((kind == "bar" || kind == "pca") && words.empty())
    throw UsageError("viz " + kind + " needs --words or --words-file");
  if (kind == "cloud" && cfg.word.empty() && words.empty())
    throw UsageError("viz cloud needs --word or --words");

  const Embedding e = load_primary(cfg);
  const BiasDirection g = bias_direction(e, cfg);
  fs::path written;
  if (kind == "scatter") {
    written = neighbor_scatter(e, g, cfg.word, cfg.k, cfg.out);
  } else if (kind == "bar") {
    written = bias_bar(e, g, words, cfg.out);
  } else if (kind == "pca") {
    written = pca_scatter(e, words, cfg.out, g);
  } else {
    std::vector<std::pair<std::string, double>> items;
    if (!cfg.word.empty()) {
      for (const auto &n : knn(e, cfg.word, cfg.k).entries)
        items.emplace_back(n.word, std::max(0.0, n.cosine));
    } else {
      for (const auto &w : words)
        if (const auto i = e.find(w))
          items.emplace_back(w, std::abs(cosine_to_direction(e, *i, g)));
      if (items.empty())
        throw DataError("viz cloud: every word is out of vocabulary");
    }
    written = word_cloud(items, cfg.out);
  }
  emit(out, {{"kind", kind}, {"output", written.string()}}, cfg);
  return 0;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  ScopedWarningSink sink([&err](std::string_view message) { err << "warning: " << message << "\n"; });

  CLI::App app{"Bias measurement and mitigation for static word embeddings.", "fairvec"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  Flags f;
  std::string metric_name, debias_method, report_kind, viz_kind;
  std::optional<std::string> report_word;

  auto *metric = app.add_subcommand("metric", "run one bias metric and print its result as JSON");
  metric->add_option("name", metric_name, "metric name")->required();
  add_input_flags(metric, f);
  add_direction_flags(metric, f);
  add_word_flags(metric, f);
  metric->add_option("--k", f.k, "neighbour count");
  metric->add_option("--theta", f.theta, "indirect-bias threshold");
  metric->add_option("--c", f.c, "direct-bias strictness");
  metric->add_option("--permutations", f.permutations, "WEAT Monte-Carlo draws");
  metric->add_option("--weat", f.weat, "WEAT specification (JSON)");
  metric->add_option("--sembias", f.sembias, "SemBias dataset (JSON)");

  auto *debias = app.add_subcommand("debias", "debias an embedding and write the result");
  debias->add_option("method", debias_method, "hard, ran or hsr")
      ->required()
      ->check(CLI::IsMember({"hard", "ran", "hsr"}));
  add_input_flags(debias, f);
  add_direction_flags(debias, f);
  add_word_flags(debias, f);
  debias->add_option("--out", f.out, "output embedding path");
  debias->add_option("--out-format", f.out_format, "output format (auto from extension)");
  debias->add_option("--k", f.k, "RAN neighbour count");
  debias->add_option("--theta", f.theta, "RAN repulsion threshold");
  debias->add_option("--lambda", f.lambdas, "RAN weights: repulsion,attraction,neutralization")
      ->delimiter(',')
      ->expected(3);
  debias->add_option("--lr", f.learning_rate, "RAN learning rate");
  debias->add_option("--max-iterations", f.max_iterations, "RAN iteration cap");
  debias->add_option("--tolerance", f.tolerance, "RAN convergence tolerance");
  debias->add_option("--alpha", f.alpha, "HSR ridge strength");
  debias->add_option("--equalize", f.equalize, "hard: equalize pair list (JSON)");
  debias->add_option("--gender-specific", f.gender_specific, "hard: gender-specific word list");
  debias->add_option("--definitional", f.definitional, "hsr: definitional word list");

  auto *report = app.add_subcommand("report", "word or global bias report");
  report->add_option("kind", report_kind, "word or global")->required()->check(CLI::IsMember({"word", "global"}));
  report->add_option("word", report_word, "word to report on");
  add_input_flags(report, f);
  add_direction_flags(report, f);
  report->add_option("-n", f.n, "global: words per ranked list");
  report->add_option("--k", f.k, "word: neighbour count");
  report->add_option("--theta", f.theta, "word: proximity threshold");
  report->add_option("--out-dir", f.out_dir, "directory for the text report and SVG attachments");
  report->add_option("--format", f.format, "stdout format: json or text");

  auto *compare = app.add_subcommand("compare", "metric suite before and after debiasing");
  add_input_flags(compare, f);
  add_direction_flags(compare, f);
  add_word_flags(compare, f);
  compare->add_option("--against", f.emb2, "debiased embedding");
  compare->add_option("--metrics", f.metrics, "comma-separated metric names")->delimiter(',');
  compare->add_option("--k", f.k, "neighbour count");
  compare->add_option("--theta", f.theta, "indirect-bias threshold");
  compare->add_option("--c", f.c, "direct-bias strictness");
  compare->add_option("--permutations", f.permutations, "WEAT Monte-Carlo draws");
  compare->add_option("--weat", f.weat, "WEAT specification (JSON)");
  compare->add_option("--sembias", f.sembias, "SemBias dataset (JSON)");
  compare->add_option("--format", f.format, "json or text");

  auto *viz = app.add_subcommand("viz", "write an SVG plot");
  viz->add_option("kind", viz_kind, "scatter, bar, pca or cloud")
      ->required()
      ->check(CLI::IsMember({"scatter", "bar", "pca", "cloud"}));
  add_input_flags(viz, f);
  add_direction_flags(viz, f);
  add_word_flags(viz, f);
  viz->add_option("--word", f.word, "query word (scatter, cloud)");
  viz->add_option("--k", f.k, "neighbour count");
  viz->add_option("--out", f.out, "output SVG path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (report_word)
      f.word = report_word;
    const RunConfig cfg = resolve(f);
    if (metric->parsed())
      return cmd_metric(metric_name, cfg, out);
    if (debias->parsed())
      return cmd_debias(debias_method, cfg, out);
    if (report->parsed())
      return cmd_report(report_kind, cfg, out);
    if (compare->parsed())
      return cmd_compare(cfg, out);
    return cmd_viz(viz_kind, cfg, out);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

} // namespace fairvec::cli
