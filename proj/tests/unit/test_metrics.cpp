#include "doctest.h"

#include <cmath>
#include <random>

#include "fairvec/error.hpp"
#include "fairvec/geometry.hpp"
#include "fairvec/metrics.hpp"
#include "fairvec/vector_ops.hpp"
#include "fixtures.hpp"

using namespace fairvec;
using fixtures::Rows;

namespace {

std::vector<float> unit(std::vector<double> v) {
  double n = 0;
  for (double x : v)
    n += x * x;
  std::vector<float> out;
  for (double x : v)
    out.push_back(static_cast<float>(x / std::sqrt(n)));
  return out;
}

// Query q has no gender component; three neutral neighbours and two
// gendered ones. A second cluster around r is entirely neutral.
Embedding proximity_fixture() {
  return fixtures::make(Rows{
      {"q", unit({0, 1, 0, 0, 0})},
      {"n1", unit({0, 0.9, 0.3, 0, 0})},
      {"n2", unit({0, 0.85, 0, 0.4, 0})},
      {"n3", unit({0, 0.8, -0.3, 0.2, 0})},
      {"g1", unit({0.6, 0.75, 0, 0, 0})},
      {"g2", unit({-0.6, 0.7, 0.1, 0, 0})},
      {"r", unit({0, 0, 0, 0, 1})},
      {"m1", unit({0, 0, 0.1, 0, 1})},
      {"m2", unit({0, 0, 0, 0.2, 1})},
      {"m3", unit({0, 0, -0.2, 0.1, 1})},
      {"m4", unit({0, 0, 0.3, -0.2, 1})},
      {"m5", unit({0, 0, -0.1, -0.3, 1})},
  });
}

// Independent scalar evaluation of beta.
double beta_oracle(std::span<const float> w, std::span<const float> v, const BiasDirection &g) {
  double wv = 0, wg = 0, vg = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wv += double(w[i]) * v[i];
    wg += double(w[i]) * g.values[i];
    vg += double(v[i]) * g.values[i];
  }
  double pp = 0, wn = 0, vn = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double a = w[i] - wg * g.values[i], b = v[i] - vg * g.values[i];
    pp += a * b;
    wn += a * a;
    vn += b * b;
  }
  return (wv - pp / std::sqrt(wn * vn)) / wv;
}

const std::vector<std::string> &words(std::initializer_list<std::string> w) {
  static std::vector<std::string> store;
  store = w;
  return store;
}

} // namespace

TEST_CASE("direct_bias examples") {
  const auto g = fixtures::axis(2, 0);
  const auto e = fixtures::make(Rows{{"ortho", {0, 1}}, {"coll", {1, 0}}, {"half", unit({0.5, std::sqrt(0.75)})}});
  CHECK(direct_bias(e, g, words({"ortho"})).value("direct_bias") == 0);
  CHECK(direct_bias(e, g, words({"coll"})).value("direct_bias") == 1);
  CHECK(direct_bias(e, g, words({"half"}), 2).value("direct_bias") == doctest::Approx(0.25).epsilon(1e-7));
  const auto r = direct_bias(e, g, words({"ortho", "zzz", "coll"}));
  CHECK(r.value("direct_bias") == 0.5);
  CHECK(r.skipped == std::vector<std::string>{"zzz"});
  CHECK(r.breakdown.size() == 2);
  CHECK(r.parameters["c"] == 1.0);
  CHECK_THROWS_AS(direct_bias(e, g, words({"zzz"})), DataError);
  CHECK_THROWS_AS(direct_bias(e, g, words({"coll"}), -1), UsageError);
}

TEST_CASE("direct_bias range and monotonicity in c") {
  const auto e = fixtures::random_embedding(50, 6, 3);
  const auto g = fixtures::axis(6, 2);
  const auto &all = e.vocab().words();
  double previous = 2;
  for (double c : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double v = direct_bias(e, g, all, c).value("direct_bias");
    CHECK(v >= 0);
    CHECK(v <= 1);
    CHECK(v <= previous);
    previous = v;
  }
}

TEST_CASE("indirect_bias examples") {
  const auto g = fixtures::axis(3, 0);
  const auto e = fixtures::make(Rows{{"w", unit({0, 0.6, 0.8})},
                                     {"v", unit({0, 1, 0.2})},
                                     {"hw", unit({0.8, 0.6, 0})},
                                     {"hv", unit({0.8, 0, 0.6})},
                                     {"x", unit({0, 1, 0})},
                                     {"y", unit({0, 0, 1})},
                                     {"gx", unit({1, 0, 0})},
                                     {"mixed", unit({0.5, 0.5, 0.5})}});
  CHECK(std::abs(indirect_bias(e, g, "w", "v").value("indirect_bias")) <= 1e-7);
  CHECK(std::abs(indirect_bias(e, g, "mixed", "mixed").value("indirect_bias")) <= 1e-7);
  // Hand case: w.v = 0.64 and the perpendicular parts are orthogonal, so beta = 1.
  CHECK(indirect_bias(e, g, "hw", "hv").value("indirect_bias") == doctest::Approx(1).epsilon(1e-6));
  CHECK(indirect_bias(e, g, "hw", "hv").value("indirect_bias") ==
        doctest::Approx(beta_oracle(e.row("hw"), e.row("hv"), g)).epsilon(1e-12));
  CHECK_THROWS_AS(indirect_bias(e, g, "x", "hv"), DegenerateError); // w.v = 0
  CHECK_THROWS_AS(indirect_bias(e, g, "gx", "hw"), DegenerateError); // zero perpendicular part
  CHECK_THROWS_AS(indirect_bias(e, g, "zzz", "w"), OovError);
}

TEST_CASE("weat: hand-derived 2-D case") {
  const auto e = fixtures::make(Rows{{"x", {1, 0}}, {"y", {0, 1}}, {"a", {1, 0}}, {"b", {0, 1}}});
  const WeatSpec spec{"hand", {"x"}, {"y"}, {"a"}, {"b"}};
  const auto r = weat(e, spec);
  CHECK(r.value("statistic") == 2);
  CHECK(r.value("effect_size") == 2);
  CHECK(r.value("p_value") == 0);
  CHECK(r.metadata["mode"] == "exhaustive");
  CHECK(r.metadata["partitions_evaluated"] == 2);
}

TEST_CASE("weat: cancellation and degenerate cases") {
  const auto e = fixtures::random_embedding(12, 5, 4);
  const WeatSpec same{"same", {"w0", "w1"}, {"w0", "w1"}, {"w4", "w5"}, {"w6", "w7"}};
  const auto r = weat(e, same);
  CHECK(r.value("statistic") == 0);
  const WeatSpec ab{"ab", {"w0", "w1"}, {"w2", "w3"}, {"w4", "w5"}, {"w4", "w5"}};
  try {
    (void)weat(e, ab);
    FAIL("expected an undefined effect size");
  } catch (const UndefinedEffectSizeError &err) {
    CHECK(err.statistic() == 0);
  }
  const WeatSpec oov{"oov", {"w0"}, {"zzz"}, {"w4"}, {"w5"}};
  CHECK_THROWS_AS(weat(e, oov), OovError);
  const WeatSpec uneven{"uneven", {"w0", "w1"}, {"w2"}, {"w4"}, {"w5"}};
  CHECK_THROWS_AS(weat(e, uneven), PreconditionError);
}

TEST_CASE("weat: swapping X/Y or A/B negates S and d exactly") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto e = fixtures::random_embedding(30, 8, 50 + seed);
    const WeatSpec spec{"s", {"w0", "w1", "w2", "w3"}, {"w4", "w5", "w6", "w7"}, {"w8", "w9", "w10"}, {"w11", "w12"}};
    const WeatSpec xy{"s", spec.y, spec.x, spec.a, spec.b};
    const WeatSpec ab{"s", spec.x, spec.y, spec.b, spec.a};
    const auto r = weat(e, spec), rxy = weat(e, xy), rab = weat(e, ab);
    CHECK(rxy.value("statistic") == -r.value("statistic"));
    CHECK(rxy.value("effect_size") == -r.value("effect_size"));
    CHECK(rab.value("statistic") == -r.value("statistic"));
    CHECK(rab.value("effect_size") == -r.value("effect_size"));
  }
}

TEST_CASE("weat: Monte-Carlo agrees with exhaustive enumeration") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto e = fixtures::random_embedding(30, 6, 70 + seed);
    const WeatSpec spec{"s", {"w0", "w1", "w2", "w3", "w4"}, {"w5", "w6", "w7", "w8", "w9"}, {"w10", "w11"},
                        {"w12", "w13"}};
    const auto ex = weat(e, spec, 10000, 1, WeatSampling::Exhaustive);
    const auto mc = weat(e, spec, 10000, 1, WeatSampling::MonteCarlo);
    CHECK(ex.metadata["partitions_evaluated"] == 252);
    CHECK(mc.metadata["mode"] == "monte-carlo");
    CHECK(std::abs(ex.value("p_value") - mc.value("p_value")) <= 0.02);
    // Seeded sampling is reproducible.
    CHECK(weat(e, spec, 10000, 1, WeatSampling::MonteCarlo).to_json() == mc.to_json());
  }
}

TEST_CASE("pmn examples") {
  const auto g = fixtures::axis(3, 0);
  const auto e = fixtures::make(Rows{{"q", unit({0, 1, 0})},
                                     {"a", unit({-0.3, 1, 0.1})},
                                     {"b", unit({-0.2, 1, -0.1})},
                                     {"c", unit({-0.1, 1, 0.2})},
                                     {"d", unit({0.3, 1, 0})},
                                     {"far", unit({0, 0, 1})}});
  CHECK(pmn(e, g, "q", 4).value("pmn") == 0.75);
  const auto ortho = fixtures::orthonormal({"a", "b", "c", "d"}, 5);
  CHECK(pmn(ortho, fixtures::axis(5, 4), "a", 3).value("pmn") == 0);
  const auto wide = pmn(e, g, "q", 100);
  CHECK(wide.parameters["k"] == 100);
  CHECK(wide.parameters["k_effective"] == 5);
  CHECK_THROWS_AS(pmn(e, g, "zzz", 3), OovError);
}

TEST_CASE("proximity_bias examples") {
  const auto e = proximity_fixture();
  const auto g = fixtures::axis(5, 0);
  CHECK(proximity_bias(e, g, "q", 5).value("proximity_bias") == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(proximity_bias(e, g, "r", 5).value("proximity_bias") == 0);
  const auto ortho = fixtures::orthonormal({"a", "b", "c", "d"}, 5);
  // All words orthogonal to g: beta = 0 everywhere.
  CHECK(proximity_bias(ortho, fixtures::axis(5, 4), "a", 3).value("proximity_bias") == 0);
  const auto rnd = fixtures::random_embedding(80, 10, 5);
  const auto rg = direction_pair_diff(rnd, "w0", "w1");
  CHECK(proximity_bias(rnd, rg, "w7", 20, 0.0).value("proximity_bias") == 1);
  CHECK_THROWS_AS(proximity_bias(e, g, "zzz", 5), OovError);
  CHECK_THROWS_AS(proximity_bias(e, g, "q", 0), UsageError);
}

TEST_CASE("gipe") {
  const auto e = proximity_fixture();
  const auto g = fixtures::axis(5, 0);
  CHECK(gipe(e, g, words({"q"}), 5).value("gipe") == proximity_bias(e, g, "q", 5).value("proximity_bias"));
  CHECK(gipe(e, g, words({"q", "r"}), 5).value("gipe") == doctest::Approx(0.2).epsilon(1e-12));
  const auto ortho = fixtures::orthonormal({"a", "b", "c", "d"}, 5);
  CHECK(gipe(ortho, fixtures::axis(5, 4), words({"a", "b", "c"}), 2).value("gipe") == 0);
  CHECK_THROWS_AS(gipe(e, g, words({"zzz"}), 5), DataError);
  const auto skipped = gipe(e, g, words({"q", "zzz", "q"}), 5);
  CHECK(skipped.skipped == std::vector<std::string>{"zzz"});
  CHECK(skipped.breakdown.size() == 1);
}

TEST_CASE("gipe equals the mean of proximity_bias and ignores the thread count") {
  const auto e = fixtures::random_embedding(120, 12, 6);
  const auto g = direction_pair_diff(e, "w0", "w1");
  std::vector<std::string> list;
  for (int i = 2; i < 60; i += 3)
    list.push_back("w" + std::to_string(i));
  const auto one = gipe(e, g, list, 15, 0.05, 1);
  double sum = 0;
  for (const auto &w : list)
    sum += proximity_bias(e, g, w, 15, 0.05).value("proximity_bias");
  CHECK(one.value("gipe") == doctest::Approx(sum / list.size()).epsilon(1e-15));
  for (unsigned t : {2u, 3u, 8u})
    CHECK(gipe(e, g, list, 15, 0.05, t).to_json() == one.to_json());
}

TEST_CASE("sembias") {
  Rows rows;
  auto basis = [](std::size_t i) {
    std::vector<float> v(12, 0.0f);
    v[i] = 1.0f;
    return v;
  };
  rows = {{"he", basis(0)},         {"she", basis(1)},   {"king", basis(0)},  {"queen", basis(1)},
          {"doctor", basis(2)},     {"nurse", basis(3)}, {"cat", basis(4)},   {"dog", basis(5)},
          {"table", basis(6)},      {"chair", basis(7)}, {"programmer", basis(0)}, {"homemaker", basis(1)},
          {"uncle", basis(8)},      {"aunt", basis(9)},  {"sun", basis(10)},  {"moon", basis(11)}};
  const auto e = fixtures::make(rows);
  using L = SemBiasLabel;
  const SemBiasInstance straight{{SemBiasPair{"king", "queen", L::Definition}, SemBiasPair{"doctor", "nurse", L::Stereotype},
                                  SemBiasPair{"cat", "dog", L::None}, SemBiasPair{"table", "chair", L::None}}};
  const SemBiasInstance reversed{{SemBiasPair{"uncle", "aunt", L::Definition},
                                  SemBiasPair{"programmer", "homemaker", L::Stereotype},
                                  SemBiasPair{"sun", "moon", L::None}, SemBiasPair{"cat", "dog", L::None}}};
  const std::vector<SemBiasInstance> one{straight};
  CHECK(sembias(e, one).value("definition") == 1);
  const std::vector<SemBiasInstance> two{straight, reversed};
  const auto r = sembias(e, two);
  CHECK(r.value("definition") == 0.5);
  CHECK(r.value("stereotype") == 0.5);
  CHECK(r.value("none") == 0);
  const SemBiasInstance missing{{SemBiasPair{"zzz", "queen", L::Definition}, SemBiasPair{"doctor", "nurse", L::Stereotype},
                                 SemBiasPair{"cat", "dog", L::None}, SemBiasPair{"table", "chair", L::None}}};
  const std::vector<SemBiasInstance> partial{straight, missing};
  const auto p = sembias(e, partial);
  CHECK(p.value("definition") == 1);
  CHECK(p.metadata["skipped_oov"] == 1);
  CHECK(p.metadata["instances_used"] == 1);
  const std::vector<SemBiasInstance> none{missing};
  CHECK_THROWS_AS(sembias(e, none), DataError);
}

TEST_CASE("neighbours_analysis") {
  const auto ortho = fixtures::orthonormal({"a", "b", "c", "d"}, 5);
  const auto r = neighbours_analysis(ortho, fixtures::axis(5, 4), "a", 3);
  REQUIRE(r.neighbors.size() == 3);
  for (const auto &n : r.neighbors) {
    CHECK(n.cosine == 0);
    CHECK(n.cosine_to_direction == 0);
    REQUIRE(n.abs_indirect_bias);
    CHECK(*n.abs_indirect_bias == 0);
  }
  CHECK(neighbours_analysis(ortho, fixtures::axis(5, 4), "a", 1).neighbors.size() == 1);

  const auto e = proximity_fixture();
  const auto g = fixtures::axis(5, 0);
  const auto planted = neighbours_analysis(e, g, "q", 5);
  for (const auto &n : planted.neighbors) {
    CAPTURE(n.word);
    CHECK(n.cosine_to_direction == doctest::Approx(e.row(n.index)[0]).epsilon(1e-7));
    REQUIRE(n.abs_indirect_bias);
    const double expected = std::abs(beta_oracle(e.row("q"), e.row(n.index), g));
    CHECK(std::abs(*n.abs_indirect_bias - expected) <= 1e-7);
  }
  CHECK_THROWS_AS(neighbours_analysis(e, g, "zzz", 2), OovError);
}

TEST_CASE("metric registry and uniform compute") {
  const auto names = metric_names();
  CHECK(names.size() == 8);
  try {
    (void)make_metric("rnsb");
    FAIL("expected a usage error");
  } catch (const UsageError &err) {
    for (const auto &n : names)
      CHECK(std::string(err.what()).find(n) != std::string::npos);
  }
  const auto e = proximity_fixture();
  const auto g = fixtures::axis(5, 0);
  MetricParams p;
  p.k = 5;
  MetricInput in;
  in.words = {"q", "r"};
  CHECK(make_metric("direct-bias", p)->compute(e, g, in).to_json() == direct_bias(e, g, in.words).to_json());
  CHECK(make_metric("gipe", p)->compute(e, g, in).to_json() == gipe(e, g, in.words, 5).to_json());
  CHECK(make_metric("proximity-bias", p)->compute(e, g, in).to_json() == proximity_bias(e, g, "q", 5).to_json());
  CHECK(make_metric("pmn", p)->compute(e, g, in).to_json() == pmn(e, g, "q", 5).to_json());
  in.words = {"q", "g1"};
  CHECK(make_metric("indirect-bias", p)->compute(e, g, in).to_json() == indirect_bias(e, g, "q", "g1").to_json());
  CHECK_THROWS_AS(make_metric("weat", p)->compute(e, g, in), UsageError);
  in.words.clear();
  CHECK_THROWS_AS(make_metric("pmn", p)->compute(e, g, in), UsageError);
}

TEST_CASE("metrics are pure: repeated calls are byte-identical") {
  const auto e = fixtures::random_embedding(100, 10, 8);
  const auto g = direction_pair_diff(e, "w0", "w1");
  const std::vector<std::string> list{"w3", "w4", "w5"};
  CHECK(gipe(e, g, list, 10).to_json().dump() == gipe(e, g, list, 10).to_json().dump());
  CHECK(neighbours_analysis(e, g, "w3", 10).to_json().dump() == neighbours_analysis(e, g, "w3", 10).to_json().dump());
}
