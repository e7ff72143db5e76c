#include "doctest.h"

#include <cmath>
#include <regex>

#include "fairvec/error.hpp"
#include "fairvec/geometry.hpp"
#include "fairvec/numerics.hpp"
#include "fairvec/viz.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace fairvec;
using fixtures::Rows;

namespace {

struct Point {
  std::string label;
  double x, y;
};

// Tooltips of plotted points: "label (x=..., y=...)".
std::vector<Point> points(const std::string &svg) {
  static const std::regex re(R"(^(.*) \(x=(-?[0-9.]+), y=(-?[0-9.]+)\)$)");
  std::vector<Point> out;
  for (const auto &t : oracles::titles(svg)) {
    std::smatch m;
    if (std::regex_match(t, m, re))
      out.push_back({m[1], std::stod(m[2]), std::stod(m[3])});
  }
  return out;
}

void check_svg(const std::string &doc) {
  CHECK(oracles::xml_problem(doc) == "");
  CHECK(oracles::root_element(doc) == "svg");
  CHECK(oracles::root_attribute(doc, "version") == "1.1");
  CHECK(oracles::root_attribute(doc, "xmlns") == "http://www.w3.org/2000/svg");
}

std::vector<float> unit(std::vector<double> v) {
  double n = 0;
  for (double x : v)
    n += x * x;
  std::vector<float> out;
  for (double x : v)
    out.push_back(static_cast<float>(x / std::sqrt(n)));
  return out;
}

Embedding planted() {
  return fixtures::make(Rows{{"q", unit({0.1, 1, 0, 0})},
                             {"a", unit({0.6, 0.75, 0, 0.1})},
                             {"b", unit({-0.6, 0.7, 0.1, 0})},
                             {"c", unit({0, 0.9, 0.3, 0})},
                             {"d", unit({0.2, 0.3, 0.9, 0.1})},
                             {"far", unit({0, 0, 0, 1})}});
}

} // namespace

TEST_CASE("the oracle rejects malformed XML") {
  CHECK(oracles::xml_problem("<a><b></a>") != "");
  CHECK(oracles::xml_problem("<a x=1/>") != "");
  CHECK(oracles::xml_problem("<a>&bogus</a>") != "");
  CHECK(oracles::xml_problem("<?xml version=\"1.0\"?>\n<a x=\"1\"><!-- c --><b/>&amp;</a>") == "");
}

TEST_CASE("neighbor_scatter: orthonormal toy puts every point on x = 0") {
  fixtures::TempDir dir;
  const auto e = fixtures::orthonormal({"a", "b", "c", "d", "e"}, 6);
  const auto path = neighbor_scatter(e, fixtures::axis(6, 5), "a", 4, dir / "n.svg");
  const auto doc = fixtures::read_file(path);
  check_svg(doc);
  const auto pts = points(doc);
  REQUIRE(pts.size() == 4);
  for (const auto &p : pts) {
    CHECK(p.x == 0);
    CHECK(p.y == 0);
  }
}

TEST_CASE("neighbor_scatter: coordinates match the metric values to 4 decimals") {
  fixtures::TempDir dir;
  const auto e = planted();
  const auto g = fixtures::axis(4, 0);
  const auto doc = fixtures::read_file(neighbor_scatter(e, g, "q", 4, dir / "n.svg"));
  check_svg(doc);
  const auto pts = points(doc);
  const auto list = knn(e, "q", 4);
  REQUIRE(pts.size() == list.entries.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CAPTURE(pts[i].label);
    CHECK(pts[i].label == list.entries[i].word);
    CHECK(std::abs(pts[i].x - cosine_to_direction(e, list.entries[i].index, g)) <= 5e-5);
    CHECK(std::abs(pts[i].y - list.entries[i].cosine) <= 5e-5);
  }
  CHECK(fixtures::read_file(neighbor_scatter(e, g, "q", 4, dir / "m.svg")) == doc);
  CHECK_THROWS_AS(neighbor_scatter(e, g, "zzz", 4, dir / "x.svg"), OovError);
}

TEST_CASE("bias_bar") {
  fixtures::TempDir dir;
  const auto e = fixtures::make(Rows{{"f", {1, 0}}, {"m", {-1, 0}}, {"x", unit({0.6, 0.8})}, {"y", unit({-0.6, 0.8})}});
  const auto g = fixtures::axis(2, 0);
  const std::vector<std::string> words{"y", "f", "x", "m", "zzz"};
  const auto doc = fixtures::read_file(bias_bar(e, g, words, dir / "b.svg"));
  check_svg(doc);
  const auto t = oracles::titles(doc);
  // Document title first, then bars in descending order.
  REQUIRE(t.size() == 5);
  CHECK(t[1] == "f (value=1.0000)");
  CHECK(t[2] == "x (value=0.6000)");
  CHECK(t[3] == "y (value=-0.6000)");
  CHECK(t[4] == "m (value=-1.0000)");
  // Mirrored words get bars of the same width.
  static const std::regex width(R"re(<rect x="[-0-9.]+" y="[-0-9.]+" width="([0-9.]+)")re");
  std::vector<std::string> widths;
  for (std::sregex_iterator it(doc.begin(), doc.end(), width), end; it != end; ++it)
    widths.push_back((*it)[1]);
  REQUIRE(widths.size() >= 4);
  const std::size_t first = widths.size() - 4;
  CHECK(widths[first] == widths[first + 3]);
  CHECK(widths[first + 1] == widths[first + 2]);
  CHECK(fixtures::read_file(bias_bar(e, g, words, dir / "c.svg")) == doc);
  const std::vector<std::string> none{"zzz"};
  CHECK_THROWS_AS(bias_bar(e, g, none, dir / "d.svg"), DataError);
}

TEST_CASE("pca_scatter") {
  fixtures::TempDir dir;
  const auto e = planted();
  const auto g = fixtures::axis(4, 0);
  const std::vector<std::string> words{"q", "a", "b", "d"};
  const auto doc = fixtures::read_file(pca_scatter(e, words, dir / "p.svg", g));
  check_svg(doc);
  const auto pts = points(doc);
  REQUIRE(pts.size() == 4);
  Matrix data(4, 4);
  std::vector<double> mean(4, 0);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t j = 0; j < 4; ++j) {
      data(r, j) = e.row(words[r])[j];
      mean[j] += data(r, j) / 4;
    }
  const auto basis = pca(data, 2);
  for (std::size_t r = 0; r < 4; ++r) {
    double px = 0, py = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      px += (data(r, j) - mean[j]) * basis(j, 0);
      py += (data(r, j) - mean[j]) * basis(j, 1);
    }
    CHECK(pts[r].label == words[r]);
    CHECK(std::abs(pts[r].x - px) <= 5e-5);
    CHECK(std::abs(pts[r].y - py) <= 5e-5);
  }
  const auto line = fixtures::make(Rows{{"a", {1, 0, 0}}, {"b", {-1, 0, 0}}, {"c", {1, 0, 0}}});
  const std::vector<std::string> abc{"a", "b", "c"};
  CHECK_THROWS_AS(pca_scatter(line, abc, dir / "l.svg", fixtures::axis(3, 0)), DegenerateError);
  const std::vector<std::string> two{"q", "a"};
  CHECK_THROWS_AS(pca_scatter(e, two, dir / "t.svg", g), DataError);
}

TEST_CASE("word cloud layout") {
  SUBCASE("single word is centred") {
    const auto placed = layout_cloud({{"solo", 0, 0, 1.0, 0}}, 800, 600);
    REQUIRE(placed.size() == 1);
    CHECK(placed[0].cx == 400);
    CHECK(placed[0].cy == 300);
    CHECK(placed[0].font_size == 48);
  }
  SUBCASE("equal weights keep input order") {
    const auto placed = layout_cloud({{"c", 0, 0, 1, 0}, {"a", 0, 0, 1, 0}, {"b", 0, 0, 1, 0}}, 800, 600);
    CHECK(placed[0].word == "c");
    CHECK(placed[1].word == "a");
    CHECK(placed[2].word == "b");
  }
  SUBCASE("all-zero weights use the minimum size") {
    for (const auto &p : layout_cloud({{"x", 0, 0, 0, 0}, {"y", 0, 0, 0, 0}}, 800, 600))
      CHECK(p.font_size == 10);
  }
  SUBCASE("sizes are linear in weight and boxes never overlap") {
    std::vector<PlotItem> items;
    for (int i = 0; i < 40; ++i)
      items.push_back({"word" + std::to_string(i), 0, 0, (i % 7) / 6.0, 0});
    const auto placed = layout_cloud(items, 800, 600);
    REQUIRE(placed.size() == items.size());
    for (std::size_t i = 0; i < placed.size(); ++i) {
      const auto idx = std::stoul(placed[i].word.substr(4));
      CHECK(placed[i].font_size == doctest::Approx(10 + 38 * items[idx].weight));
      for (std::size_t j = 0; j < i; ++j) {
        const bool disjoint = std::abs(placed[i].cx - placed[j].cx) * 2 >= placed[i].box_width + placed[j].box_width ||
                              std::abs(placed[i].cy - placed[j].cy) * 2 >= placed[i].box_height + placed[j].box_height;
        CHECK(disjoint);
      }
    }
  }
  CHECK_THROWS_AS(layout_cloud({{"x", 0, 0, -1, 0}}, 800, 600), PreconditionError);
}

TEST_CASE("word_cloud files") {
  fixtures::TempDir dir;
  const std::vector<std::pair<std::string, double>> items{{"nurse", 0.9}, {"R&D", 0.5}, {"<tag>", 0.1}, {"café", 0}};
  const auto doc = fixtures::read_file(word_cloud(items, dir / "w.svg"));
  check_svg(doc);
  CHECK(oracles::count_elements(doc, "text") == 4);
  CHECK(doc.find("R&amp;D") != std::string::npos);
  CHECK(fixtures::read_file(word_cloud(items, dir / "w2.svg")) == doc);
  CHECK_THROWS_AS(word_cloud({}, dir / "e.svg"), PreconditionError);
}

TEST_CASE("PlotSpec validation and I/O errors") {
  PlotSpec spec;
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
  spec.items.push_back({"x", std::nan(""), 0, 0, 0});
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
  spec.items[0].x = 0;
  spec.width = 0;
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
  const auto e = fixtures::orthonormal({"a", "b"}, 2);
  CHECK_THROWS_AS(neighbor_scatter(e, fixtures::axis(2, 0), "a", 1, "/nonexistent-dir/x/y.svg"), IoError);
}
