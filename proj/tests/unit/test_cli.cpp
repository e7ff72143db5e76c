#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "cli.hpp"
#include "fairvec/embedding.hpp"
#include "fairvec/geometry.hpp"
#include "fairvec/lexicons.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace fairvec;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  json payload() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// The gendered fixture plus two planted occupation words.
fs::path write_toy(const fixtures::TempDir &dir, const std::string &name = "toy.txt", std::size_t d = 12) {
  const auto base = fixtures::gendered_embedding(30, d, 31);
  fixtures::Rows rows;
  for (std::size_t i = 0; i < base.size(); ++i)
    rows.emplace_back(base.word(i), std::vector<float>(base.row(i).begin(), base.row(i).end()));
  auto lean = [&](float sign, std::size_t axis) {
    std::vector<float> v(d, 0.0f);
    v[0] = 0.5f * sign;
    v[axis] = 0.85f;
    return v;
  };
  rows.emplace_back("nurse", lean(1, 3));
  rows.emplace_back("doctor", lean(-1, 4));
  const auto path = dir / name;
  save(normalize(fixtures::make(rows)), path, Format::Text);
  return path;
}

} // namespace

TEST_CASE("metric direct-bias on toy data") {
  fixtures::TempDir dir;
  const auto toy = write_toy(dir).string();
  const auto r = run({"metric", "direct-bias", "--emb", toy, "--words", "nurse,doctor,zzz"});
  REQUIRE(r.code == 0);
  const auto j = r.payload();
  CHECK(j["metric"] == "direct-bias");
  CHECK(j["values"]["direct_bias"].get<double>() > 0.1);
  CHECK(j["skipped"] == json::array({"zzz"}));
  CHECK(j["config"]["emb"] == toy);
  CHECK(r.err.find("zzz") == std::string::npos);
}

TEST_CASE("metric errors map to exit codes") {
  fixtures::TempDir dir;
  const auto toy = write_toy(dir).string();
  const auto unknown = run({"metric", "rnsb", "--emb", toy, "--words", "nurse"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("direct-bias") != std::string::npos);
  CHECK(unknown.err.find("weat") != std::string::npos);
  CHECK(unknown.out.empty());
  CHECK(run({"metric", "direct-bias", "--emb", toy, "--words", "zzz,yyy"}).code == 3);
  CHECK(run({"metric", "direct-bias", "--emb", (dir / "missing.txt").string(), "--words", "a"}).code == 3);
  CHECK(run({"metric"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"metric", "direct-bias", "--emb", toy, "--k", "lots"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("every metric runs from the command line") {
  fixtures::TempDir dir;
  const auto toy = write_toy(dir).string();
  for (const auto &[name, words] : std::vector<std::pair<std::string, std::string>>{
           {"direct-bias", "nurse,doctor"}, {"indirect-bias", "nurse,doctor"}, {"proximity-bias", "nurse"},
           {"gipe", "nurse,doctor"}, {"pmn", "nurse"}, {"neighbours", "nurse"}}) {
    CAPTURE(name);
    const auto r = run({"metric", name, "--emb", toy, "--words", words, "--k", "5"});
    CHECK(r.code == 0);
    CHECK(r.payload()["metric"] == name);
  }
  // The bundled WEAT and SemBias sets are mostly out of this toy vocabulary.
  fixtures::write_file(dir / "weat.json", R"({"name":"t","X":["n0","n1"],"Y":["n2","n3"],"A":["she","her"],"B":["he","his"]})");
  const auto weat = run({"metric", "weat", "--emb", toy, "--weat", (dir / "weat.json").string(), "--seed", "3"});
  CHECK(weat.code == 0);
  CHECK(weat.payload()["metadata"]["mode"] == "exhaustive");
  CHECK(run({"metric", "sembias", "--emb", toy}).code == 3);
}

TEST_CASE("config file precedence: flags > config > defaults") {
  fixtures::TempDir dir;
  const auto toy = write_toy(dir).string();
  fixtures::write_file(dir / "cfg.json", json{{"emb", toy}, {"k", 3}, {"words", {"nurse"}}}.dump());
  const auto cfg = (dir / "cfg.json").string();
  const auto from_config = run({"metric", "pmn", "--config", cfg});
  REQUIRE(from_config.code == 0);
  CHECK(from_config.payload()["config"]["k"] == 3);
  CHECK(from_config.payload()["config"]["theta"] == 0.05);
  CHECK(from_config.payload()["parameters"]["k"] == 3);
  const auto flagged = run({"metric", "pmn", "--config", cfg, "--k", "7"});
  REQUIRE(flagged.code == 0);
  CHECK(flagged.payload()["config"]["k"] == 7);
  CHECK(flagged.payload()["parameters"]["k"] == 7);
  fixtures::write_file(dir / "bad.json", R"({"kk": 3})");
  CHECK(run({"metric", "pmn", "--config", (dir / "bad.json").string()}).code == 2);
  fixtures::write_file(dir / "typed.json", R"({"k": "three"})");
  CHECK(run({"metric", "pmn", "--config", (dir / "typed.json").string(), "--emb", toy}).code == 2);
}

TEST_CASE("debias hard writes an embedding that passes the neutralization invariant") {
  fixtures::TempDir dir;
  const auto toy = write_toy(dir).string();
  const auto out = (dir / "toy.hard.txt").string();
  const auto r = run({"debias", "hard", "--emb", toy, "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.payload()["output"] == out);
  CHECK(r.payload()["summary"]["processed"].get<std::size_t>() > 0);
  const auto original = load(toy);
  const auto debiased = load(out);
  CHECK(debiased.vocab().words() == original.vocab().words());
  const auto pairs = bundled("definitional-pairs").pairs();
  const auto g = direction_pca(normalize(original), pairs);
  for (const std::string w : {"nurse", "doctor", "n0", "n29"})
    CHECK(std::abs(cosine(debiased.row(w), g.view())) <= 1e-6);
}

TEST_CASE("debias: missing output path and determinism") {
  fixtures::TempDir dir;
  const auto toy = write_toy(dir).string();
  CHECK(run({"debias", "hard", "--emb", toy}).code == 2);
  CHECK(run({"debias", "magic", "--emb", toy, "--out", (dir / "x.txt").string()}).code == 2);
  const auto a = (dir / "a.txt").string(), b = (dir / "b.txt").string(), c = (dir / "c.txt").string();
  const std::vector<std::string> common{"--emb", toy, "--seed", "7", "--k", "8", "--words", "nurse,doctor,n0,n1,n2"};
  auto with = [&](std::string out, std::string threads) {
    std::vector<std::string> args{"debias", "ran"};
    args.insert(args.end(), common.begin(), common.end());
    args.insert(args.end(), {"--out", out, "--threads", threads});
    return run(args);
  };
  REQUIRE(with(a, "1").code == 0);
  REQUIRE(with(b, "1").code == 0);
  REQUIRE(with(c, "4").code == 0);
  CHECK(fixtures::read_file(a) == fixtures::read_file(b));
  CHECK(fixtures::read_file(a) == fixtures::read_file(c));
  const auto hsr = run({"debias", "hsr", "--emb", toy, "--out", (dir / "h.txt").string(), "--alpha", "0.5"});
  CHECK(hsr.code == 0);
  CHECK(hsr.payload()["summary"]["method"] == "hsr");
}

TEST_CASE("report word and global") {
  fixtures::TempDir dir;
  const auto toy = write_toy(dir).string();
  const auto out_dir = (dir / "reports").string();
  const auto word = run({"report", "word", "nurse", "--emb", toy, "--out-dir", out_dir, "--k", "6"});
  REQUIRE(word.code == 0);
  CHECK(fs::exists(dir / "reports" / "nurse-report.txt"));
  CHECK(fs::exists(dir / "reports" / "nurse-neighbors.svg"));
  CHECK(fs::exists(dir / "reports" / "nurse-cloud.svg"));
  CHECK(word.payload()["attachments"].size() == 3);

  const auto global = run({"report", "global", "-n", "10", "--emb", toy, "--out-dir", out_dir});
  REQUIRE(global.code == 0);
  const auto j = global.payload();
  std::size_t ranked = 0;
  for (const auto &s : j["sections"])
    if (s["title"] == "most biased" || s["title"] == "least biased") {
      CHECK(s["rows"].size() == 10);
      ++ranked;
    }
  CHECK(ranked == 2);
  CHECK(fs::exists(dir / "reports" / "global-report.txt"));

  const auto text = run({"report", "global", "-n", "3", "--emb", toy, "--out-dir", out_dir, "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("most biased") != std::string::npos);
  CHECK(run({"report", "word", "zzz", "--emb", toy, "--out-dir", out_dir}).code == 3);
  CHECK(run({"report", "word", "--emb", toy, "--out-dir", out_dir}).code == 2);
  CHECK(run({"report", "global", "-n", "0", "--emb", toy, "--out-dir", out_dir}).code == 2);
}

TEST_CASE("compare") {
  fixtures::TempDir dir;
  const auto toy = write_toy(dir).string();
  const auto hard = (dir / "hard.txt").string();
  REQUIRE(run({"debias", "hard", "--emb", toy, "--out", hard}).code == 0);
  const auto r = run({"compare", "--emb", toy, "--against", hard, "--metrics", "direct-bias"});
  REQUIRE(r.code == 0);
  const auto rows = r.payload()["comparison"];
  REQUIRE(rows.size() == 1);
  CHECK(rows[0]["delta"].get<double>() < 0);

  const auto same = run({"compare", "--emb", toy, "--against", toy, "--metrics", "direct-bias,gipe,pmn", "--words",
                         "nurse,doctor,n3", "--k", "5"});
  REQUIRE(same.code == 0);
  for (const auto &row : same.payload()["comparison"])
    CHECK(row["delta"] == 0.0);

  const auto narrow = write_toy(dir, "narrow.txt", 10).string();
  CHECK(run({"compare", "--emb", toy, "--against", narrow}).code == 3);
  CHECK(run({"compare", "--emb", toy}).code == 2);
  const auto text = run({"compare", "--emb", toy, "--against", hard, "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("delta") != std::string::npos);
}

TEST_CASE("viz: one run per emitter") {
  fixtures::TempDir dir;
  const auto toy = write_toy(dir).string();
  const std::vector<std::vector<std::string>> cases{
      {"viz", "scatter", "--word", "nurse", "--k", "5"},
      {"viz", "bar", "--words", "nurse,doctor,n0"},
      {"viz", "pca", "--words", "nurse,doctor,n0,n1"},
      {"viz", "cloud", "--word", "nurse", "--k", "5"}};
  for (auto args : cases) {
    const auto out = (dir / (args[1] + ".svg")).string();
    args.insert(args.end(), {"--emb", toy, "--out", out});
    const auto r = run(args);
    CAPTURE(args[1]);
    REQUIRE(r.code == 0);
    CHECK(r.payload()["output"] == out);
    CHECK(oracles::xml_problem(fixtures::read_file(out)) == "");
  }
  CHECK(run({"viz", "scatter", "--emb", toy, "--word", "nurse"}).code == 2);
  CHECK(run({"viz", "pie", "--emb", toy, "--out", (dir / "p.svg").string()}).code == 2);
  CHECK(run({"viz", "pca", "--emb", toy, "--words", "nurse,zzz", "--out", (dir / "p.svg").string()}).code == 3);
}
