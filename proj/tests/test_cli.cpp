#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "cfex/cli.hpp"
#include "cfex/synthetic.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using cfex::testing::read_file;
using cfex::testing::scratch_dir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string log;
};

Run cfex_run(std::vector<std::string> args) {
  std::ostringstream out, log;
  int code = cfex::cli::run(args, out, log);
  return {code, out.str(), log.str()};
}

json strip_timestamp(json j) {
  j.erase("timestamp");
  return j;
}

}  // namespace

TEST_CASE("cli: explain a planted instance") {
  auto dir = scratch_dir("cli_explain");
  auto inst = cfex::generate_instance(1, 50, 1);
  cfex::write_instance(dir, "inst", inst);
  auto out = dir / "out.json";
  auto r = cfex_run({"explain", (dir / "inst.diff").string(), "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  auto j = json::parse(read_file(out));
  REQUIRE(j["explanations"]["CFEX"].size() >= 1);
  CHECK_FALSE(j["explanations"].contains("SEDC"));
  auto top = j["explanations"]["CFEX"][0];
  CHECK(top["rank"] == 1);
  CHECK(top["substitutions"][0]["original"] == inst.triggers[0]);
  CHECK(j["original_prediction"]["label"] == true);
  auto manifest = json::parse(read_file(dir / "out.manifest.json"));
  CHECK(manifest["config"]["max_size"] == 5);
  CHECK(manifest["config"]["mlm_k"] == 10);
  CHECK(manifest["classifier"].get<std::string>().rfind("builtin:trigger", 0) == 0);
  CHECK(manifest["timings"].contains("CFEX_ms"));
}

TEST_CASE("cli: both methods in one file") {
  auto dir = scratch_dir("cli_both");
  cfex::write_instance(dir, "inst", cfex::generate_instance(2, 50, 1));
  auto out = dir / "both.json";
  auto r = cfex_run({"explain", (dir / "inst.diff").string(), "-o", out.string(), "--method", "both"});
  REQUIRE(r.code == 0);
  auto j = json::parse(read_file(out));
  CHECK(j["explanations"]["CFEX"].is_array());
  CHECK(j["explanations"]["SEDC"].is_array());
  CHECK(j["explanations"]["SEDC"][0]["substitutions"][0]["replacement"].is_null());
  CHECK(j["explanations"]["CFEX"].size() <= 5);
}

TEST_CASE("cli: reruns are identical apart from the timestamp") {
  auto dir = scratch_dir("cli_determinism");
  cfex::write_instance(dir, "inst", cfex::generate_instance(5, 60, 2));
  std::vector<std::string> base{"explain", (dir / "inst.diff").string(), "--method", "both", "-o"};
  auto a = base, b = base;
  a.push_back((dir / "a.json").string());
  b.push_back((dir / "b.json").string());
  REQUIRE(cfex_run(a).code == 0);
  REQUIRE(cfex_run(b).code == 0);
  CHECK(strip_timestamp(json::parse(read_file(dir / "a.json"))).dump() ==
        strip_timestamp(json::parse(read_file(dir / "b.json"))).dump());
}

TEST_CASE("cli: explicit adapters and remote process adapters") {
  auto dir = scratch_dir("cli_proc");
  auto diff = cfex::testing::data_dir() / "listing1.diff";
  auto corpus = cfex::testing::data_dir() / "listing_corpus.txt";
  {
    std::ofstream t(dir / "triggers.txt");
    t << "# culprit\ngenHandle\n";
  }
  auto local = cfex_run({"explain", diff.string(), "-o", (dir / "local.json").string(), "--triggers",
                         (dir / "triggers.txt").string(), "--fill-corpus", corpus.string()});
  REQUIRE(local.code == 0);
  std::string server = std::string("proc:") + CFEX_FAKE_SERVER + " --triggers genHandle --corpus " + corpus.string();
  auto remote = cfex_run({"explain", diff.string(), "-o", (dir / "remote.json").string(), "--classifier", server,
                          "--filler", server});
  REQUIRE(remote.code == 0);
  auto lj = json::parse(read_file(dir / "local.json"));
  auto rj = json::parse(read_file(dir / "remote.json"));
  CHECK(lj["explanations"] == rj["explanations"]);
  CHECK(lj["explanations"]["CFEX"][0]["substitutions"][0]["replacement"] == "genSimple");
}

TEST_CASE("cli: error exits") {
  auto dir = scratch_dir("cli_errors");
  SUBCASE("unreachable tcp adapter") {
    cfex::write_instance(dir, "inst", cfex::generate_instance(1, 50, 1));
    auto out = dir / "never.json";
    auto r = cfex_run({"explain", (dir / "inst.diff").string(), "-o", out.string(), "--classifier",
                       "tcp:127.0.0.1:1"});
    CHECK(r.code == 3);
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(fs::exists(dir / "never.manifest.json"));
  }
  SUBCASE("empty diff") {
    std::ofstream(dir / "empty.diff").close();
    std::ofstream(dir / "t.txt") << "x\n";
    auto r = cfex_run({"explain", (dir / "empty.diff").string(), "-o", (dir / "o.json").string(), "--triggers",
                       (dir / "t.txt").string(), "--fill-corpus", (dir / "t.txt").string()});
    CHECK(r.code == 4);
  }
  SUBCASE("missing diff") {
    CHECK(cfex_run({"explain", (dir / "nope.diff").string(), "-o", (dir / "o.json").string()}).code == 2);
  }
  SUBCASE("builtin adapter without data") {
    std::ofstream(dir / "plain.diff") << "+x = 1\n";
    CHECK(cfex_run({"explain", (dir / "plain.diff").string(), "-o", (dir / "o.json").string()}).code == 2);
  }
  SUBCASE("bad flags") {
    CHECK(cfex_run({"explain"}).code == 2);
    CHECK(cfex_run({"explain", "x.diff", "-o", "y.json", "--max-size", "0"}).code == 2);
    CHECK(cfex_run({"frobnicate"}).code == 2);
  }
  SUBCASE("remote server answering garbage") {
    cfex::write_instance(dir, "inst", cfex::generate_instance(1, 50, 1));
    auto r = cfex_run({"explain", (dir / "inst.diff").string(), "-o", (dir / "g.json").string(), "--classifier",
                       std::string("proc:") + CFEX_FAKE_SERVER + " --mode garbage"});
    CHECK(r.code == 3);
  }
}

TEST_CASE("cli: config file, flags win") {
  auto dir = scratch_dir("cli_config");
  cfex::write_instance(dir, "inst", cfex::generate_instance(1, 50, 1));
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "[explain]\nmlm-k = 3\nmax-size = 4\n";
  }
  auto r = cfex_run({"--config", (dir / "run.toml").string(), "explain", (dir / "inst.diff").string(), "-o",
                     (dir / "o.json").string(), "--max-size", "2"});
  REQUIRE(r.code == 0);
  auto m = json::parse(read_file(dir / "o.manifest.json"));
  CHECK(m["config"]["mlm_k"] == 3);
  CHECK(m["config"]["max_size"] == 2);
}

TEST_CASE("cli: gen-corpus and evaluate") {
  auto dir = scratch_dir("cli_eval");
  auto corpus = dir / "corpus";
  REQUIRE(cfex_run({"gen-corpus", "-o", corpus.string(), "--count", "3", "--seed", "7", "--cycle-triggers"}).code ==
          0);
  CHECK(fs::exists(corpus / "instance_002.diff"));
  CHECK(fs::exists(corpus / "rationales" / "instance_002.json"));
  auto r = cfex_run({"evaluate", "--corpus", corpus.string(), "--rationales", (corpus / "rationales").string(),
                     "--out-dir", (dir / "report").string()});
  REQUIRE(r.code == 0);
  auto md = read_file(dir / "report" / "report.md");
  CHECK(md.find("CFEX wins-or-ties 3/3") != std::string::npos);
  auto j = json::parse(read_file(dir / "report" / "report.json"));
  CHECK(j["summary"]["CFEX"]["wins_or_ties"] == 3);
  CHECK(j["rows"].size() == 6);
}

TEST_CASE("cli: evaluate skips bad rationales") {
  auto dir = scratch_dir("cli_eval_skip");
  auto corpus = dir / "corpus";
  REQUIRE(cfex_run({"gen-corpus", "-o", corpus.string(), "--count", "3"}).code == 0);
  std::ofstream(corpus / "rationales" / "instance_001.json")
      << R"({"diff_id":"instance_001","attributed_indices":[0, 100000]})";
  fs::remove(corpus / "rationales" / "instance_002.json");
  auto r = cfex_run({"evaluate", "--corpus", corpus.string(), "--rationales", (corpus / "rationales").string(),
                     "--out-dir", (dir / "report").string()});
  REQUIRE(r.code == 0);
  CHECK(r.log.find("instance_001") != std::string::npos);
  CHECK(r.log.find("no rationale for instance_002") != std::string::npos);
  auto j = json::parse(read_file(dir / "report" / "report.json"));
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["diff_id"] == "instance_000");
}

TEST_CASE("cli: evaluate on an empty corpus") {
  auto dir = scratch_dir("cli_eval_empty");
  fs::create_directories(dir / "corpus");
  auto r = cfex_run({"evaluate", "--corpus", (dir / "corpus").string(), "--rationales", (dir / "corpus").string(),
                     "--out-dir", (dir / "report").string()});
  CHECK(r.code == 2);
}

TEST_CASE("cli: oracle") {
  auto dir = scratch_dir("cli_oracle");
  cfex::write_instance(dir, "two", cfex::generate_instance(11, 50, 2));
  auto r = cfex_run({"oracle", (dir / "two.diff").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("MATCH") != std::string::npos);

  auto capped = cfex_run({"oracle", (dir / "two.diff").string(), "--max-size", "1"});
  CHECK(capped.code == 5);
  CHECK(capped.out.find("only-in-oracle") != std::string::npos);

  cfex::write_instance(dir, "big", cfex::generate_instance(11, 250, 1));
  CHECK(cfex_run({"oracle", (dir / "big.diff").string()}).code == 2);
}
