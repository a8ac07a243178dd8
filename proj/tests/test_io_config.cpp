#include <doctest.h>

#include <filesystem>
#include <string>

#include "wwb/checks.hpp"
#include "wwb/config.hpp"
#include "wwb/error.hpp"
#include "wwb/io.hpp"

using namespace wwb;

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("csv columns use 17 significant digits") {
  const std::string csv = columns_csv({"x", "y"}, {{0.1, 1.0}, {1.0 / 3.0, 2.0}});
  CHECK(csv == "x,y\n0.10000000000000001,0.33333333333333331\n1,2\n");
  CHECK_THROWS_AS(columns_csv({"x"}, {{1.0}, {2.0}}), ParameterError);
  CHECK_THROWS_AS(columns_csv({"x", "y"}, {{1.0}, {2.0, 3.0}}), ParameterError);
}

TEST_CASE("json numbers round trip") {
  const json j{{"v", 0.1}, {"w", 1.0 / 3.0}};
  const json back = json::parse(dump(j));
  CHECK(back["v"].get<double>() == 0.1);
  CHECK(back["w"].get<double>() == 1.0 / 3.0);
}

TEST_CASE("config parses typed entries and sections") {
  const Config c = Config::parse(
      "# comment\n"
      "name : str = demo\n"
      "[model]\n"
      "alpha : real = 0.5   # trailing\n"
      "b : int = 3\n"
      "[run]\n"
      "quiet : bool = true\n"
      "checks : list = hl, tn ,phi\n");
  CHECK(c.get_str("name", "") == "demo");
  CHECK(c.get_real("model.alpha", 0.0) == 0.5);
  CHECK(c.get_int("model.b", 0) == 3);
  CHECK(c.get_bool("run.quiet", false));
  CHECK(c.get_list("run.checks") == std::vector<std::string>{"hl", "tn", "phi"});
  CHECK(c.get_int("model.missing", 7) == 7);
  CHECK_THROWS_AS(c.get_int("model.alpha", 0), ParameterError);

  const Config again = Config::parse(c.to_text());
  CHECK(again.to_text() == c.to_text());
  CHECK(again.to_json() == c.to_json());
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(Config::parse("x = 1\n"), ParameterError);
  CHECK_THROWS_AS(Config::parse("x : float = 1\n"), ParameterError);
  CHECK_THROWS_AS(Config::parse("x : int = 1.5\n"), ParameterError);
  CHECK_THROWS_AS(Config::parse("x : bool = yes\n"), ParameterError);
  CHECK_THROWS_AS(Config::parse("x : int = 1\nx : int = 2\n"), ParameterError);
  CHECK_THROWS_AS(Config::parse("[a.b]\n"), ParameterError);
  CHECK_THROWS_AS(Config::parse("[open\n"), ParameterError);
}

TEST_CASE("experiment config round trip and validation") {
  ExperimentConfig x;
  x.alpha = 0.25;
  x.b = 3;
  x.hurst = 0.4;
  x.level = 8;
  x.seed = 99;
  x.checks = {"hl", "isometry"};
  x.tolerances["isometry.rel_tol"] = 1e-10;
  const ExperimentConfig y = ExperimentConfig::from(Config::parse(x.to_config().to_text()));
  CHECK(y.alpha == x.alpha);
  CHECK(y.b == x.b);
  CHECK(y.hurst == x.hurst);
  CHECK(y.level == x.level);
  CHECK(y.seed == x.seed);
  CHECK(y.checks == x.checks);
  CHECK(y.tolerances == x.tolerances);

  CHECK_THROWS_AS(ExperimentConfig::from(Config::parse("[model]\nbeta : real = 1\n")), ParameterError);
  CHECK_THROWS_AS(ExperimentConfig::from(Config::parse("[model]\nalpha : real = 1.5\n")), ParameterError);
  CHECK_THROWS_AS(ExperimentConfig::from(Config::parse("[run]\nn_paths : int = 0\n")), ParameterError);
}

TEST_CASE("checks are deterministic and the manifest hashes what was written") {
  CheckOptions o;
  const CheckResult a = run_check("hl", o);
  const CheckResult b = run_check("hl", o);
  REQUIRE(a.artifacts.size() == b.artifacts.size());
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) CHECK(a.artifacts[i].content == b.artifacts[i].content);
  CHECK_THROWS_AS(run_check("no-such-check", o), ParameterError);

  const auto dir = std::filesystem::temp_directory_path() / "wwb_manifest_test";
  std::filesystem::remove_all(dir);
  const auto files = write_artifacts(dir, {a});
  REQUIRE(!files.empty());
  const json m = build_manifest(json{{"k", 1}}, {a}, dir, files, 0.5);
  CHECK(m["files"].size() == files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    CHECK(m["files"][i]["sha256"] == sha256_hex(read_text(dir / files[i])));
  }
  CHECK(m["checks"][0]["passed"] == a.passed);
  std::filesystem::remove_all(dir);
}
