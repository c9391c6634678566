#include <doctest.h>

#include "support.hpp"

using namespace smirnov;
using nlohmann::json;

TEST_CASE("every shipped config parses") {
  for (const auto& name : test::kBuiltins) {
    INFO(name);
    const RunConfig c = load_run_config(test::config_path(name));
    CHECK_FALSE(c.rate.n_list.empty());
    CHECK(c.rate.seed == 1);
    CHECK(c.rate.domain.name() == name);
  }
}

TEST_CASE("square config fields") {
  const RunConfig c = load_run_config(test::config_path("square"));
  CHECK(c.rate.p == 2.0);
  CHECK(c.rate.n_list == std::vector<Index>{8, 16, 32, 64, 96});
  CHECK(c.rate.reference.mode == ReferenceMode::Self);
  CHECK(c.rate.reference.n_ref == 256);
  CHECK(c.rate.reference.quadrature.panels == 64);
  CHECK(c.rate.quadrature.points == 16);
  CHECK(c.rate.roots.leja_m == 128);
  CHECK(c.map_n == 16);
}

TEST_CASE("unknown keys are rejected at every level") {
  json doc = test::config_json("disk");
  doc["extra"] = 1;
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);
  doc = test::config_json("disk");
  doc["roots"]["kmax"] = 3;
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);
  doc = test::config_json("disk");
  doc["reference"] = {{"mode", "exact"}};
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);
  doc = test::config_json("disk");
  doc.erase("domain");
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);
  doc = test::config_json("disk");
  doc["n_list"] = {1.5, 2};
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);
  doc = test::config_json("disk");
  doc["p"] = "two";
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);
}

TEST_CASE("overrides") {
  const json base = test::config_json("square");
  const json a = apply_overrides(base, {"p=1.5", "n_list=8,16", "reference.mode=oracle", "roots.k_max=2"});
  CHECK(a["p"] == 1.5);
  CHECK(a["n_list"] == json::array({8, 16}));
  CHECK(a["reference"]["mode"] == "oracle");
  CHECK(a["roots"]["k_max"] == 2);
  CHECK(apply_overrides(base, {"n_list=[4]"})["n_list"] == json::array({4}));
  CHECK(apply_overrides(base, {"map.n=3"})["map"]["n"] == 3);
  CHECK_THROWS_AS(apply_overrides(base, {"p"}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(base, {"p.x=1"}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(base, {"a..b=1"}), ConfigError);

  const RunConfig c = load_run_config(test::config_path("square"), {"n_list=8,16", "p=1"});
  CHECK(c.rate.p == 1.0);
  CHECK(c.rate.n_list.size() == 2);
  CHECK(c.document["n_list"] == json::array({8, 16}));
}

TEST_CASE("config-level validation errors") {
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
  CHECK_THROWS_AS(load_run_config(test::config_path("square"), {"n_list=16,8"}), ConfigError);
  CHECK_THROWS_AS(load_run_config(test::config_path("square"), {"reference.n_ref=64"}), ConfigError);
  CHECK_THROWS_AS(load_run_config(test::config_path("square"), {"roots.leja_m=4"}), ConfigError);
  CHECK_THROWS_AS(load_run_config(test::config_path("square"), {"map.n=0"}), ConfigError);
  CHECK_THROWS_AS(load_run_config(test::config_path("disk"), {"p=0.9"}), ConfigError);
}
