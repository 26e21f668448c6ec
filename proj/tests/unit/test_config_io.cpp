#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lanedac/config.hpp"
#include "lanedac/error.hpp"
#include "lanedac/json_io.hpp"
#include "lanedac/rng.hpp"
#include "lanedac/synthgen.hpp"
#include "support/oracles.hpp"

using namespace lanedac;

TEST_CASE("empty config gives the defaults") {
  const auto c = config_from_json(Json::object());
  CHECK(c.objective == Objective::kDac);
  CHECK(c.toy.hypotheses == 8);
  CHECK(c.lanes.cells.size() == 4);
  CHECK_NOTHROW(validate(c));
  CHECK(config_hash(c) == config_hash(ExperimentConfig{}));
  CHECK(config_hash(c).size() == 16);
}

TEST_CASE("unknown keys and wrong types are rejected with their path") {
  CHECK_THROWS_WITH_AS(config_from_json(Json::parse(R"({"lanes": {"lamda1": 2}})")),
                       doctest::Contains("lanes.lamda1"), Error);
  CHECK_THROWS_WITH_AS(
      config_from_json(Json::parse(R"({"lanes": {"scenario": {"noise": 1}}})")),
      doctest::Contains("lanes.scenario.noise"), Error);
  CHECK_THROWS_WITH_AS(config_from_json(Json::parse(R"({"toy": {"steps": "many"}})")),
                       doctest::Contains("toy.steps"), Error);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"objective": "mcl"})")), Error);
  CHECK_THROWS_AS(config_from_json(Json::parse("[1, 2]")), Error);
}

TEST_CASE("config round trip and hash sensitivity") {
  auto c = config_from_json(Json::parse(
      R"({"objective": "ewta", "seeds": [3, 4], "lanes": {"lambda1": 0.25, "cells": ["nt"]},
          "cpi": {"hidden": [16], "scene": {"crossing": false}}})"));
  CHECK(c.objective == Objective::kEwta);
  CHECK(c.lanes.lambda1 == 0.25);
  CHECK_FALSE(c.cpi.scene.crossing);
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_to_json(back) == config_to_json(c));
  c.lanes.lambda2 = 0.5;
  CHECK(config_hash(back) != config_hash(c));
}

TEST_CASE("validation") {
  ExperimentConfig c;
  c.lanes.m_sel = 7;
  CHECK_THROWS_AS(validate(c), Error);
  c = ExperimentConfig{};
  c.eps = 1.5;
  CHECK_THROWS_AS(validate(c), Error);
  c = ExperimentConfig{};
  c.lanes.cells = {"polar"};
  CHECK_THROWS_AS(validate(c), Error);
  c = ExperimentConfig{};
  c.seeds.clear();
  CHECK_THROWS_AS(validate(c), Error);
  c = ExperimentConfig{};
  CHECK(objective_config(c, Objective::kRwta).objective == Objective::kRwta);
  CHECK(objective_config(c, Objective::kRwta).eps == c.eps);
}

TEST_CASE("json parse errors carry line and column") {
  CHECK_THROWS_WITH_AS(parse_json("{\n  \"a\": 1,\n  oops\n}", "cfg.json"),
                       doctest::Contains("cfg.json:3:"), Error);
  const auto dir = oracle::scratch_dir("json");
  CHECK_THROWS_AS(read_json_file(dir / "missing.json"), FileNotFoundError);
  write_file_atomic(dir / "sub" / "x.json", "{\"k\": [1, 2]}");
  CHECK(read_json_file(dir / "sub" / "x.json")["k"][1] == 2);
  CHECK_FALSE(std::filesystem::exists(dir / "sub" / "x.json.tmp"));
}

TEST_CASE("scenario and graph serialization round trip") {
  SeededRng rng(4);
  LaneScenarioConfig cfg;
  cfg.merge = true;
  const auto sc = gen_lane_scenario(rng, cfg);
  const Json j = scenario_to_json(sc);
  const auto back = scenario_from_json(Json::parse(j.dump()));
  CHECK(scenario_to_json(back) == j);
  REQUIRE(back.agents.size() == sc.agents.size());
  CHECK(back.agents[0].future == sc.agents[0].future);
  CHECK(back.agents[0].acceleration == sc.agents[0].acceleration);
  CHECK(back.graph.size() == sc.graph.size());

  Json bad = j;
  bad["graph"]["segments"][0]["centerline"] = Json::array({Json::array({0, 0})});
  CHECK_THROWS_WITH_AS(scenario_from_json(bad), doctest::Contains("lane segment 'a'"), Error);
}

TEST_CASE("mlp serialization") {
  SeededRng rng(1);
  const Mlp net = Mlp::random({3, 4, 2}, rng);
  const Json j = mlp_to_json(net);
  const Mlp back = mlp_from_json(Json::parse(j.dump()));
  CHECK(std::equal(net.parameters().begin(), net.parameters().end(),
                   back.parameters().begin()));
  Json bad = j;
  bad["parameters"].erase(0);
  CHECK_THROWS_AS(mlp_from_json(bad), Error);
}

TEST_CASE("metric reports in csv and json") {
  MetricReport r;
  r.experiment = "toy";
  r.variant = "dac";
  r.strategy = "all";
  r.seed = 3;
  r.samples = 10;
  r.oracle_fde = 0.5;
  r.spurious_count = 0.0;
  CHECK(metrics_csv_row(r) == "toy,dac,all,3,10,0.5,,,,,,,,0");
  r.m_sel = 5;
  r.made = 0.1;
  CHECK(metrics_csv_row(r) == "toy,dac,all,3,10,0.5,,0.1,,,,5,,0");
  CHECK(metrics_csv(std::vector<MetricReport>{r}) ==
        metrics_csv_header() + "\n" + metrics_csv_row(r) + "\n");
  const Json j = report_to_json(r);
  CHECK(j["emd"].is_null());
  const auto back = report_from_json(j);
  CHECK(report_to_json(back) == j);
  CHECK(std::isnan(back.emd));
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-20) == "1e-20");
}
