#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lanedac/cli.hpp"
#include "lanedac/config.hpp"
#include "lanedac/json_io.hpp"
#include "support/oracles.hpp"

using namespace lanedac;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "lanedac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& body) {
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

const char* kTinyLanes = R"({
  "lanes": {"train_scenarios": 4, "test_scenarios": 3, "iterations": 30,
            "hidden": [16], "cells": ["nt", "ntxy_reg"]}})";

const char* kTinyCpi = R"({
  "cpi": {"hypotheses": 1, "hidden": [8], "train_scenes": 20, "iterations": 40,
          "stage2_iterations": 10, "test_scenes": 3, "gt_samples": 8, "heldout_scenes": 3}})";

}  // namespace

TEST_CASE("help, bad flags and missing files") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"fit-toy", "--bogus"}).code == 1);
  const auto dir = oracle::scratch_dir("cli_missing");
  const auto r = run({"fit-toy", "--config", (dir / "nope.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("nope.json") != std::string::npos);
  CHECK(run({"eval", "--checkpoint", (dir / "a.json").string(), "--dataset",
             (dir / "b.json").string()})
            .code == 2);
  const auto bad = write_config(dir, "bad.json", R"({"toy": {"stepz": 1}})");
  const auto e = run({"fit-toy", "--config", bad.string()});
  CHECK(e.code == 1);
  CHECK(e.err.find("toy.stepz") != std::string::npos);
}

TEST_CASE("fit-toy outputs are deterministic") {
  const auto dir = oracle::scratch_dir("cli_toy");
  const auto a = dir / "a", b = dir / "b";
  REQUIRE(run({"fit-toy", "--steps", "300", "--seed", "4", "--out", a.string()}).code == 0);
  REQUIRE(run({"fit-toy", "--steps", "300", "--seed", "4", "--out", b.string()}).code == 0);
  CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(fs::exists(a / "toy_dac_seed4.svg"));
  const Json manifest = read_json_file(a / "manifest.json");
  CHECK(manifest["config_hash"] == config_hash(config_from_json(manifest["config"])));
  CHECK(manifest["seeds"] == Json::array({4}));
}

TEST_CASE("fit-toy with zero steps leaves the initialization unchanged") {
  const auto dir = oracle::scratch_dir("cli_toy0");
  REQUIRE(run({"fit-toy", "--steps", "0", "--out", dir.string()}).code == 0);
  const Json rep = read_json_file(dir / "report.json");
  REQUIRE(rep["details"].size() == 4);
  for (const auto& d : rep["details"]) CHECK(d["hypotheses"] == d["initial"]);
}

TEST_CASE("fit-toy: divide and conquer leaves fewer spurious modes than winner-takes-all") {
  const auto dir = oracle::scratch_dir("cli_toy_cmp");
  REQUIRE(run({"fit-toy", "--objective", "dac", "--seed", "1", "--out", (dir / "d").string()})
              .code == 0);
  REQUIRE(run({"fit-toy", "--objective", "wta", "--seed", "1", "--out", (dir / "w").string()})
              .code == 0);
  const Json d = read_json_file(dir / "d" / "report.json");
  const Json w = read_json_file(dir / "w" / "report.json");
  REQUIRE(d["rows"].size() == 1);
  CHECK(d["rows"][0]["variant"] == "dac");
  CHECK(d["rows"][0]["spurious_count"].get<double>() <
        w["rows"][0]["spurious_count"].get<double>());
}

TEST_CASE("train-cpi with one hypothesis makes every variant identical") {
  const auto dir = oracle::scratch_dir("cli_cpi");
  const auto cfg = write_config(dir, "cpi.json", kTinyCpi);
  REQUIRE(run({"train-cpi", "--config", cfg.string(), "--out", (dir / "o").string()}).code == 0);
  const Json rep = read_json_file(dir / "o" / "report.json");
  REQUIRE(rep["rows"].size() == 4);
  for (const auto& row : rep["rows"]) {
    CHECK(row["oracle_fde"] == rep["rows"][0]["oracle_fde"]);
    CHECK(row["emd"] == rep["rows"][0]["emd"]);
  }
  const Json manifest = read_json_file(dir / "o" / "manifest.json");
  CHECK(manifest["config_hash"] == config_hash(config_from_json(manifest["config"])));
}

TEST_CASE("train-lanes, eval and plot") {
  const auto dir = oracle::scratch_dir("cli_lanes");
  const auto cfg = write_config(dir, "lanes.json", kTinyLanes);
  const auto out = dir / "o";
  REQUIRE(run({"train-lanes", "--config", cfg.string(), "--seed", "2", "--out", out.string()})
              .code == 0);
  const Json rep = read_json_file(out / "report.json");
  REQUIRE(rep["rows"].size() == 6);

  // Re-evaluating the saved checkpoint reproduces the training-run rows.
  const auto ev = dir / "eval";
  REQUIRE(run({"eval", "--checkpoint", (out / "checkpoints" / "ntxy_reg_seed2.json").string(),
               "--dataset", (out / "test_seed2.json").string(), "--out", ev.string()})
              .code == 0);
  const Json erep = read_json_file(ev / "report.json");
  REQUIRE(erep["rows"].size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(erep["rows"][i] == rep["rows"][3 + i]);

  // A strict bad-anchor threshold drops samples.
  const auto fe = dir / "filtered";
  REQUIRE(run({"eval", "--checkpoint", (out / "checkpoints" / "nt_seed2.json").string(),
               "--dataset", (out / "test_seed2.json").string(), "--out", fe.string(),
               "--filter-bad-anchors", "0.05"})
              .code == 0);
  const Json frep = read_json_file(fe / "report.json");
  CHECK(frep["rows"][0]["samples"].get<std::size_t>() <
        rep["rows"][0]["samples"].get<std::size_t>());

  const auto pl = dir / "plot";
  REQUIRE(run({"plot", "--dataset", (out / "test_seed2.json").string(), "--checkpoint",
               (out / "checkpoints" / "nt_seed2.json").string(), "--scenario", "1", "--out",
               pl.string()})
              .code == 0);
  const std::string svg = slurp(pl / "scenario_1.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(run({"plot", "--dataset", (out / "test_seed2.json").string(), "--scenario", "99"}).code ==
        1);

  // Identical invocation, identical bytes.
  const auto again = dir / "again";
  REQUIRE(run({"train-lanes", "--config", cfg.string(), "--seed", "2", "--out", again.string()})
              .code == 0);
  CHECK(slurp(again / "metrics.csv") == slurp(out / "metrics.csv"));
  CHECK(slurp(again / "report.json") == slurp(out / "report.json"));
}
