#include "doctest.h"

#include "../support/harness.hpp"

#include "twinslice/cli/cli.hpp"
#include "twinslice/error.hpp"
#include "twinslice/scenario/scenario.hpp"
#include "twinslice/scenario/units.hpp"
#include "twinslice/simulation.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace twinslice;
using twinslice::testing::scenarioPath;
namespace fs = std::filesystem;

namespace {

struct CliResult
{
  int code = 0;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args)
{
  args.insert(args.begin(), "twinslice");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::runCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / "twinslice-tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path writeScenario(const std::string& name, const std::string& body)
{
  const auto p = scratch(name);
  std::ofstream(p) << body;
  return p;
}

// Console and robot on one edge; 10 Gb/s, 2 us access links.
std::string loopScenario(const std::string& loss)
{
  return R"({
    "meta": { "name": "loop" },
    "topology": {
      "nodes": [ {"name": "core", "kind": "core"}, {"name": "edge", "kind": "edge"},
                 {"name": "console", "kind": "device"}, {"name": "robot", "kind": "device"} ],
      "link_defaults": { "rate": "10gbps", "prop_delay": "2us" },
      "links": [ {"a": "edge", "b": "core"},
                 {"name": "to-console", "a": "console", "b": "edge"},
                 {"name": "to-robot", "a": "robot", "b": "edge", "loss": )" + loss + R"(} ]
    },
    "workloads": [ {"type": "surgery", "name": "op", "console": "console", "robot": "robot",
                    "cmd_rate_hz": 1000, "cmd_bytes": 200, "ack_bytes": 64} ],
    "run": { "t_end": "2s", "master_seed": 5 }
  })";
}

std::string errorsOf(const std::string& doc)
{
  try {
    parseScenario(doc);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("unit parsing")
{
  CHECK(units::parseDuration("1.5ms") == SimTime{1'500'000});
  CHECK(units::parseDuration("250") == SimTime{250});
  CHECK(units::parseDuration("2s") == seconds(2));
  CHECK_FALSE(units::parseDuration("0.5ns"));
  CHECK_FALSE(units::parseDuration("5 parsecs"));
  CHECK_FALSE(units::parseDuration("-1ms"));
  CHECK(units::parseRate("10gbps") == 10'000'000'000ULL);
  CHECK(units::parseRate("250kbps") == 250'000ULL);
  CHECK(units::parseRate("8Mbps") == 8'000'000ULL);
  CHECK(units::parseEnergy("10uJ") == 10'000'000ULL);
  CHECK(units::parseEnergy("1mJ") == 1'000'000'000ULL);
}

TEST_CASE("bundled ward scenario")
{
  const Scenario s = loadScenario(scenarioPath("ward.scn"));
  int cores = 0, edges = 0;
  for (const auto& n : s.topology.nodes) {
    cores += n.kind == NodeKind::CoreNode;
    edges += n.kind == NodeKind::EdgeNode;
  }
  CHECK(cores == 1);
  CHECK(edges == 2);
  CHECK(s.name == "ward");
  CHECK(s.digest.size() == 64);
  CHECK(s.run.masterSeed == 42);
}

TEST_CASE("every bundled scenario validates")
{
  for (const auto& entry : fs::directory_iterator(TWINSLICE_SCENARIO_DIR)) {
    if (entry.path().extension() != ".scn")
      continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(loadScenario(entry.path().string()));
  }
}

TEST_CASE("dangling node reference names the link and field")
{
  const std::string what = errorsOf(R"({
    "meta": { "name": "bad" }, "run": { "t_end": "1s" },
    "topology": {
      "nodes": [ {"name": "core", "kind": "core"}, {"name": "edge", "kind": "edge"} ],
      "links": [ {"a": "edge", "b": "core"}, {"name": "stray", "a": "edge", "b": 99} ]
    }
  })");
  CHECK(what.find("topology.links[1].b") != std::string::npos);
  CHECK(what.find("stray") != std::string::npos);
  CHECK(what.find("99") != std::string::npos);
}

TEST_CASE("fault recovering before it fails is rejected")
{
  const std::string what = errorsOf(R"({
    "meta": { "name": "bad" }, "run": { "t_end": "1s" },
    "topology": {
      "nodes": [ {"name": "core", "kind": "core"}, {"name": "edge", "kind": "edge"} ],
      "links": [ {"name": "up", "a": "edge", "b": "core"} ]
    },
    "faults": [ {"target": "up", "t_fail": "5s", "t_recover": "3s"} ]
  })");
  CHECK(what.find("faults[0]") != std::string::npos);
}

TEST_CASE("validation reports every error at once")
{
  try {
    parseScenario(R"({
      "topology": {
        "nodes": [ {"name": "core", "kind": "core"}, {"name": "edge", "kind": "edge"}, {"name": "d", "kind": "gadget"} ],
        "links": [ {"a": "edge", "b": "core", "rate": "fast"} ]
      },
      "workloads": [ {"type": "teleportation", "name": "x"} ],
      "bogus": 1
    })");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.errors().size() >= 4);
  }
}

TEST_CASE("syntax errors are ParseError")
{
  CHECK_THROWS_AS(parseScenario("{ \"topology\": "), ParseError);
  CHECK_THROWS_AS(loadScenario("/nonexistent/path.scn"), IoFailure);
}

TEST_CASE("comments are allowed")
{
  CHECK_NOTHROW(parseScenario(R"(// leading comment
  { /* block */ "meta": {"name": "c"}, "run": {"t_end": "1s"}, "topology": { "nodes": [ {"name": "c", "kind": "core"}, {"name": "e", "kind": "edge"} ],
    "links": [ {"a": "e", "b": "c"} ] } })"));
}

TEST_CASE("unloaded ERLLC loop meets its contract with the hand-computed delay")
{
  const Scenario sc = parseScenario(loopScenario("0"));
  Simulation sim(sc);
  const RunReport r = sim.run();
  // Command: 200 + 136 = 336 B over two 10 Gb/s 2 us hops.
  const std::uint64_t hop = (336 * 8 * 1'000'000'000ULL + 9'999'999'999ULL) / 10'000'000'000ULL + 2000;
  const std::uint64_t oneWay = 2 * hop;
  const std::uint64_t e2e = oneWay + 2 * (2 * oneWay); // two handshake round trips
  const auto& erllc = r.slices[index(SliceClass::ERLLC)];
  CHECK(erllc.verdict.describe() == "met");
  for (const auto& f : r.flows)
    if (f.name == "op/cmd") {
      CHECK(f.delay.minNs == e2e);
      CHECK(f.delay.maxNs == e2e);
    }
  CHECK(r.exitCode() == 0);

  const auto p = writeScenario("loop.scn", loopScenario("0"));
  CHECK(invoke({"run", p.string()}).code == cli::kExitOk);
}

TEST_CASE("half the frames lost on the ERLLC path")
{
  const auto p = writeScenario("lossy.scn", loopScenario("0.5"));
  const auto res = invoke({"run", p.string()});
  CHECK(res.code == cli::kExitViolation);
  const auto j = nlohmann::json::parse(res.out);
  std::string verdict;
  for (const auto& s : j["slices"])
    if (s["slice"] == "ERLLC")
      verdict = s["verdict"]["status"];
  CHECK(verdict == "violated(loss)");
  CHECK(res.err.find("violated(loss)") != std::string::npos);
}

TEST_CASE("cli errors")
{
  CHECK(invoke({"run", "/nonexistent/ward.scn"}).code == cli::kExitError);
  CHECK(invoke({"validate", "/nonexistent/ward.scn"}).code == cli::kExitError);
  CHECK(invoke({}).code == cli::kExitError);
  CHECK(invoke({"frobnicate"}).code == cli::kExitError);
  CHECK(invoke({"run", scenarioPath("ward.scn"), "--format", "xml"}).code == cli::kExitError);
  const auto bad = writeScenario("bad.scn", R"({ "topology": { "nodes": [] } })");
  const auto res = invoke({"validate", bad.string()});
  CHECK(res.code == cli::kExitError);
  CHECK_FALSE(res.err.empty());
  CHECK(invoke({"--help"}).code == cli::kExitOk);
  for (const char* sub : {"validate", "run", "sweep"})
    CHECK(invoke({sub, "--help"}).code == cli::kExitOk);
}

TEST_CASE("cli validate")
{
  const auto res = invoke({"validate", scenarioPath("ward.scn")});
  CHECK(res.code == cli::kExitOk);
  CHECK(res.out.find(loadScenario(scenarioPath("ward.scn")).digest) != std::string::npos);
}

TEST_CASE("cli run is deterministic and honours overrides")
{
  const auto a = invoke({"run", scenarioPath("ward.scn"), "--seed", "42"});
  const auto b = invoke({"run", scenarioPath("ward.scn"), "--seed", "42"});
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
  const auto c = invoke({"run", scenarioPath("ward.scn"), "--seed", "43", "--until", "5s"});
  const auto j = nlohmann::json::parse(c.out);
  CHECK(j["master_seed"] == 43);
  CHECK(j["t_end_ns"] == 5'000'000'000ULL);

  const auto dir = scratch("run-out");
  fs::remove_all(dir);
  CHECK(invoke({"run", scenarioPath("ward.scn"), "--out", dir.string(), "--format", "both"}).code == cli::kExitOk);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "report.csv"));
}

TEST_CASE("cli sweep")
{
  SUBCASE("three seeds")
  {
    const auto res = invoke({"sweep", scenarioPath("ward.scn"), "--seeds", "1,2,3", "--until", "5s"});
    CHECK(res.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["reports"].size() == 3);
    CHECK(j.contains("summary"));
    CHECK(j["reports"][1]["master_seed"] == 2);
  }
  SUBCASE("single seed summary equals the report")
  {
    const Scenario sc = loadScenario(scenarioPath("ward.scn"));
    Simulation sim(sc, {7, seconds(5)});
    const RunReport r = sim.run();
    const auto summary = cli::summarize({r});
    for (const auto& spread : summary.slices)
      for (const auto& [name, m] : spread.metrics) {
        CAPTURE(name);
        CHECK(m.mean == m.min);
        CHECK(m.min == m.max);
      }
    const auto& erllc = r.slices[index(SliceClass::ERLLC)];
    for (const auto& spread : summary.slices)
      if (spread.slice == SliceClass::ERLLC)
        for (const auto& [name, m] : spread.metrics)
          if (name == "sent")
            CHECK(m.mean == static_cast<double>(erllc.traffic.sent));
  }
  SUBCASE("duplicate seeds give identical reports")
  {
    const auto res = invoke({"sweep", scenarioPath("ward.scn"), "--seeds", "7,7", "--until", "5s"});
    const auto j = nlohmann::json::parse(res.out);
    REQUIRE(j["reports"].size() == 2);
    CHECK(j["reports"][0].dump() == j["reports"][1].dump());
  }
  SUBCASE("output directory")
  {
    const auto dir = scratch("sweep-out");
    fs::remove_all(dir);
    CHECK(invoke({"sweep", scenarioPath("ward.scn"), "--seeds", "4,5", "--until", "2s", "--out", dir.string(),
               "--format", "both"})
            .code == cli::kExitOk);
    CHECK(fs::exists(dir / "run-0-seed-4.json"));
    CHECK(fs::exists(dir / "run-1-seed-5.csv"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "summary.csv"));
  }
}
