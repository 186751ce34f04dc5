#include "twinslice/cli/cli.hpp"
#include "twinslice/error.hpp"
#include "twinslice/scenario/scenario.hpp"
#include "twinslice/scenario/units.hpp"
#include "twinslice/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <sstream>

namespace twinslice::cli {

using Json = nlohmann::ordered_json;

namespace {

std::string
formatNumber(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Per-slice metrics summarized by a sweep, in report order.
std::vector<std::pair<std::string, double>>
sliceMetrics(const SliceReport& s)
{
  return {
    {"sent", static_cast<double>(s.traffic.sent)},
    {"delivered", static_cast<double>(s.traffic.delivered)},
    {"dropped_loss", static_cast<double>(s.traffic.droppedLoss)},
    {"dropped_queue", static_cast<double>(s.traffic.droppedQueue)},
    {"dropped_fault", static_cast<double>(s.traffic.droppedFault)},
    {"mean_delay_ns", s.delay.meanNs},
    {"p50_ns", static_cast<double>(s.delay.p50Ns)},
    {"p99_ns", static_cast<double>(s.delay.p99Ns)},
    {"max_ns", static_cast<double>(s.delay.maxNs)},
    {"throughput_bps", s.throughputBps},
    {"reliability", s.traffic.reliability()},
  };
}

struct Formats
{
  bool json = true;
  bool csv = false;
};

std::optional<Formats>
parseFormats(const std::string& text, const Scenario& s)
{
  if (text.empty())
    return Formats{s.run.json || !s.run.csv, s.run.csv};
  if (text == "json")
    return Formats{true, false};
  if (text == "csv")
    return Formats{false, true};
  if (text == "both")
    return Formats{true, true};
  return std::nullopt;
}

void
ensureDirectory(const std::string& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoFailure("cannot create output directory '" + dir + "': " + ec.message());
}

std::string
joinPath(const std::string& dir, const std::string& file)
{
  return (std::filesystem::path(dir) / file).string();
}

struct CommonOptions
{
  std::string file;
  std::string until;
  std::string outDir;
  std::string format;
};

RunOverrides
overridesFor(const CommonOptions& o, std::optional<std::uint64_t> seed)
{
  RunOverrides ov;
  ov.seed = seed;
  if (!o.until.empty()) {
    auto t = units::parseDuration(o.until);
    if (!t || t->ticks == 0)
      throw Error("--until expects a positive duration such as 30s, got '" + o.until + "'");
    ov.tEnd = *t;
  }
  return ov;
}

int
commandValidate(const CommonOptions& o, std::ostream& out)
{
  const Scenario s = loadScenario(o.file);
  out << "valid: " << s.name << '\n';
  std::size_t kinds[3] = {0, 0, 0};
  for (const auto& n : s.topology.nodes)
    ++kinds[static_cast<std::size_t>(n.kind)];
  out << "  nodes: " << s.topology.nodes.size() << " (" << kinds[2] << " core, " << kinds[1] << " edge, "
      << kinds[0] << " device)\n";
  out << "  links: " << s.topology.links.size() << '\n';
  out << "  twins: " << s.twins.size() << '\n';
  out << "  workloads: " << s.workloads.size() << '\n';
  out << "  faults: " << s.faults.size() << '\n';
  out << "  digest: " << s.digest << '\n';
  return kExitOk;
}

int
commandRun(const CommonOptions& o, std::optional<std::uint64_t> seed, bool timing, std::ostream& out,
           std::ostream& err)
{
  const Scenario s = loadScenario(o.file);
  const auto formats = parseFormats(o.format, s);
  if (!formats)
    throw Error("--format expects json, csv or both, got '" + o.format + "'");

  const auto started = std::chrono::steady_clock::now();
  Simulation sim(s, overridesFor(o, seed));
  RunReport report = sim.run();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (timing)
    report.wallClockSeconds = wall;

  const std::string outDir = o.outDir.empty() ? s.run.output : o.outDir;
  if (outDir.empty()) {
    if (formats->json)
      out << emitJson(report);
    if (formats->csv)
      out << emitCsv(report);
  } else {
    ensureDirectory(outDir);
    if (formats->json)
      writeFile(joinPath(outDir, "report.json"), emitJson(report));
    if (formats->csv)
      writeFile(joinPath(outDir, "report.csv"), emitCsv(report));
  }

  err << "twinslice: " << s.name << " seed=" << report.masterSeed << " events=" << report.events
      << " wall_clock_s=" << formatNumber(wall) << '\n';
  for (const auto& sl : report.slices)
    if (sl.present)
      err << "  " << toString(sl.slice) << ": " << sl.verdict.describe() << '\n';
  return report.exitCode();
}

int
commandSweep(const CommonOptions& o, const std::vector<std::uint64_t>& seeds, std::ostream& out,
             std::ostream& err)
{
  if (seeds.empty())
    throw Error("--seeds needs at least one seed");
  const Scenario s = loadScenario(o.file);
  const auto formats = parseFormats(o.format, s);
  if (!formats)
    throw Error("--format expects json, csv or both, got '" + o.format + "'");

  // Each seed gets its own engine; results are collected in seed order.
  std::vector<std::future<RunReport>> pending;
  pending.reserve(seeds.size());
  for (auto seed : seeds) {
    const RunOverrides ov = overridesFor(o, seed);
    pending.push_back(std::async(std::launch::async, [&s, ov] { return Simulation(s, ov).run(); }));
  }
  std::vector<RunReport> reports;
  for (auto& f : pending)
    reports.push_back(f.get());
  const SweepSummary summary = summarize(reports);

  const std::string outDir = o.outDir.empty() ? s.run.output : o.outDir;
  if (outDir.empty()) {
    if (formats->json) {
      Json doc;
      doc["scenario"] = s.name;
      doc["seeds"] = seeds;
      Json runs = Json::array();
      for (const auto& r : reports)
        runs.push_back(Json::parse(emitJson(r)));
      doc["reports"] = std::move(runs);
      doc["summary"] = Json::parse(summary.toJson());
      out << doc.dump(2) << '\n';
    }
    if (formats->csv) {
      for (std::size_t i = 0; i < reports.size(); ++i)
        out << "# run " << i << " seed " << seeds[i] << '\n' << emitCsv(reports[i]);
      out << "# summary\n" << summary.toCsv();
    }
  } else {
    ensureDirectory(outDir);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const std::string stem = "run-" + std::to_string(i) + "-seed-" + std::to_string(seeds[i]);
      if (formats->json)
        writeFile(joinPath(outDir, stem + ".json"), emitJson(reports[i]));
      if (formats->csv)
        writeFile(joinPath(outDir, stem + ".csv"), emitCsv(reports[i]));
    }
    if (formats->json)
      writeFile(joinPath(outDir, "summary.json"), summary.toJson());
    if (formats->csv)
      writeFile(joinPath(outDir, "summary.csv"), summary.toCsv());
  }

  int code = kExitOk;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    err << "twinslice: " << s.name << " seed=" << seeds[i] << " events=" << reports[i].events;
    for (const auto& sl : reports[i].slices)
      if (sl.present)
        err << ' ' << toString(sl.slice) << '=' << sl.verdict.describe();
    err << '\n';
    code = std::max(code, reports[i].exitCode());
  }
  return code;
}

} // namespace

SweepSummary
summarize(const std::vector<RunReport>& reports)
{
  SweepSummary out;
  if (reports.empty())
    return out;
  out.scenario = reports.front().scenario;
  for (const auto& r : reports)
    out.seeds.push_back(r.masterSeed);

  for (SliceClass slice : kAllSlices) {
    const bool present = std::any_of(reports.begin(), reports.end(),
                                     [&](const RunReport& r) { return r.slices[index(slice)].present; });
    if (!present)
      continue;
    SliceSpread spread;
    spread.slice = slice;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& sr = reports[i].slices[index(slice)];
      const auto values = sliceMetrics(sr);
      if (i == 0)
        for (const auto& [name, v] : values)
          spread.metrics.push_back({name, MetricSpread{0.0, v, v}});
      for (std::size_t k = 0; k < values.size(); ++k) {
        auto& m = spread.metrics[k].second;
        m.mean += values[k].second;
        m.min = std::min(m.min, values[k].second);
        m.max = std::max(m.max, values[k].second);
      }
      switch (sr.verdict.status) {
      case SlaVerdict::Status::Met: ++spread.met; break;
      case SlaVerdict::Status::Violated: ++spread.violated; break;
      case SlaVerdict::Status::NoData: ++spread.noData; break;
      }
    }
    for (auto& [name, m] : spread.metrics)
      m.mean /= static_cast<double>(reports.size());
    out.slices.push_back(std::move(spread));
  }
  return out;
}

std::string
SweepSummary::toJson() const
{
  Json root;
  root["scenario"] = scenario;
  root["seeds"] = seeds;
  Json list = Json::array();
  for (const auto& s : slices) {
    Json j;
    j["slice"] = std::string(toString(s.slice));
    Json metrics;
    for (const auto& [name, m] : s.metrics)
      metrics[name] = {{"mean", roundSignificant(m.mean)}, {"min", roundSignificant(m.min)},
                       {"max", roundSignificant(m.max)}};
    j["metrics"] = std::move(metrics);
    j["verdicts"] = {{"met", s.met}, {"violated", s.violated}, {"no-data", s.noData}};
    list.push_back(std::move(j));
  }
  root["slices"] = std::move(list);
  return root.dump(2) + "\n";
}

std::string
SweepSummary::toCsv() const
{
  std::ostringstream os;
  os << "slice,metric,mean,min,max\n";
  for (const auto& s : slices)
    for (const auto& [name, m] : s.metrics)
      os << toString(s.slice) << ',' << name << ',' << formatNumber(m.mean) << ',' << formatNumber(m.min) << ','
         << formatNumber(m.max) << '\n';
  return os.str();
}

int
runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Discrete-event simulator for sliced 6G networks carrying hierarchical digital twins.", "twinslice"};
  app.require_subcommand(1);
  app.fallthrough(false);

  CommonOptions opts;
  std::optional<std::uint64_t> seed;
  bool timing = false;
  std::vector<std::uint64_t> seeds;

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario; list every problem found.");
  validate->add_option("file", opts.file, "Scenario file (.scn)")->required();

  auto* run = app.add_subcommand("run", "Run one scenario and emit its report.");
  run->add_option("file", opts.file, "Scenario file (.scn)")->required();
  run->add_option("--seed", seed, "Master seed (overrides run.master_seed)");
  run->add_option("--until", opts.until, "Simulated horizon, e.g. 30s (overrides run.t_end)");
  run->add_option("--out", opts.outDir, "Directory for report.json / report.csv (default: stdout)");
  run->add_option("--format", opts.format, "Report format: json, csv or both (default: run.formats)")
    ->check(CLI::IsMember({"json", "csv", "both"}));
  run->add_flag("--timing", timing, "Include wall_clock_s in the report (breaks byte-identical reruns)");

  auto* sweep = app.add_subcommand("sweep", "Run one scenario under several seeds and summarize across them.");
  sweep->add_option("file", opts.file, "Scenario file (.scn)")->required();
  sweep->add_option("--seeds", seeds, "Comma-separated master seeds, e.g. 1,2,3")->required()->delimiter(',');
  sweep->add_option("--until", opts.until, "Simulated horizon, e.g. 30s (overrides run.t_end)");
  sweep->add_option("--out", opts.outDir, "Directory for per-seed reports and the summary (default: stdout)");
  sweep->add_option("--format", opts.format, "Report format: json, csv or both (default: run.formats)")
    ->check(CLI::IsMember({"json", "csv", "both"}));

  app.footer("Exit status: 0 all slice verdicts met or no-data, 1 some SLA violated, 2 error.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (validate->parsed())
      return commandValidate(opts, out);
    if (run->parsed())
      return commandRun(opts, seed, timing, out, err);
    return commandSweep(opts, seeds, out, err);
  } catch (const ValidationError& e) {
    err << "twinslice: " << opts.file << " is invalid:\n";
    for (const auto& line : e.errors())
      err << "  " << line << '\n';
  } catch (const std::exception& e) {
    err << "twinslice: " << e.what() << '\n';
  }
  return kExitError;
}

} // namespace twinslice::cli
