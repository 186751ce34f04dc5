#pragma once

#include "twinslice/metrics/report.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace twinslice::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitError = 2;

struct MetricSpread
{
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SliceSpread
{
  SliceClass slice = SliceClass::umMTC;
  std::vector<std::pair<std::string, MetricSpread>> metrics; // fixed order
  std::uint32_t met = 0;
  std::uint32_t violated = 0;
  std::uint32_t noData = 0;
};

/// Mean/min/max of every per-slice metric across the runs of a sweep.
struct SweepSummary
{
  std::string scenario;
  std::vector<std::uint64_t> seeds;
  std::vector<SliceSpread> slices; // slices present in any run

  std::string toJson() const;
  std::string toCsv() const;
};

SweepSummary summarize(const std::vector<RunReport>& reports);

/// Entry point behind the `twinslice` executable; returns the exit code.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace twinslice::cli
