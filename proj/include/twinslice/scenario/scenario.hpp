#pragma once

#include "twinslice/net/stack.hpp"
#include "twinslice/net/topology.hpp"
#include "twinslice/slices/admission.hpp"
#include "twinslice/slices/slice.hpp"
#include "twinslice/twin/entity.hpp"
#include "twinslice/twin/twin.hpp"
#include "twinslice/workloads/workload.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twinslice {

struct TwinDef
{
  std::string name;
  TwinLevel level = TwinLevel::IndividualEdge;
  NodeId host = 0;
  NodeId entity = kNoNode; // mirrored device (individual twins)
  SliceClass slice = SliceClass::umMTC;
  SimTime syncPeriod = milliseconds(100);
  SimTime aggregationPeriod = milliseconds(100);
  std::vector<MetricSource> metrics;
  AggregationPolicy policy;
  std::vector<AlertRule> alerts;
  SliceClass alertSlice = SliceClass::ERLLC;
  std::optional<std::uint32_t> parent; // index into Scenario::twins
  std::vector<std::uint32_t> children;
};

struct RunConfig
{
  SimTime tEnd = seconds(10);
  std::uint64_t masterSeed = 1;
  bool json = true;
  bool csv = false;
  std::string output; // directory; empty -> stdout
  bool detail = true; // per-flow and per-twin sections in the JSON report
  SimTime metricsPeriod = seconds(1);
};

struct Scenario
{
  std::string name;
  std::string description;
  std::string digest; // hex SHA-256 of the source bytes
  TopologySpec topology;
  StackProfile stack;
  std::optional<double> frequencyThz;
  std::optional<double> wavelengthUm;
  std::vector<TwinDef> twins;
  ContractTable contracts = defaultContracts();
  AdmissionConfig admission;
  std::vector<WorkloadSpec> workloads;
  std::vector<FaultSpec> faults;
  RunConfig run;

  std::optional<NodeId> findNode(std::string_view name) const;
  const std::string& nodeName(NodeId id) const { return topology.nodes.at(id).name; }
};

/// Sync message payload: an 8-byte header plus 24 bytes per metric delta.
constexpr std::uint64_t syncPayloadBytes(std::size_t deltas) { return 8 + 24 * static_cast<std::uint64_t>(deltas); }
inline constexpr std::uint64_t kAlertPayloadBytes = 64;

class ParseError : public std::runtime_error
{
public:
  explicit ParseError(const std::string& what) : std::runtime_error("ParseError: " + what) {}
};

/// All semantic problems found in one pass, each prefixed by a field path.
class ValidationError : public std::runtime_error
{
public:
  explicit ValidationError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return m_errors; }

private:
  std::vector<std::string> m_errors;
};

/// Parses and fully validates a scenario document.
Scenario parseScenario(std::string_view bytes);

/// Reads and parses a scenario file; throws IoFailure when unreadable.
Scenario loadScenario(const std::string& path);

/// Lowercase hex SHA-256.
std::string sha256Hex(std::string_view bytes);

} // namespace twinslice
